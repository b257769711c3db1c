#include "slglue/root_find.hpp"

#include <cmath>
#include <vector>

#include "slglue/errors.hpp"

namespace slglue {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

RootResult find_root(const VectorMap& F, Eigen::VectorXd x0, const RootOptions& options) {
    if (options.project) options.project(x0);
    Eigen::VectorXd x = x0;
    Eigen::VectorXd fx = F(x);
    const Eigen::Index n = x.size();
    if (fx.size() != n)
        throw std::invalid_argument("find_root: F must map R^n to R^n");
    double res = fx.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (res <= options.tol) return {x, res, iter};
        if (!std::isfinite(res))
            throw NonConvergenceError("find_root: residual became non-finite", to_std(x), res);

        Eigen::MatrixXd J(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = options.fd_step * std::max(1.0, std::abs(x[j]));
            Eigen::VectorXd xp = x;
            xp[j] += h;
            if (options.project) options.project(xp);
            const double hh = xp[j] - x[j];
            if (hh == 0.0)
                throw NonConvergenceError(
                    "find_root: projection collapsed a finite-difference step", to_std(x), res);
            J.col(j) = (F(xp) - fx) / hh;
        }

        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        lu.setThreshold(1e-13);
        if (!lu.isInvertible())
            throw SingularJacobianError("find_root: Jacobian is numerically singular");
        const Eigen::VectorXd step = lu.solve(-fx);

        double lambda = 1.0;
        bool improved = false;
        Eigen::VectorXd x_next, f_next;
        double res_next = 0.0;
        for (int k = 0; k <= options.max_halvings; ++k) {
            x_next = x + lambda * step;
            if (options.project) options.project(x_next);
            f_next = F(x_next);
            res_next = f_next.lpNorm<Eigen::Infinity>();
            if (std::isfinite(res_next) && res_next < res) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved)
            throw NonConvergenceError(
                "find_root: damping failed to reduce the residual", to_std(x), res);
        x = x_next;
        fx = f_next;
        res = res_next;
    }
    if (res <= options.tol) return {x, res, options.max_iterations};
    throw NonConvergenceError("find_root: iteration budget exhausted", to_std(x), res);
}

}  // namespace slglue
