#include "slglue/ode.hpp"

#include <algorithm>
#include <cmath>

#include "slglue/errors.hpp"

namespace slglue {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXd OdePath::eval(double t) const {
    if (times.empty()) throw std::logic_error("OdePath::eval on empty path");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double h = times[i + 1] - times[i];
    const double u = (t - times[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * values[i] + (u3 - 2 * u2 + u) * h * derivatives[i] +
           (-2 * u3 + 3 * u2) * values[i + 1] + (u3 - u2) * h * derivatives[i + 1];
}

Eigen::VectorXd OdePath::eval_derivative(double t) const {
    if (times.empty()) throw std::logic_error("OdePath::eval_derivative on empty path");
    if (t <= times.front()) return derivatives.front();
    if (t >= times.back()) return derivatives.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double h = times[i + 1] - times[i];
    const double u = (t - times[i]) / h;
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) / h) * values[i] + (3 * u2 - 4 * u + 1) * derivatives[i] +
           ((-6 * u2 + 6 * u) / h) * values[i + 1] + (3 * u2 - 2 * u) * derivatives[i + 1];
}

OdePath integrate_ode(const OdeRhs& rhs, double t0, Eigen::VectorXd y0, double t1,
                      const OdeOptions& options) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_ode: need t1 > t0");
    OdePath path;
    double t = t0;
    Eigen::VectorXd y = std::move(y0);
    Eigen::VectorXd f = rhs(t, y);
    path.times.push_back(t);
    path.values.push_back(y);
    path.derivatives.push_back(f);

    const double span = t1 - t0;
    double h = options.initial_step > 0.0 ? options.initial_step : span / 100.0;
    h = std::min(h, span);

    auto check_state = [&](const Eigen::VectorXd& v, double at) {
        if (!v.allFinite() || v.lpNorm<Eigen::Infinity>() > options.blowup_cap)
            throw OdeBlowupError("integrate_ode: state exceeded the blow-up cap", at);
    };

    long steps = 0;
    while (t < t1) {
        if (++steps > options.max_steps)
            throw OdeBlowupError("integrate_ode: step budget exhausted", t);
        h = std::min(h, t1 - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw OdeBlowupError("integrate_ode: step size underflow", t);

        const Eigen::VectorXd k1 = f;
        const Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
        const Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Eigen::VectorXd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Eigen::VectorXd k5 =
            rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Eigen::VectorXd k6 =
            rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Eigen::VectorXd y5 =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Eigen::VectorXd k7 = rhs(t + h, y5);
        const Eigen::VectorXd err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        // a non-finite trial (e.g. a stage left the rhs domain) is a step
        // rejection, not a blow-up: NaN would slip through max() comparisons
        double err = 0.0;
        if (!y5.allFinite() || !err_vec.allFinite()) {
            err = 1e10;
        } else {
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double scale =
                    options.tol + options.tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(err_vec[i]) / scale);
            }
            if (!std::isfinite(err)) err = 1e10;
        }

        if (err <= 1.0) {
            t += h;
            y = y5;
            f = k7;  // FSAL
            check_state(y, t);
            path.times.push_back(t);
            path.values.push_back(y);
            path.derivatives.push_back(f);
            path.error_estimate += err_vec.lpNorm<Eigen::Infinity>();
        }
        const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return path;
}

}  // namespace slglue
