#include "slglue/lattice.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "slglue/errors.hpp"

namespace slglue {

void TorusLattice::validate() const {
    const int m = dim();
    if (m < 3) throw LatticeError("lattice dimension must be at least 3");
    if (basis0.rows() != m || basis0.cols() != m || basis_phi.rows() != m ||
        basis_phi.cols() != m)
        throw LatticeError("plane bases must be m x m");
    for (int j = 0; j < m; ++j)
        if (!(phi[j] > 0.0) || !(phi[j] < std::numbers::pi))
            throw LatticeError("plane angles must lie strictly between 0 and pi");
    if (std::abs(phi.sum() - std::numbers::pi) > 1e-9)
        throw LatticeError("plane angles must sum to pi");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(generators());
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) throw LatticeError("lattice bases do not span the ambient space");
}

Eigen::MatrixXd TorusLattice::generators() const {
    const int m = dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    g.topLeftCorner(m, m) = basis0;
    g.topRightCorner(m, m) = phi.array().cos().matrix().asDiagonal() * basis_phi;
    g.bottomRightCorner(m, m) = phi.array().sin().matrix().asDiagonal() * basis_phi;
    return g;
}

double TorusLattice::V1() const { return std::abs(basis0.determinant()); }
double TorusLattice::V2() const { return std::abs(basis_phi.determinant()); }
double TorusLattice::covolume() const { return std::abs(generators().determinant()); }

Eigen::VectorXd TorusLattice::reduce(const Eigen::VectorXd& p) const {
    const Eigen::MatrixXd g = generators();
    if (p.size() != g.rows()) throw LatticeError("ambient point has the wrong dimension");
    Eigen::VectorXd c = g.partialPivLu().solve(p);
    for (int i = 0; i < c.size(); ++i) c[i] -= std::round(c[i]);
    return g * c;
}

double TorusLattice::shortest_vector() const {
    const Eigen::MatrixXd g = generators();
    const int n = static_cast<int>(g.cols());
    // For the near-orthogonal bases used here a +-2 window suffices.
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXi k = Eigen::VectorXi::Constant(n, -2);
    while (true) {
        if (k.cwiseAbs().maxCoeff() != 0) {
            const double len = (g * k.cast<double>()).norm();
            best = std::min(best, len);
        }
        int i = 0;
        while (i < n && ++k[i] > 2) k[i++] = -2;
        if (i == n) break;
    }
    return best;
}

TorusLattice TorusLattice::cubic(int m, double scale, const Eigen::VectorXd& phi) {
    TorusLattice lat;
    lat.phi = phi;
    lat.basis0 = scale * Eigen::MatrixXd::Identity(m, m);
    lat.basis_phi = scale * Eigen::MatrixXd::Identity(m, m);
    lat.validate();
    return lat;
}

double mc_covolume(const Eigen::MatrixXd& basis, double box, unsigned seed) {
    const int m = static_cast<int>(basis.rows());
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd shift(m);
    for (int i = 0; i < m; ++i) shift[i] = box * unif(rng);

    // count lattice points basis*k inside the shifted box via bounds on k
    const Eigen::MatrixXd inv = basis.inverse();
    Eigen::VectorXi klo(m), khi(m);
    for (int i = 0; i < m; ++i) {
        double lo = 0.0, hi = 0.0;
        for (int j = 0; j < m; ++j) {
            const double a = inv(i, j);
            const double c0 = a * shift[j];
            const double c1 = a * (shift[j] + box);
            lo += std::min(c0, c1);
            hi += std::max(c0, c1);
        }
        klo[i] = static_cast<int>(std::floor(lo)) - 1;
        khi[i] = static_cast<int>(std::ceil(hi)) + 1;
    }
    long count = 0;
    Eigen::VectorXi k = klo;
    while (true) {
        const Eigen::VectorXd p = basis * k.cast<double>();
        bool inside = true;
        for (int i = 0; i < m && inside; ++i)
            inside = p[i] >= shift[i] && p[i] < shift[i] + box;
        if (inside) ++count;
        int i = 0;
        while (i < m && ++k[i] > khi[i]) {
            k[i] = klo[i];
            ++i;
        }
        if (i == m) break;
    }
    if (count == 0) throw LatticeError("covolume box too small: no lattice points counted");
    return std::pow(box, m) / static_cast<double>(count);
}

}  // namespace slglue
