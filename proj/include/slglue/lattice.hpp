#pragma once

#include <Eigen/Dense>

namespace slglue {

// Lattice of a flat complex torus containing two special Lagrangian tori:
// the real plane with basis0 and the plane rotated by diag(e^{i phi_j})
// with coefficient basis basis_phi. Ambient coordinates are stacked
// (Re z, Im z) in R^{2m}.
struct TorusLattice {
    Eigen::VectorXd phi;
    Eigen::MatrixXd basis0;
    Eigen::MatrixXd basis_phi;

    int dim() const { return static_cast<int>(phi.size()); }
    void validate() const;

    Eigen::MatrixXd generators() const;  // 2m x 2m, columns generate Gamma
    double V1() const;                   // plane-1 torus volume
    double V2() const;
    double covolume() const;

    // representative of p mod Gamma in the centered fundamental cell
    Eigen::VectorXd reduce(const Eigen::VectorXd& p) const;

    // shortest nonzero lattice vector length (by bounded enumeration)
    double shortest_vector() const;

    static TorusLattice cubic(int m, double scale, const Eigen::VectorXd& phi);
};

// Covolume of the lattice spanned by basis columns, estimated by counting
// lattice points in a randomly shifted box of side `box`.
double mc_covolume(const Eigen::MatrixXd& basis, double box, unsigned seed);

}  // namespace slglue
