#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slglue/mesh.hpp"

namespace slglue {

// One time slice of a sampled space-time field: the slice time, the weight
// rho per sample, the field values, ambient positions for pair distances,
// and a per-sample cap on admissible spatial pair distances.
struct NormSlice {
    double t = 1.0;
    Eigen::VectorXd rho;
    Eigen::VectorXd values;
    Eigen::MatrixXd points;  // one column per sample
    Eigen::VectorXd cap;
};

// Exponent tuple for the weighted space-time norms together with the start
// time Lambda and the transition exponent tau of the gluing profile.
struct NormParams {
    double mu = 0.0;
    double nu = 0.0;
    double alpha = 0.01;
    double zeta = 0.0;
    double Lambda = 1.0;
    double tau = 0.1;
};

// One inequality of the admissibility system: value must lie in the open
// interval (lower, upper).
struct ConstraintCheck {
    std::string name;
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool ok = false;
};

struct ConstantsReport {
    std::vector<ConstraintCheck> checks;
    bool ok = false;
    std::string first_violation;  // empty when ok
};

// Evaluates the admissible ranges of nu, alpha, tau, mu, zeta in dimension m.
// The checks are reported in that order and first_violation names the first
// failing one.
ConstantsReport check_constants(const NormParams& p, int m);

// A tuple inside the admissible region for dimension m.
NormParams example_constants(int m);

// sup over slices and samples of t^mu rho^nu |T|.
double weighted_sup(std::span<const NormSlice> slices, double mu, double nu);
double weighted_sup(std::span<const NormSlice> slices, const NormParams& p);

struct HolderReport {
    double spatial = 0.0;
    double temporal = 0.0;
    int budget = 0;
    std::uint64_t seed = 0;
    int spatial_pairs = 0;
    int temporal_pairs = 0;
};

// Discrete Holder seminorm estimates over a randomized pair budget.
//
// Spatial quotients compare two samples of one slice at chord distance
// d in (0, cap) and contribute t^mu min(rho_1, rho_2)^(nu+2 alpha)
// |T_1 - T_2| / d^(2 alpha).  Temporal quotients compare one sample index
// across slice pairs with t_1 < t_2 <= 2 t_1 and t_2 - t_1 < t_1^(-2/(m-2))
// and contribute t_1^mu rho^(nu+2 alpha) |T(t_1) - T(t_2)| / gap^alpha.
//
// Estimates are lower bounds of the continuum suprema, deterministic for a
// fixed seed, and monotone in pair_budget (running max over a shared draw
// stream).  Slices must have equal sample counts so that a sample index is
// a fixed static probe.
HolderReport holder_seminorms(std::span<const NormSlice> slices, const NormParams& p,
                              int m, int pair_budget, std::uint64_t seed = 12345);

// Packs a per-sample field of a glued mesh into a slice at time t.  The
// spatial cap is min(1, rho), a proxy for the injectivity radius: order
// eps on the neck and order of the cone radius outside.
NormSlice slice_from_mesh(const GluedMesh& mesh, double t, const Eigen::VectorXd& values);

// Slice of the Lagrangian angle field (mesh must carry theta).
NormSlice theta_slice(const GluedMesh& mesh, double t);

}  // namespace slglue
