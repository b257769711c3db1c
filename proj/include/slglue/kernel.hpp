#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slglue/mesh.hpp"

namespace slglue {

// Piecewise interpolation between vertex values d across the neck: constant
// on the outer components, the beta-profile ramp on the tip, and the
// cutoff blend of the two on the intermediate regions.
double kernel_fn(const GlueProfile& profile, const Neck& neck, const Eigen::Vector2d& d,
                 const MeshSample& sample);

struct KernelElement {
    Eigen::Vector2d d;
    std::vector<double> values;   // aligned with mesh samples
    Eigen::Vector2d outer_values;
    double mean = 0.0;
    double normL2 = 0.0;
};

// w_d sampled over the mesh, without normalization.
KernelElement kernel_element(const GluedMesh& mesh, const Eigen::Vector2d& d);

// Subtracts the volume-weighted mean (outer parts integrated exactly) so the
// result is L2-orthogonal to constants; stores the mean and L2 norm.
KernelElement normalize_kernel(const GluedMesh& mesh, const KernelElement& raw);

// d(eps^2)/dt times the per-region affine profiles plus matching constants;
// the eps-derivative of the interpolated potential enters by a central
// difference with step delta_rel * eps.
double xi_zero(const GluedMesh& mesh, const Eigen::Vector2d& constants, double deps2_dt,
               const MeshSample& sample, double delta_rel = 1e-4);

std::vector<double> xi_zero_field(const GluedMesh& mesh, const Eigen::Vector2d& constants,
                                  double deps2_dt, double delta_rel = 1e-4);

// central difference in eps of the interpolated potential at fixed frak_r
double q_eps_derivative(const GlueProfile& profile, const Neck& neck, End end,
                        const Eigen::VectorXd& sigma, double frak_r,
                        double delta_rel = 1e-4);

// integral of field * weight over the glued manifold: mesh samples by
// coordinate quadrature times sqrt(det g), outer components analytically
double project(const GluedMesh& mesh, const std::vector<double>& field,
               const std::vector<double>& weight, const Eigen::Vector2d& field_outer,
               const Eigen::Vector2d& weight_outer);

struct ProjectionReport {
    double eps = 0.0;
    double t = 0.0;
    double deps2_dt = 0.0;
    double pi_w = 0.0;          // projection of theta + xi(0) onto normalized kernel
    double pi_1 = 0.0;          // projection onto constants
    double closed_form = 0.0;   // c_L V1 V2/(V1+V2) [deps2 + (A/c_L)(V1+V2)/(V1V2) eps^m]
    double residual = 0.0;      // pi_w - closed_form
    double kernel_mean = 0.0;
    double kernel_norm = 0.0;
};

// Builds theta, xi(0) and the normalized kernel on the mesh and assembles
// both projections; deps2_dt fixes the schedule slope (0 freezes the neck).
// Computes metric and theta fields first if the mesh lacks them.
ProjectionReport balancing_projection(GluedMesh& mesh, double deps2_dt,
                                      double theta_h_rel = 5e-3);

}  // namespace slglue
