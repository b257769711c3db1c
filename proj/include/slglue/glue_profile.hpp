#pragma once

namespace slglue {

// Radii, margins and the gluing scale shared by the desingularized mesh.
struct GlueProfile {
    double R1 = 1.0;
    double R2 = 4.0;
    double hbar = 0.01;
    double tau = 0.1;
    double eps = 0.05;
    int m = 3;

    // largest admissible gluing scale for these radii and margins
    double eps_limit() const;
    void validate() const;
};

// Smooth increasing cutoff: exactly 0 on (0,1], exactly 1 on [2,inf),
// built from the standard exp(-1/t) partition.
double cutoff_chi(double y);
double cutoff_chi_d1(double y);
double cutoff_chi_d2(double y);

struct CutoffBounds {
    double sup_d1 = 0.0;
    double sup_d2 = 0.0;
};
// sup of |chi'| and |chi''| sampled on a fine grid of the transition interval
CutoffBounds cutoff_bounds(int grid_points = 20001);

// Radial interpolation between the eps-dilation near R1 and the identity
// near R2; strictly increasing from eps*R1 onto R2.
double kappa(const GlueProfile& profile, double r);
double kappa_derivative(const GlueProfile& profile, double r);
// inverse of kappa on (eps*R1, R2)
double kappa_inverse(const GlueProfile& profile, double value);

// Weight profile: scale near the tip, ambient radius across the middle,
// constant R2 outside.
double weight_tip(const GlueProfile& profile, double unit_neck_radius);
double weight_intermediate(const GlueProfile& profile, double r);
double weight_outer(const GlueProfile& profile);

}  // namespace slglue
