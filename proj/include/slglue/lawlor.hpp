#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "slglue/spline.hpp"

namespace slglue {

// Parameter vector a of the neck family; all entries positive, m >= 3.
struct NeckParams {
    Eigen::VectorXd a;
    int dim() const { return static_cast<int>(a.size()); }
    void validate() const;
};

// Asymptotic data of a neck: plane angles phi_j in (0, pi) summing to pi and
// the enclosed-volume invariant A > 0.
struct PhaseData {
    Eigen::VectorXd phi;
    double A = 0.0;
    int dim() const { return static_cast<int>(phi.size()); }
    void validate(double angle_sum_tol = 1e-9) const;
};

struct NeckAsymptotics {
    double c_plus = 0.0;  // primitive gap between the two ends
    double gamma = 0.0;   // decay rate of the end graphs, 2 - m
};

struct NeckPoint {
    double s = 0.0;
    Eigen::VectorXd x;      // unit vector on the link
    Eigen::VectorXcd z;     // per-coordinate factors, |z_j|^2 = 1/a_j + s^2
    Eigen::VectorXcd point; // z_j * x_j
};

// (prod_j (1 + a_j y^2) - 1) / y^2, stable at y = 0 where it equals sum a_j.
double p_poly(const NeckParams& params, double y);

// Forward map a -> (phi, A).
PhaseData phases_from_params(const NeckParams& params, double tol = 1e-12);

// Inverse map via damped Newton from the symmetric point matched to A.
NeckParams params_from_phases(const PhaseData& target, double tol = 1e-10);

// Primitive gap c_plus as a plain integral (no cached neck needed).
double neck_constant_value(const NeckParams& params, double tol = 1e-13);

enum class End { Minus, Plus };

// A neck with cached phase and primitive profiles. Heavy to construct,
// cheap to query; immutable afterwards.
class Neck {
  public:
    explicit Neck(NeckParams params, double tol = 1e-12);

    int dim() const { return m_; }
    const NeckParams& params() const { return params_; }
    const PhaseData& phases() const { return phases_; }
    NeckAsymptotics asymptotics() const { return {c_plus_, 2.0 - m_}; }
    double c_plus() const { return c_plus_; }

    // angle of z_j; increasing from 0 to phi_j
    double psi(int j, double s) const;
    double psi_derivative(int j, double s) const;

    // primitive of the restricted Liouville form; increasing from 0 to c_plus
    double beta(double s) const;

    NeckPoint point(double s, const Eigen::VectorXd& x) const;

    // --- end graphs over the asymptotic planes -------------------------
    // The Plus end is rotated back to the real plane by diag(e^{-i phi_j});
    // both ends are then graphs q -> q + i grad(q) for q = r * sigma.
    struct GraphSample {
        double s = 0.0;
        Eigen::VectorXd x;
        Eigen::VectorXd grad;       // gradient of the end potential at r * sigma
        double radial_slope = 0.0;  // grad . sigma
    };
    GraphSample graph_sample(End end, const Eigen::VectorXd& sigma, double r) const;

    // potential from its primitive identity: (r/2) d_r ptl - ptl + c = beta.
    // One ray solve per call, exact up to solver and spline tolerance.
    double end_potential_closed(End end, const Eigen::VectorXd& sigma, double r) const;

    // potential by integrating the sampled radial derivative inward from a
    // far cap seeded with the two-term decay model; independent route used
    // for cross-checks.
    double end_potential(End end, const Eigen::VectorXd& sigma, double r,
                         double tol = 1e-10) const;

    // two-term far-field model fitted from the sampled radial slope
    double end_potential_model(End end, const Eigen::VectorXd& sigma, double r) const;

    // plane position -> ambient point of the end graph (ambient coordinates,
    // i.e. the Plus end is rotated by diag(e^{i phi_j}))
    Eigen::VectorXcd graph_point(End end, const Eigen::VectorXd& q) const;

    Eigen::VectorXcd end_rotation(End end, const Eigen::VectorXcd& w) const;

    // parameter at which the plane projection of the ray s -> point(s, x)
    // reaches radius r on the Minus side (the Plus side is its mirror image)
    double ray_boundary_minus(const Eigen::VectorXd& x, double r) const;

  private:
    struct RaySolve {
        double s;
        Eigen::VectorXd x;
        Eigen::VectorXd im;  // imaginary parts at the solution
    };
    RaySolve solve_minus(const Eigen::VectorXd& sigma, double r) const;
    double re_zeta(int j, double s) const;       // Minus end real part
    double re_zeta_deriv(int j, double s) const;
    double im_zeta(int j, double s) const;

    // Profiles are cached for the rescaled parameters a / geomean(a), for
    // which the waist has unit scale; queries rescale via
    // psi_a(s) = psi_ahat(lambda s) with lambda = sqrt(geomean(a)).
    double psi_hat(int j, double s_hat) const;
    double beta_hat(double s_hat) const;

    int m_ = 0;
    NeckParams params_;
    NeckParams ahat_;
    double lambda_ = 1.0;
    double scale_ = 1.0;  // geomean(a)
    PhaseData phases_;
    double c_plus_ = 0.0;
    double c_plus_hat_ = 0.0;
    double quad_tol_ = 1e-12;
    double s_core_ = 3.0;
    std::vector<CubicSpline> psi_core_;  // vs s_hat on [-s_core, s_core]
    std::vector<CubicSpline> psi_tail_;  // vs v = -1/s_hat on [0, 1/s_core]
    CubicSpline beta_core_;
    CubicSpline beta_tail_;
};

// Free-function views matching the operation names used elsewhere.
inline NeckPoint neck_point(const Neck& n, double s, const Eigen::VectorXd& x) {
    return n.point(s, x);
}
inline double beta_potential(const Neck& n, double s) { return n.beta(s); }
inline NeckAsymptotics neck_constant(const Neck& n) { return n.asymptotics(); }
inline double end_potential(const Neck& n, End e, const Eigen::VectorXd& sigma, double r,
                            double tol = 1e-10) {
    return n.end_potential(e, sigma, r, tol);
}

struct SpecialCheckReport {
    double max_symplectic = 0.0;  // sup |omega(T_u, T_v)| over sampled frames
    double angle_spread = 0.0;    // circular spread of the frame angle
    double angle_value = 0.0;     // circular mean of the frame angle, reported only
};

// Finite-difference tangent frames at random points: symplectic residual and
// constancy of the frame angle. Both residuals are O(h^2).
SpecialCheckReport special_check(const Neck& neck, int samples, double h, unsigned seed);

// Integral of the imaginary calibration over the centre disk, as a fraction
// of the invariant A. Reported, not asserted.
double filling_volume_ratio(const Neck& neck, int radial_points = 8, int sphere_level = 6);

}  // namespace slglue
