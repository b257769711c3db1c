#include "slglue/glue_profile.hpp"

#include <algorithm>
#include <cmath>

#include "slglue/errors.hpp"

namespace slglue {

namespace {

// f(t) = exp(-1/t) for t > 0, extended by 0; below t0 the value underflows
// to an exact double 0, so the cutoff is exactly 0/1 outside the transition.
constexpr double kFlatTol = 1e-8;

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_d1(double t) { return t > 0.0 ? bump(t) / (t * t) : 0.0; }
double bump_d2(double t) {
    if (t <= 0.0) return 0.0;
    return bump(t) * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
}

}  // namespace

double GlueProfile::eps_limit() const {
    const double lim1 = std::pow((1.0 + hbar) * R1, -1.0 / (1.0 - tau));
    const double lim2 = std::pow((1.0 - hbar) * R2 / 2.0, 1.0 / tau);
    return std::min({1.0, lim1, lim2});
}

void GlueProfile::validate() const {
    if (!(R1 > 0.0) || !(R2 > R1)) throw ConfigError("radii must satisfy 0 < R1 < R2");
    if (!(hbar > 0.0) || hbar > 0.01) throw ConfigError("margin must lie in (0, 1/100]");
    if (!(tau > 0.0) || !(tau < 0.5)) throw ConfigError("exponent tau must lie in (0, 1/2)");
    if (m >= 3 && !(tau < 1.0 / (m + 2)))
        throw ConfigError("exponent tau must be below 1/(m+2)");
    if ((1.0 + 2.0 * hbar) * R1 > (1.0 - hbar) * R2)
        throw ConfigError("radii too close: need (1+2 hbar) R1 <= (1-hbar) R2");
    if (!(eps > 0.0) || !(eps < eps_limit()))
        throw ConfigError("gluing scale outside the admissible range");
}

double cutoff_chi(double y) {
    if (y <= 1.0 + kFlatTol) return 0.0;
    if (y >= 2.0 - kFlatTol) return 1.0;
    const double u = bump(y - 1.0);
    const double v = bump(2.0 - y);
    return u / (u + v);
}

double cutoff_chi_d1(double y) {
    if (y <= 1.0 + kFlatTol || y >= 2.0 - kFlatTol) return 0.0;
    const double u = bump(y - 1.0), v = bump(2.0 - y);
    const double up = bump_d1(y - 1.0), vp = -bump_d1(2.0 - y);
    const double n = u + v;
    return (up * v - u * vp) / (n * n);
}

double cutoff_chi_d2(double y) {
    if (y <= 1.0 + kFlatTol || y >= 2.0 - kFlatTol) return 0.0;
    const double u = bump(y - 1.0), v = bump(2.0 - y);
    const double up = bump_d1(y - 1.0), vp = -bump_d1(2.0 - y);
    const double us = bump_d2(y - 1.0), vs = bump_d2(2.0 - y);
    const double n = u + v;
    return (us * v - u * vs) / (n * n) -
           2.0 * (up * v - u * vp) * (up + vp) / (n * n * n);
}

CutoffBounds cutoff_bounds(int grid_points) {
    CutoffBounds b;
    for (int k = 0; k < grid_points; ++k) {
        const double y = 1.0 + static_cast<double>(k) / (grid_points - 1);
        b.sup_d1 = std::max(b.sup_d1, std::abs(cutoff_chi_d1(y)));
        b.sup_d2 = std::max(b.sup_d2, std::abs(cutoff_chi_d2(y)));
    }
    return b;
}

double kappa(const GlueProfile& profile, double r) {
    if (!(r > profile.R1) || !(r < profile.R2))
        throw ConfigError("kappa argument outside (R1, R2)");
    const double t = (r - profile.R1) / (profile.hbar * profile.R1);
    const double c = cutoff_chi(t);
    return (1.0 - c) * profile.eps * r + c * r;
}

double kappa_derivative(const GlueProfile& profile, double r) {
    if (!(r > profile.R1) || !(r < profile.R2))
        throw ConfigError("kappa argument outside (R1, R2)");
    const double t = (r - profile.R1) / (profile.hbar * profile.R1);
    const double c = cutoff_chi(t);
    const double cd = cutoff_chi_d1(t) / (profile.hbar * profile.R1);
    return profile.eps + c * (1.0 - profile.eps) + cd * (1.0 - profile.eps) * r;
}

double kappa_inverse(const GlueProfile& profile, double value) {
    if (!(value > profile.eps * profile.R1) || !(value < profile.R2))
        throw ConfigError("kappa inverse argument outside (eps*R1, R2)");
    double lo = profile.R1, hi = profile.R2;
    // kappa is strictly increasing with derivative >= eps, so bisection to
    // machine width is accurate and needs no derivative
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (kappa(profile, mid) > value)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double weight_tip(const GlueProfile& profile, double unit_neck_radius) {
    return profile.eps * std::max(1.0, unit_neck_radius);
}

double weight_intermediate(const GlueProfile& profile, double r) {
    const double k = kappa(profile, r);
    const double t = (profile.R2 - r) / (profile.hbar * profile.R2);
    return k + (profile.R2 - r) * (1.0 - cutoff_chi(t));
}

double weight_outer(const GlueProfile& profile) { return profile.R2; }

}  // namespace slglue
