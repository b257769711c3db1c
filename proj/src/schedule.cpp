#include "slglue/schedule.hpp"

#include <cmath>

#include "slglue/errors.hpp"
#include "slglue/quadrature.hpp"

namespace slglue {

void NeckSchedule::validate() const {
    if (m < 3) throw ConfigError("schedule requires m >= 3");
    if (!(Lambda > 0.0)) throw ConfigError("Lambda must be positive");
    if (!(eps0 > 0.0)) throw ConfigError("eps0 must be positive");
    if (!(c > 0.0)) throw ConfigError("ODE coefficient must be positive");
}

double NeckSchedule::coefficient(double A, double c_plus, double V1, double V2) {
    if (!(A > 0.0) || !(c_plus > 0.0) || !(V1 > 0.0) || !(V2 > 0.0))
        throw ConfigError("coefficient inputs must be positive");
    return A / c_plus * (1.0 / V1 + 1.0 / V2);
}

double closed_form(const NeckSchedule& s, double t) {
    s.validate();
    if (t < 0.0) throw ConfigError("closed form requires t >= 0");
    const double bracket =
        std::pow(s.eps0, 2.0 - s.m) + 0.5 * s.c * (s.m - 2.0) * t;
    return std::pow(bracket, -1.0 / (s.m - 2.0));
}

double closed_form_derivative(const NeckSchedule& s, double t) {
    const double e = closed_form(s, t);
    return -0.5 * s.c * std::pow(e, s.m - 1.0);
}

double closed_form_deps2(const NeckSchedule& s, double t) {
    const double e = closed_form(s, t);
    return -s.c * std::pow(e, static_cast<double>(s.m));
}

double matched_eps0(int m, double c, double Lambda) {
    if (m < 3 || !(c > 0.0) || !(Lambda > 0.0))
        throw ConfigError("matched_eps0 requires m >= 3, c > 0, Lambda > 0");
    return std::pow(0.5 * (m - 2.0) * c * Lambda, -1.0 / (m - 2.0));
}

namespace {

double bracket_value(const NeckSchedule& s, double t, double tol) {
    s.validate();
    if (t < s.Lambda) throw ConfigError("schedule evaluated before Lambda");
    double integral = 0.0;
    if (s.h && t > s.Lambda)
        integral = integrate_finite([&](double u) { return s.h_at(u); }, s.Lambda, t,
                                    tol, 4000)
                       .value;
    const double bracket = 0.5 * (s.m - 2.0) * s.c * t + integral;
    if (!(bracket > 0.0))
        throw ConfigError("schedule bracket not positive: Lambda too small for h");
    return bracket;
}

}  // namespace

double integrate_schedule(const NeckSchedule& s, double t, double tol) {
    return std::pow(bracket_value(s, t, tol), -1.0 / (s.m - 2.0));
}

double schedule_deps2(const NeckSchedule& s, double t, double tol) {
    const double bracket = bracket_value(s, t, tol);
    const double d_bracket = 0.5 * (s.m - 2.0) * s.c + s.h_at(t);
    return -2.0 / (s.m - 2.0) * std::pow(bracket, -s.m / (s.m - 2.0)) * d_bracket;
}

OdePath solve_balancing_ode(const NeckSchedule& s, double t0, double t1, double tol) {
    s.validate();
    const double e0 = closed_form(s, t0);
    Eigen::VectorXd y0(1);
    y0[0] = e0 * e0;
    auto rhs = [&](double, const Eigen::VectorXd& y) {
        Eigen::VectorXd dy(1);
        dy[0] = -s.c * std::pow(y[0], 0.5 * s.m);
        return dy;
    };
    OdeOptions options;
    options.tol = tol;
    return integrate_ode(rhs, t0, y0, t1, options);
}

AssumptionReport validate_assumption(const std::function<double(double)>& eps,
                                     const std::function<double(double)>& deps,
                                     int m, double Lambda, double T, double alpha,
                                     int grid) {
    if (m < 3 || !(Lambda > 0.0) || !(T > Lambda) || grid < 2)
        throw ConfigError("bad assumption-validator inputs");
    const double p = 1.0 / (m - 2.0);
    AssumptionReport rep;
    bool first = true;
    for (int i = 0; i < grid; ++i) {
        const double t = Lambda * std::pow(T / Lambda, static_cast<double>(i) / (grid - 1));
        const double e = eps(t), de = deps(t);
        if (!(e > 0.0)) return rep;  // finite stays false
        const double up = e * std::pow(t, p);
        const double lo = std::pow(t, -p) / e;
        const double dv = std::abs(de) * std::pow(t, (m - 1.0) * p);

        // Holder quotient of eps' over the widest admissible pair at t
        const double gap = 0.99 * std::pow(t, -2.0 * p);
        const double quot = std::abs(deps(t + gap) - de) / std::pow(gap, alpha);
        const double hc = quot / std::pow(t, (1.0 - m + 2.0 * alpha) * p);

        if (first) {
            rep.upper.at_start = up;
            rep.lower.at_start = lo;
            rep.deriv.at_start = dv;
            rep.holder.at_start = hc;
            first = false;
        }
        rep.upper.sup = std::max(rep.upper.sup, up);
        rep.lower.sup = std::max(rep.lower.sup, lo);
        rep.deriv.sup = std::max(rep.deriv.sup, dv);
        rep.holder.sup = std::max(rep.holder.sup, hc);
    }
    rep.finite = std::isfinite(rep.upper.sup) && std::isfinite(rep.lower.sup) &&
                 std::isfinite(rep.deriv.sup) && std::isfinite(rep.holder.sup);
    return rep;
}

double blowup_rate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ConfigError("blowup_rate needs matching series of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(times.size());
    for (int i = 0; i < n; ++i) {
        if (!(times[i] > 0.0) || !(values[i] > 0.0))
            throw ConfigError("blowup_rate requires positive data");
        const double x = std::log(times[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ConfigError("blowup_rate times are degenerate");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace slglue
