#include "slglue/lawlor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "slglue/errors.hpp"
#include "slglue/quadrature.hpp"
#include "slglue/root_find.hpp"
#include "slglue/sphere_rule.hpp"

namespace slglue {

namespace {

constexpr double kPi = std::numbers::pi;

double p_poly_impl(const Eigen::VectorXd& a, double y) {
    const double y2 = y * y;
    if (y2 == 0.0) return a.sum();
    double acc = 0.0;
    for (int j = 0; j < a.size(); ++j) acc += std::log1p(a[j] * y2);
    return std::expm1(acc) / y2;
}

double sqrt_p(const Eigen::VectorXd& a, double y) { return std::sqrt(p_poly_impl(a, y)); }

}  // namespace

void NeckParams::validate() const {
    if (a.size() < 3) throw ConfigError("neck dimension must be at least 3");
    for (int j = 0; j < a.size(); ++j) {
        if (!(a[j] > 0.0) || !std::isfinite(a[j]))
            throw ConfigError("neck parameters must be positive and finite");
    }
}

void PhaseData::validate(double angle_sum_tol) const {
    if (phi.size() < 3) throw ConfigError("phase dimension must be at least 3");
    for (int j = 0; j < phi.size(); ++j) {
        if (!(phi[j] > 0.0) || !(phi[j] < kPi))
            throw ConfigError("phases must lie strictly between 0 and pi");
    }
    if (std::abs(phi.sum() - kPi) > angle_sum_tol)
        throw ConfigError("phases must sum to pi");
    if (!(A > 0.0) || !std::isfinite(A)) throw ConfigError("volume invariant must be positive");
}

double p_poly(const NeckParams& params, double y) { return p_poly_impl(params.a, y); }

PhaseData phases_from_params(const NeckParams& params, double tol) {
    params.validate();
    const auto& a = params.a;
    const int m = params.dim();
    PhaseData out;
    out.phi.resize(m);
    for (int j = 0; j < m; ++j) {
        const double aj = a[j];
        out.phi[j] = aj * integrate_line(
                              [&](double y) {
                                  return 1.0 / ((1.0 + aj * y * y) * sqrt_p(a, y));
                              },
                              -std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity(), tol);
    }
    double logprod = 0.0;
    for (int j = 0; j < m; ++j) logprod += std::log(a[j]);
    out.A = sphere_area(m) * std::exp(-0.5 * logprod);
    return out;
}

NeckParams params_from_phases(const PhaseData& target, double tol) {
    target.validate();
    const int m = target.dim();

    // Unknowns are log a_j, so positivity is automatic. The residual matches
    // the first m-1 phases and the volume invariant; the last phase follows
    // because both phase vectors sum to pi.
    auto residual = [&](const Eigen::VectorXd& ell) {
        NeckParams p;
        p.a = ell.array().exp();
        const PhaseData got = phases_from_params(p, std::min(tol * 1e-2, 1e-12));
        Eigen::VectorXd r(m);
        for (int j = 0; j < m - 1; ++j) r[j] = got.phi[j] - target.phi[j];
        r[m - 1] = std::log(got.A / target.A);
        return r;
    };

    RootOptions opts;
    opts.tol = tol;
    opts.max_iterations = 60;
    const double ell0 = (2.0 / m) * std::log(sphere_area(m) / target.A);
    Eigen::VectorXd guess = Eigen::VectorXd::Constant(m, ell0);
    const RootResult sol = find_root(residual, guess, opts);
    NeckParams out;
    out.a = sol.x.array().exp();
    return out;
}

double neck_constant_value(const NeckParams& params, double tol) {
    params.validate();
    return integrate_line([&](double y) { return 0.5 / sqrt_p(params.a, y); },
                          -std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity(), tol);
}

namespace {

std::vector<double> cumulative_profile(const std::vector<double>& grid, double start,
                                       const std::function<double(double)>& f) {
    std::vector<double> vals(grid.size());
    double acc = start, comp = 0.0;
    vals[0] = acc;
    for (size_t k = 1; k < grid.size(); ++k) {
        const double inc = integrate_finite(f, grid[k - 1], grid[k], 1e-15, 64).value;
        const double y = inc - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        vals[k] = acc;
    }
    return vals;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
    return g;
}

}  // namespace

Neck::Neck(NeckParams params, double tol) : params_(std::move(params)), quad_tol_(tol) {
    params_.validate();
    m_ = params_.dim();
    phases_ = phases_from_params(params_, std::min(tol, 1e-12));
    c_plus_ = neck_constant_value(params_, std::min(tol, 1e-13));

    scale_ = std::exp(params_.a.array().log().sum() / m_);
    lambda_ = std::sqrt(scale_);
    ahat_.a = params_.a / scale_;
    c_plus_hat_ = c_plus_ * scale_;
    const Eigen::VectorXd& ah = ahat_.a;

    // Left-tail profiles in v = -1/s, where the phase integrands transform to
    //   dpsi_j/dv = a_j v^{m-1} / ((v^2 + a_j) sqrt(prod(v^2 + a_k) - v^{2m}))
    //   dbeta/dv  = v^{m-3} / (2 sqrt(prod(v^2 + a_k) - v^{2m}))
    // and are smooth through v = 0, so one spline covers all s <= -s_core.
    // The right tail follows from the reflection psi_j(-s) = phi_j - psi_j(s).
    auto tail_base = [this, ah](double v) {
        double prodlog = 0.0;
        for (int k = 0; k < m_; ++k) prodlog += std::log(v * v + ah[k]);
        return std::sqrt(std::exp(prodlog) - std::pow(v, 2 * m_));
    };

    const int n_tail = 2401, n_core = 2401;
    const std::vector<double> vgrid = uniform_grid(0.0, 1.0 / s_core_, n_tail);
    const std::vector<double> sgrid = uniform_grid(-s_core_, s_core_, n_core);

    psi_core_.reserve(m_);
    psi_tail_.reserve(m_);
    for (int j = 0; j < m_; ++j) {
        const double aj = ah[j];
        auto fv = [=, this](double v) {
            return aj * std::pow(v, m_ - 1) / ((v * v + aj) * tail_base(v));
        };
        psi_tail_.emplace_back(vgrid, cumulative_profile(vgrid, 0.0, fv));
        auto fs = [=, this](double y) { return aj / ((1.0 + aj * y * y) * sqrt_p(ah, y)); };
        psi_core_.emplace_back(
            sgrid, cumulative_profile(sgrid, psi_tail_[j](1.0 / s_core_), fs));
    }
    auto fbv = [=, this](double v) { return 0.5 * std::pow(v, m_ - 3) / tail_base(v); };
    beta_tail_ = CubicSpline(vgrid, cumulative_profile(vgrid, 0.0, fbv));
    auto fbs = [=](double y) { return 0.5 / sqrt_p(ah, y); };
    beta_core_ = CubicSpline(sgrid, cumulative_profile(sgrid, beta_tail_(1.0 / s_core_), fbs));
}

double Neck::psi_hat(int j, double s_hat) const {
    if (s_hat < -s_core_) return psi_tail_[j](-1.0 / s_hat);
    if (s_hat > s_core_) return phases_.phi[j] - psi_tail_[j](1.0 / s_hat);
    return psi_core_[j](s_hat);
}

double Neck::beta_hat(double s_hat) const {
    if (s_hat < -s_core_) return beta_tail_(-1.0 / s_hat);
    if (s_hat > s_core_) return c_plus_hat_ - beta_tail_(1.0 / s_hat);
    return beta_core_(s_hat);
}

double Neck::psi(int j, double s) const { return psi_hat(j, lambda_ * s); }

double Neck::psi_derivative(int j, double s) const {
    const double aj = params_.a[j];
    return aj / ((1.0 + aj * s * s) * sqrt_p(params_.a, s));
}

double Neck::beta(double s) const { return beta_hat(lambda_ * s) / scale_; }

NeckPoint Neck::point(double s, const Eigen::VectorXd& x) const {
    if (x.size() != m_) throw ConfigError("link vector has the wrong dimension");
    NeckPoint out;
    out.s = s;
    out.x = x;
    out.z.resize(m_);
    out.point.resize(m_);
    for (int j = 0; j < m_; ++j) {
        const double rho = std::sqrt(1.0 / params_.a[j] + s * s);
        out.z[j] = std::polar(rho, psi(j, s));
        out.point[j] = out.z[j] * x[j];
    }
    return out;
}

double Neck::re_zeta(int j, double s) const {
    const double rho = std::sqrt(1.0 / params_.a[j] + s * s);
    return std::cos(psi(j, s)) * rho;
}

double Neck::re_zeta_deriv(int j, double s) const {
    const double rho = std::sqrt(1.0 / params_.a[j] + s * s);
    const double ps = psi(j, s);
    return -std::sin(ps) * psi_derivative(j, s) * rho + std::cos(ps) * s / rho;
}

double Neck::im_zeta(int j, double s) const {
    const double rho = std::sqrt(1.0 / params_.a[j] + s * s);
    return std::sin(psi(j, s)) * rho;
}

Neck::RaySolve Neck::solve_minus(const Eigen::VectorXd& sigma, double r) const {
    if (sigma.size() != m_) throw ConfigError("plane direction has the wrong dimension");
    if (!(r > 0.0)) throw ConfigError("plane radius must be positive");

    auto weight = [&](double s) {
        double w = 0.0;
        for (int j = 0; j < m_; ++j) {
            if (sigma[j] == 0.0) continue;
            const double re = re_zeta(j, s);
            if (re <= 1e-12)
                throw GraphicalityError(
                    "plane radius lies inside the fold of this end; query a larger radius");
            const double t = r * sigma[j] / re;
            w += t * t;
        }
        return w;
    };
    auto weight_deriv = [&](double s) {
        double w = 0.0;
        for (int j = 0; j < m_; ++j) {
            if (sigma[j] == 0.0) continue;
            const double re = re_zeta(j, s);
            const double t = r * sigma[j];
            w += -2.0 * t * t / (re * re * re) * re_zeta_deriv(j, s);
        }
        return w;
    };

    // Bracket the crossing of W = 1 along the branch coming from s -> -inf,
    // where W increases from 0.
    double amin = params_.a.minCoeff();
    double lo = -std::max(2.0 * r, 2.0 / std::sqrt(amin));
    for (int k = 0; k < 200 && weight(lo) >= 1.0; ++k) lo *= 2.0;
    if (weight(lo) >= 1.0)
        throw NonConvergenceError("failed to bracket the graph branch of the end", {lo},
                                  weight(lo) - 1.0);
    double hi = 0.0;
    if (weight(hi) < 1.0) {
        double s = 0.0, ws = weight(s);
        bool found = false;
        while (s < 1e6) {
            const double step = 0.25 * (1.0 + s);
            const double sn = s + step;
            const double wn = weight(sn);
            if (wn >= 1.0) {
                lo = s;
                hi = sn;
                found = true;
                break;
            }
            if (wn < ws)
                throw GraphicalityError(
                    "plane radius lies inside the fold of this end; query a larger radius");
            s = sn;
            ws = wn;
        }
        if (!found)
            throw NonConvergenceError("failed to bracket the graph branch of the end", {s},
                                      ws - 1.0);
    }

    // Safeguarded Newton on W(s) - 1 keeping the bracket [lo, hi].
    double s = 0.5 * (lo + hi);
    double f = weight(s) - 1.0;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(f) <= 1e-14 || hi - lo <= 1e-15 * (1.0 + std::abs(s))) break;
        if (f > 0.0)
            hi = s;
        else
            lo = s;
        const double df = weight_deriv(s);
        double sn = (df != 0.0) ? s - f / df : 0.5 * (lo + hi);
        if (!(sn > lo) || !(sn < hi)) sn = 0.5 * (lo + hi);
        s = sn;
        f = weight(s) - 1.0;
    }
    if (std::abs(f) > 1e-12 && hi - lo > 1e-13 * (1.0 + std::abs(s)))
        throw NonConvergenceError("ray solve did not converge", {s}, f);

    RaySolve out;
    out.s = s;
    out.x.resize(m_);
    out.im.resize(m_);
    for (int j = 0; j < m_; ++j) {
        out.x[j] = sigma[j] == 0.0 ? 0.0 : r * sigma[j] / re_zeta(j, s);
        out.im[j] = im_zeta(j, s);
    }
    return out;
}

Neck::GraphSample Neck::graph_sample(End end, const Eigen::VectorXd& sigma, double r) const {
    // The Plus end at parameter s is the complex conjugate of the Minus end
    // at -s after the rotation by diag(e^{-i phi_j}); one solver serves both.
    const RaySolve rs = solve_minus(sigma, r);
    GraphSample out;
    out.x = rs.x;
    if (end == End::Minus) {
        out.s = rs.s;
        out.grad = rs.x.cwiseProduct(rs.im);
    } else {
        out.s = -rs.s;
        out.grad = -rs.x.cwiseProduct(rs.im);
    }
    out.radial_slope = out.grad.dot(sigma);
    return out;
}

double Neck::end_potential_closed(End end, const Eigen::VectorXd& sigma, double r) const {
    const GraphSample gs = graph_sample(end, sigma, r);
    const double c_end = (end == End::Plus) ? c_plus_ : 0.0;
    return 0.5 * r * gs.radial_slope - beta(gs.s) + c_end;
}

double Neck::end_potential_model(End end, const Eigen::VectorXd& sigma, double r) const {
    double rho_max = 0.0;
    for (int j = 0; j < m_; ++j) rho_max = std::max(rho_max, 1.0 / std::sqrt(params_.a[j]));
    if (r < 3.0 * rho_max)
        throw ConfigError("far-field model queried too close to the waist");
    const double g1 = graph_sample(end, sigma, r).radial_slope;
    const double g2 = graph_sample(end, sigma, 2.0 * r).radial_slope;
    const double gamma = 2.0 - m_;
    const double a11 = gamma * std::pow(r, gamma - 1.0);
    const double a12 = -m_ * std::pow(r, -m_ - 1.0);
    const double a21 = gamma * std::pow(2.0 * r, gamma - 1.0);
    const double a22 = -m_ * std::pow(2.0 * r, -m_ - 1.0);
    const double det = a11 * a22 - a12 * a21;
    const double c = (g1 * a22 - g2 * a12) / det;
    const double c2 = (a11 * g2 - a21 * g1) / det;
    return c * std::pow(r, gamma) + c2 * std::pow(r, -m_);
}

double Neck::end_potential(End end, const Eigen::VectorXd& sigma, double r, double tol) const {
    double rho_max = 0.0;
    for (int j = 0; j < m_; ++j) rho_max = std::max(rho_max, 1.0 / std::sqrt(params_.a[j]));
    const double cap = std::max(8.0 * r, 100.0 * rho_max);
    const double cap_value = end_potential_model(end, sigma, cap);
    const double integral = integrate_line(
        [&](double y) { return graph_sample(end, sigma, y).radial_slope; }, r, cap, tol);
    return cap_value - integral;
}

Eigen::VectorXcd Neck::graph_point(End end, const Eigen::VectorXd& q) const {
    const double r = q.norm();
    if (!(r > 0.0)) throw ConfigError("graph chart is not defined at the origin");
    const GraphSample gs = graph_sample(end, q / r, r);
    Eigen::VectorXcd w(m_);
    for (int j = 0; j < m_; ++j) w[j] = std::complex<double>(q[j], gs.grad[j]);
    return end_rotation(end, w);
}

Eigen::VectorXcd Neck::end_rotation(End end, const Eigen::VectorXcd& w) const {
    if (end == End::Minus) return w;
    Eigen::VectorXcd out(m_);
    for (int j = 0; j < m_; ++j) out[j] = std::polar(1.0, phases_.phi[j]) * w[j];
    return out;
}

double Neck::ray_boundary_minus(const Eigen::VectorXd& x, double r) const {
    if (x.size() != m_) throw ConfigError("link vector has the wrong dimension");
    auto radius2 = [&](double s) {
        double acc = 0.0;
        for (int j = 0; j < m_; ++j) {
            const double t = re_zeta(j, s) * x[j];
            acc += t * t;
        }
        return acc;
    };
    const double target = r * r;

    double lo = -std::max(2.0 * r, 2.0 / std::sqrt(params_.a.minCoeff()));
    for (int k = 0; k < 200 && radius2(lo) <= target; ++k) lo *= 2.0;
    if (radius2(lo) <= target)
        throw GeometryError("ray projection never exceeds the requested radius");
    double hi = 0.0;
    if (radius2(hi) > target) {
        double s = 0.0, prev = radius2(s);
        bool found = false;
        while (s < 1e6) {
            const double sn = s + 0.25 * (1.0 + s);
            const double cur = radius2(sn);
            if (cur <= target) {
                lo = s;
                hi = sn;
                found = true;
                break;
            }
            if (cur > prev)
                throw GeometryError("ray projection never enters the requested radius");
            s = sn;
            prev = cur;
        }
        if (!found) throw GeometryError("ray projection never enters the requested radius");
    }

    // radius decreases through the bracket, so radius2 - target changes sign
    // from + at lo to - at hi; plain bisection is plenty fast here.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-14 * (1.0 + std::abs(mid))) break;
        if (radius2(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

SpecialCheckReport special_check(const Neck& neck, int samples, double h, unsigned seed) {
    const int m = neck.dim();
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> us(-3.0, 3.0);

    auto omega = [](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
        return (u.adjoint() * v)(0).imag();
    };

    SpecialCheckReport rep;
    std::vector<double> angles;
    angles.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double s = us(rng);
        Eigen::VectorXd x(m);
        for (int j = 0; j < m; ++j) x[j] = gauss(rng);
        x.normalize();

        // orthonormal basis of the tangent space of the link at x
        Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(m, m);
        Eigen::MatrixXd tang(m, m - 1);
        {
            int col = 0;
            for (int j = 0; j < m && col < m - 1; ++j) {
                Eigen::VectorXd v = basis.col(j) - basis.col(j).dot(x) * x;
                for (int c = 0; c < col; ++c) v -= v.dot(tang.col(c)) * tang.col(c);
                const double nv = v.norm();
                if (nv < 1e-6) continue;
                tang.col(col++) = v / nv;
            }
            if (col != m - 1) throw NumericError("failed to build a tangent basis");
        }

        Eigen::MatrixXcd frame(m, m);
        frame.col(0) =
            (neck.point(s + h, x).point - neck.point(s - h, x).point) / (2.0 * h);
        for (int c = 0; c < m - 1; ++c) {
            const Eigen::VectorXd xp = (x + h * tang.col(c)).normalized();
            const Eigen::VectorXd xn = (x - h * tang.col(c)).normalized();
            frame.col(c + 1) =
                (neck.point(s, xp).point - neck.point(s, xn).point) / (2.0 * h);
        }

        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                rep.max_symplectic =
                    std::max(rep.max_symplectic, std::abs(omega(frame.col(i), frame.col(j))));

        angles.push_back(std::arg(frame.determinant()));
    }

    // The sign of the basis orientation is arbitrary, so compare doubled
    // angles; spread below pi/2 then certifies a constant angle up to sign.
    std::complex<double> mean_dir(0.0, 0.0);
    for (double t : angles) mean_dir += std::polar(1.0, 2.0 * t);
    const double mean2 = std::arg(mean_dir);
    rep.angle_value = 0.5 * mean2;
    for (double t : angles) {
        const double d = std::abs(std::arg(std::polar(1.0, 2.0 * t - mean2)));
        rep.angle_spread = std::max(rep.angle_spread, 0.5 * d);
    }
    return rep;
}

double filling_volume_ratio(const Neck& neck, int radial_points, int sphere_level) {
    const int m = neck.dim();
    std::complex<double> detz(1.0, 0.0);
    for (int j = 0; j < m; ++j) {
        const double rho = std::sqrt(1.0 / neck.params().a[j]);
        detz *= std::polar(rho, neck.psi(j, 0.0));
    }
    const double density = detz.imag();

    Eigen::VectorXd rn, rw;
    gauss_legendre(radial_points, rn, rw);
    const QuadratureRule sr = sphere_rule(m, sphere_level);
    double vol = 0.0;
    for (int i = 0; i < radial_points; ++i) {
        const double r = 0.5 * (rn[i] + 1.0);
        vol += 0.5 * rw[i] * std::pow(r, m - 1) * sr.weights.sum();
    }
    return density * vol / neck.phases().A;
}

}  // namespace slglue
