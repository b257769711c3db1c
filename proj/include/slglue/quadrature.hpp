#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "slglue/errors.hpp"

namespace slglue {

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]. Positive abscissae; even nodes belong to
// the embedded Gauss rule.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double kronrod;
    double error;
};

template <typename F>
PanelEstimate gk15_panel(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[2 * i] = f(c - h * kGK15Nodes[i]);
        fv[2 * i + 1] = f(c + h * kGK15Nodes[i]);
    }
    fv[14] = f(c);
    double kron = kGK15WeightsK[7] * fv[14];
    double gauss = kGK15WeightsG[3] * fv[14];
    for (int i = 0; i < 7; ++i) {
        const double pair = fv[2 * i] + fv[2 * i + 1];
        kron += kGK15WeightsK[i] * pair;
        if (i % 2 == 1) gauss += kGK15WeightsG[i / 2] * pair;
    }
    kron *= h;
    gauss *= h;
    double err = std::abs(kron - gauss);
    if (!std::isfinite(kron)) err = std::numeric_limits<double>::infinity();
    return {kron, err};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration over a finite interval. Bisects the
// worst panel until the summed error estimate is below tol or the panel
// budget runs out, in which case a QuadratureError carries the partial value.
template <typename F>
IntegralResult integrate_finite(F&& f, double lo, double hi, double tol,
                                long max_panels = 4000) {
    if (!(lo < hi)) {
        if (lo == hi) return {0.0, 0.0, 0};
        auto r = integrate_finite(std::forward<F>(f), hi, lo, tol, max_panels);
        r.value = -r.value;
        return r;
    }
    struct Panel {
        double a, b, value, error;
    };
    long evals = 0;
    auto counted = [&](double y) {
        ++evals;
        return f(y);
    };
    std::vector<Panel> panels;
    auto first = detail::gk15_panel(counted, lo, hi);
    panels.push_back({lo, hi, first.kronrod, first.error});

    const double min_width = 1e-15 * (std::abs(lo) + std::abs(hi) + 1.0);
    while (true) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > worst_err && panels[i].b - panels[i].a > min_width) {
                worst_err = panels[i].error;
                worst = i;
            }
        }
        if (err <= tol) return {total, err, evals};
        if (static_cast<long>(panels.size()) >= max_panels || worst_err < 0.0) {
            throw QuadratureError(
                "adaptive quadrature did not reach the requested tolerance "
                "(likely a divergent or nearly singular integrand)",
                total, err);
        }
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        auto left = detail::gk15_panel(counted, p.a, mid);
        auto right = detail::gk15_panel(counted, mid, p.b);
        panels[worst] = {p.a, mid, left.kronrod, left.error};
        panels.push_back({mid, p.b, right.kronrod, right.error});
    }
}

// Integration over a possibly unbounded interval. Infinite endpoints are
// folded to a finite parameter with y = tan(u); the Kronrod nodes are
// interior so the integrand is never evaluated at the endpoints themselves.
template <typename F>
IntegralResult integrate_line_full(F&& f, double lo, double hi, double tol,
                                   long max_panels = 4000) {
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        return integrate_finite(std::forward<F>(f), lo, hi, tol, max_panels);
    }
    constexpr double half_pi = 1.57079632679489661923;
    if (lo_inf && hi_inf) {
        auto g = [&](double u) {
            const double t = std::tan(u);
            const double sec2 = 1.0 + t * t;
            return f(t) * sec2;
        };
        return integrate_finite(g, -half_pi, half_pi, tol, max_panels);
    }
    if (hi_inf) {
        auto g = [&](double u) {
            const double t = std::tan(u);
            const double sec2 = 1.0 + t * t;
            return f(lo + t) * sec2;
        };
        return integrate_finite(g, 0.0, half_pi, tol, max_panels);
    }
    auto g = [&](double u) {
        const double t = std::tan(u);
        const double sec2 = 1.0 + t * t;
        return f(hi + t) * sec2;
    };
    return integrate_finite(g, -half_pi, 0.0, tol, max_panels);
}

template <typename F>
double integrate_line(F&& f, double lo, double hi, double tol = 1e-10) {
    return integrate_line_full(std::forward<F>(f), lo, hi, tol).value;
}

}  // namespace slglue
