#include "slglue/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "slglue/errors.hpp"

namespace slglue {

namespace {

ConstraintCheck open_interval(const std::string& name, double value, double lower,
                              double upper) {
    ConstraintCheck c;
    c.name = name;
    c.value = value;
    c.lower = lower;
    c.upper = upper;
    c.ok = value > lower && value < upper;
    return c;
}

}  // namespace

ConstantsReport check_constants(const NormParams& p, int m) {
    if (m < 3) throw ConfigError("constants checker requires m >= 3");
    ConstantsReport rep;
    const double md = m;
    rep.checks.push_back(
        open_interval("nu", p.nu, std::max(md / 2.0 - 2.0, 0.0), md - 2.0));
    rep.checks.push_back(open_interval("alpha", p.alpha, 0.0, 0.5));
    rep.checks.push_back(open_interval(
        "tau", p.tau, 2.0 * p.alpha / (md + 1.0 + 2.0 * p.alpha), 1.0 / (md + 2.0)));
    rep.checks.push_back(
        open_interval("mu", p.mu, (p.nu + 2.0 + 2.0 * p.alpha) / (md - 2.0),
                      (p.tau * (p.nu + 2.0) + (1.0 - p.tau) * md) / (md - 2.0)));
    rep.checks.push_back(open_interval(
        "zeta", p.zeta, 0.0,
        std::min(p.tau * md / (md - 2.0),
                 p.mu - (p.nu + 2.0 + 2.0 * p.alpha) / (md - 2.0))));
    rep.ok = true;
    for (const auto& c : rep.checks) {
        if (!c.ok && rep.first_violation.empty()) rep.first_violation = c.name;
        rep.ok = rep.ok && c.ok;
    }
    return rep;
}

NormParams example_constants(int m) {
    if (m < 3) throw ConfigError("constants checker requires m >= 3");
    NormParams p;
    const double md = m;
    p.nu = (3.0 * md - 8.0) / 4.0;
    p.alpha = 0.01;
    p.tau = 1.0 / (2.0 * (md + 2.0));
    p.mu = 7.0 * (1.0 - p.tau) * md / (8.0 * (md - 2.0));
    const double zeta_hi = std::min(p.tau * md / (md - 2.0),
                                    p.mu - (p.nu + 2.0 + 2.0 * p.alpha) / (md - 2.0));
    p.zeta = 0.5 * zeta_hi;
    return p;
}

double weighted_sup(std::span<const NormSlice> slices, double mu, double nu) {
    double sup = 0.0;
    for (const auto& slice : slices) {
        if (!(slice.t > 0.0)) throw ConfigError("slice time must be positive");
        const double tw = std::pow(slice.t, mu);
        for (Eigen::Index i = 0; i < slice.values.size(); ++i) {
            const double w = tw * std::pow(slice.rho[i], nu) * std::abs(slice.values[i]);
            sup = std::max(sup, w);
        }
    }
    return sup;
}

double weighted_sup(std::span<const NormSlice> slices, const NormParams& p) {
    return weighted_sup(slices, p.mu, p.nu);
}

HolderReport holder_seminorms(std::span<const NormSlice> slices, const NormParams& p,
                              int m, int pair_budget, std::uint64_t seed) {
    if (slices.empty()) throw ConfigError("holder seminorms need at least one slice");
    if (pair_budget < 1) throw ConfigError("pair budget must be positive");
    const Eigen::Index n = slices[0].values.size();
    for (const auto& slice : slices) {
        if (slice.values.size() != n || slice.rho.size() != n ||
            slice.points.cols() != n || slice.cap.size() != n)
            throw ConfigError("slices must carry matching sample sets");
    }
    if (n < 2)
        throw ConfigError("no admissible spatial pairs: slices carry fewer than two samples");

    // admissible ordered slice pairs for the temporal window
    std::vector<std::pair<int, int>> windows;
    for (std::size_t k = 0; k < slices.size(); ++k) {
        for (std::size_t l = 0; l < slices.size(); ++l) {
            const double t1 = slices[k].t, t2 = slices[l].t;
            if (!(t1 < t2)) continue;
            if (t2 > 2.0 * t1) continue;
            if (!(t2 - t1 < std::pow(t1, -2.0 / (m - 2.0)))) continue;
            windows.emplace_back(static_cast<int>(k), static_cast<int>(l));
        }
    }
    if (slices.size() >= 2 && windows.empty())
        throw ConfigError("no admissible temporal pairs: slice times violate the window constraints");

    HolderReport rep;
    rep.budget = pair_budget;
    rep.seed = seed;
    const double ex = p.nu + 2.0 * p.alpha;

    std::mt19937_64 rng_s(seed);
    std::uniform_int_distribution<int> pick_slice(0, static_cast<int>(slices.size()) - 1);
    std::uniform_int_distribution<Eigen::Index> pick_sample(0, n - 1);
    for (int b = 0; b < pair_budget; ++b) {
        const auto& slice = slices[static_cast<std::size_t>(pick_slice(rng_s))];
        const Eigen::Index i = pick_sample(rng_s);
        const Eigen::Index j = pick_sample(rng_s);
        if (i == j) continue;
        const double d = (slice.points.col(i) - slice.points.col(j)).norm();
        const double cap = std::min(slice.cap[i], slice.cap[j]);
        if (!(d > 0.0) || !(d < cap)) continue;
        const double w = std::pow(slice.t, p.mu) *
                         std::pow(std::min(slice.rho[i], slice.rho[j]), ex) *
                         std::abs(slice.values[i] - slice.values[j]) /
                         std::pow(d, 2.0 * p.alpha);
        rep.spatial = std::max(rep.spatial, w);
        ++rep.spatial_pairs;
    }

    if (!windows.empty()) {
        std::mt19937_64 rng_t(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<std::size_t> pick_window(0, windows.size() - 1);
        for (int b = 0; b < pair_budget; ++b) {
            const auto [k, l] = windows[pick_window(rng_t)];
            const auto& s1 = slices[static_cast<std::size_t>(k)];
            const auto& s2 = slices[static_cast<std::size_t>(l)];
            const Eigen::Index i = pick_sample(rng_t);
            const double gap = s2.t - s1.t;
            const double w = std::pow(s1.t, p.mu) * std::pow(s1.rho[i], ex) *
                             std::abs(s1.values[i] - s2.values[i]) /
                             std::pow(gap, p.alpha);
            rep.temporal = std::max(rep.temporal, w);
            ++rep.temporal_pairs;
        }
    }
    return rep;
}

NormSlice slice_from_mesh(const GluedMesh& mesh, double t, const Eigen::VectorXd& values) {
    const auto& samples = mesh.samples();
    const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
    if (values.size() != n) throw ConfigError("field length does not match the mesh");
    NormSlice slice;
    slice.t = t;
    slice.values = values;
    slice.rho.resize(n);
    slice.cap.resize(n);
    slice.points.resize(samples[0].ambient.size(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        slice.rho[i] = s.rho;
        slice.cap[i] = std::min(1.0, s.rho);
        slice.points.col(i) = s.ambient;
    }
    return slice;
}

NormSlice theta_slice(const GluedMesh& mesh, double t) {
    const auto& samples = mesh.samples();
    Eigen::VectorXd values(static_cast<Eigen::Index>(samples.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i)
        values[i] = samples[static_cast<std::size_t>(i)].theta;
    return slice_from_mesh(mesh, t, values);
}

}  // namespace slglue
