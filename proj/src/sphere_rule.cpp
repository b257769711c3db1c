#include "slglue/sphere_rule.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace slglue {

double sphere_area(int m) {
    if (m < 2) throw std::invalid_argument("sphere_area: need m >= 2");
    return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on Legendre polynomials from the Chebyshev guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace {

double halton(long index, int base) {
    double f = 1.0, r = 0.0;
    for (long i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

QuadratureRule sphere_rule(int m, int level) {
    if (level < 1) throw std::invalid_argument("sphere_rule: need level >= 1");
    if (m < 3) throw std::invalid_argument("sphere_rule: need m >= 3");
    QuadratureRule rule;
    if (m == 3) {
        Eigen::VectorXd ct, wt;
        gauss_legendre(level, ct, wt);
        const int naz = 2 * level;
        rule.nodes.resize(level * naz, 3);
        rule.weights.resize(level * naz);
        const double waz = 2.0 * M_PI / naz;
        int idx = 0;
        for (int i = 0; i < level; ++i) {
            const double cth = ct[i];
            const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
            for (int k = 0; k < naz; ++k) {
                const double phi = waz * k;
                rule.nodes.row(idx) << sth * std::cos(phi), sth * std::sin(phi), cth;
                rule.weights[idx] = wt[i] * waz;
                ++idx;
            }
        }
        rule.declared_tolerance = 0.0;
        return rule;
    }
    if (m > static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0])))
        throw std::invalid_argument("sphere_rule: dimension too large for the Halton bases");
    const long n = static_cast<long>(level) * 1024;
    rule.nodes.resize(n, m);
    rule.weights.setConstant(n, sphere_area(m) / static_cast<double>(n));
    for (long i = 0; i < n; ++i) {
        Eigen::VectorXd g(m);
        for (int j = 0; j < m; ++j) {
            // skip index 0 to avoid the origin of the Halton sequence
            double u = halton(i + 1, kPrimes[j]);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            g[j] = inverse_normal_cdf(u);
        }
        const double norm = g.norm();
        if (norm < 1e-12) {
            g.setZero();
            g[0] = 1.0;
            rule.nodes.row(i) = g;
        } else {
            rule.nodes.row(i) = g / norm;
        }
    }
    rule.declared_tolerance = sphere_area(m) / std::sqrt(static_cast<double>(n));
    return rule;
}

double qmc_standard_error(const QuadratureRule& rule,
                          const std::function<double(const Eigen::VectorXd&)>& f,
                          int batches) {
    const long n = rule.nodes.rows();
    if (batches < 2 || n < batches)
        throw std::invalid_argument("qmc_standard_error: bad batch count");
    std::vector<double> means(batches, 0.0);
    std::vector<double> wsum(batches, 0.0);
    for (long i = 0; i < n; ++i) {
        const int b = static_cast<int>(i % batches);
        means[b] += rule.weights[i] * f(rule.nodes.row(i).transpose());
        wsum[b] += rule.weights[i];
    }
    double grand = 0.0;
    for (int b = 0; b < batches; ++b) {
        means[b] = means[b] / wsum[b] * rule.weights.sum();
        grand += means[b];
    }
    grand /= batches;
    double var = 0.0;
    for (int b = 0; b < batches; ++b) var += (means[b] - grand) * (means[b] - grand);
    var /= (batches - 1.0);
    return std::sqrt(var / batches);
}

}  // namespace slglue
