#include "slglue/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace slglue {

namespace {

void check_grid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("spline: need at least 3 nodes with matching values");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("spline: abscissae must be strictly increasing");
}

}  // namespace

PchipSpline::PchipSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_grid(x_, y_);
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            // weighted harmonic mean keeps the interpolant shape preserving
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
        return s;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t PchipSpline::segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double PchipSpline::operator()(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double u = (t - x_[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double PchipSpline::derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double u = (t - x_[i]) / h;
    const double u2 = u * u;
    const double dh00 = (6 * u2 - 6 * u) / h;
    const double dh10 = 3 * u2 - 4 * u + 1;
    const double dh01 = (-6 * u2 + 6 * u) / h;
    const double dh11 = 3 * u2 - 2 * u;
    return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    check_grid(x_, y_);
    const std::size_t n = x_.size();
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    m_.assign(n, 0.0);

    // Second derivatives M solve the continuity equations
    //   h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1} = r_i,  0 < i < n-1
    // plus the not-a-knot rows (third derivative continuous at nodes 1, n-2):
    //   h_1 M_0 - (h_0+h_1) M_1 + h_0 M_2 = 0
    //   h_{n-2} M_{n-3} - (h_{n-3}+h_{n-2}) M_{n-2} + h_{n-3} M_{n-1} = 0
    // The interior system is strictly diagonally dominant; solve it for
    // M_0 and M_{n-1} as parameters (three right-hand sides), then close
    // with the two end rows. This stays stable on uniform grids, where a
    // naive fold of the end rows produces a zero pivot.
    const std::size_t k = n - 2;  // interior unknowns M_1..M_{n-2}
    std::vector<double> u(k), v(k), w(k), cp(k);
    {
        std::vector<double> diag(k), up(k), ru(k), rv(k, 0.0), rw(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t node = i + 1;
            diag[i] = 2.0 * (h(node - 1) + h(node));
            up[i] = h(node);
            ru[i] = 6.0 * ((y_[node + 1] - y_[node]) / h(node) -
                           (y_[node] - y_[node - 1]) / h(node - 1));
        }
        rv[0] = -h(0);
        rw[k - 1] = -h(n - 2);
        double den = diag[0];
        cp[0] = up[0] / den;
        u[0] = ru[0] / den;
        v[0] = rv[0] / den;
        w[0] = rw[0] / den;
        for (std::size_t i = 1; i < k; ++i) {
            const double low = h(i);  // coefficient of M_i in row for node i+1
            den = diag[i] - low * cp[i - 1];
            cp[i] = up[i] / den;
            u[i] = (ru[i] - low * u[i - 1]) / den;
            v[i] = (rv[i] - low * v[i - 1]) / den;
            w[i] = (rw[i] - low * w[i - 1]) / den;
        }
        for (std::size_t i = k - 1; i-- > 0;) {
            u[i] -= cp[i] * u[i + 1];
            v[i] -= cp[i] * v[i + 1];
            w[i] -= cp[i] * w[i + 1];
        }
    }
    // interior value M_idx = u + v*M_0 + w*M_{n-1}; ends are the parameters
    auto comp = [&](std::size_t idx) {
        if (idx == 0) return std::array<double, 3>{0.0, 1.0, 0.0};
        if (idx == n - 1) return std::array<double, 3>{0.0, 0.0, 1.0};
        return std::array<double, 3>{u[idx - 1], v[idx - 1], w[idx - 1]};
    };
    const auto c1 = comp(1), c2 = comp(2), cn3 = comp(n - 3), cn2 = comp(n - 2);
    const double a11 = h(1) - (h(0) + h(1)) * c1[1] + h(0) * c2[1];
    const double a12 = -(h(0) + h(1)) * c1[2] + h(0) * c2[2];
    const double b1 = (h(0) + h(1)) * c1[0] - h(0) * c2[0];
    const double a21 = h(n - 2) * cn3[1] - (h(n - 3) + h(n - 2)) * cn2[1];
    const double a22 = h(n - 2) * cn3[2] - (h(n - 3) + h(n - 2)) * cn2[2] + h(n - 3);
    const double b2 = -h(n - 2) * cn3[0] + (h(n - 3) + h(n - 2)) * cn2[0];
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) throw std::invalid_argument("spline: degenerate end conditions");
    m_[0] = (b1 * a22 - b2 * a12) / det;
    m_[n - 1] = (a11 * b2 - a21 * b1) / det;
    for (std::size_t i = 1; i + 1 < n; ++i)
        m_[i] = u[i - 1] + v[i - 1] * m_[0] + w[i - 1] * m_[n - 1];
}

std::size_t CubicSpline::segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::operator()(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

}  // namespace slglue
