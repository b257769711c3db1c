#pragma once

#include <vector>

namespace slglue {

// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
// Monotone data yields a monotone interpolant.
class PchipSpline {
  public:
    PchipSpline() = default;
    PchipSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

  private:
    std::size_t segment(double t) const;
    std::vector<double> x_, y_, d_;  // nodes, values, node slopes
};

// C2 cubic spline with not-a-knot end conditions.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::size_t segment(double t) const;
    std::vector<double> x_, y_, m_;  // m_ holds second derivatives at nodes
};

}  // namespace slglue
