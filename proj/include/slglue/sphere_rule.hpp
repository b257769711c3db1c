#pragma once

#include <Eigen/Dense>
#include <functional>

namespace slglue {

// Nodes (rows) on the unit sphere S^{m-1} with weights summing to its area.
// declared_tolerance is 0 for exact-degree product rules; for quasi-Monte
// Carlo rules it carries a generic 1/N error scale (use qmc_standard_error
// for an integrand-specific estimate).
struct QuadratureRule {
    Eigen::MatrixXd nodes;
    Eigen::VectorXd weights;
    double declared_tolerance = 0.0;
};

// Area of the unit sphere S^{m-1} in R^m.
double sphere_area(int m);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// m = 3: product of Gauss-Legendre in the polar cosine and a uniform azimuth
// grid; integrates spherical polynomials up to degree 2*level - 1 exactly.
// m > 3: Halton-sequence quasi-Monte Carlo through the Gaussian map.
QuadratureRule sphere_rule(int m, int level);

// Batch-means standard error of the rule applied to f (QMC rules).
double qmc_standard_error(const QuadratureRule& rule,
                          const std::function<double(const Eigen::VectorXd&)>& f,
                          int batches = 16);

// Inverse of the standard normal CDF, accurate to ~1e-15.
double inverse_normal_cdf(double p);

}  // namespace slglue
