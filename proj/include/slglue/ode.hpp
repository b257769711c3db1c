#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace slglue {

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

struct OdeOptions {
    double tol = 1e-10;        // per-step error control (absolute and relative)
    double blowup_cap = 1e12;  // sup-norm threshold for finite-time explosion
    long max_steps = 200000;
    double initial_step = 0.0;  // 0 picks one automatically
};

// Accepted solution nodes plus derivatives; eval() interpolates with a cubic
// Hermite polynomial on each step so dense output matches the step order.
struct OdePath {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> values;
    std::vector<Eigen::VectorXd> derivatives;
    double error_estimate = 0.0;

    Eigen::VectorXd eval(double t) const;
    Eigen::VectorXd eval_derivative(double t) const;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)). Throws OdeBlowupError
// when the state exceeds blowup_cap or the step size underflows, carrying the
// last time reached.
OdePath integrate_ode(const OdeRhs& rhs, double t0, Eigen::VectorXd y0, double t1,
                      const OdeOptions& options = {});

}  // namespace slglue
