#pragma once

#include <Eigen/Dense>
#include <functional>

namespace slglue {

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct RootOptions {
    double tol = 1e-12;        // sup-norm residual target
    int max_iterations = 80;
    int max_halvings = 40;     // line-search damping budget per step
    double fd_step = 1e-7;     // relative forward-difference step for the Jacobian
    // Optional projection applied to every iterate (e.g. clamping to a
    // positive cone). Also applied to the starting point.
    std::function<void(Eigen::VectorXd&)> project;
};

struct RootResult {
    Eigen::VectorXd x;
    double residual = 0.0;
    int iterations = 0;
};

// Damped Newton iteration with a finite-difference Jacobian. The step is
// halved until the residual decreases; a singular Jacobian or an exhausted
// iteration budget raises the corresponding NumericError subclass.
RootResult find_root(const VectorMap& F, Eigen::VectorXd x0,
                     const RootOptions& options = {});

}  // namespace slglue
