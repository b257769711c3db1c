#pragma once

#include <functional>
#include <vector>

#include "slglue/ode.hpp"

namespace slglue {

// Neck-scale schedule: the balancing ODE d(eps^2)/dt = -c eps^m, its closed
// form, and the perturbed bracket form started at Lambda.
struct NeckSchedule {
    int m = 3;
    double Lambda = 1.0;
    double eps0 = 0.05;  // scale at t = 0 in the closed form
    double c = 1.0;      // ODE coefficient
    std::function<double(double)> h;  // perturbation, empty means 0

    void validate() const;
    double h_at(double t) const { return h ? h(t) : 0.0; }

    // c = (A / c_plus) (1/V1 + 1/V2)
    static double coefficient(double A, double c_plus, double V1, double V2);
};

// eps(t) = (eps0^{2-m} + (c/2)(m-2) t)^{-1/(m-2)}
double closed_form(const NeckSchedule& s, double t);
double closed_form_derivative(const NeckSchedule& s, double t);  // d eps / dt
double closed_form_deps2(const NeckSchedule& s, double t);       // d eps^2 / dt

// eps0 for which the closed form at t equals the bracket form at t:
// eps0^{2-m} = (m-2)/2 c Lambda shifts the two normalizations onto each other
double matched_eps0(int m, double c, double Lambda);

// bracket form eps(t) = [(m-2)/2 c t + int_Lambda^t h]^{-1/(m-2)}, t >= Lambda
double integrate_schedule(const NeckSchedule& s, double t, double tol = 1e-12);
double schedule_deps2(const NeckSchedule& s, double t, double tol = 1e-12);

// numeric integration of the balancing ODE in the variable eps^2
OdePath solve_balancing_ode(const NeckSchedule& s, double t0, double t1,
                            double tol = 1e-10);

struct AssumptionBound {
    double at_start = 0.0;
    double sup = 0.0;
};

// Empirical constants of the power-law sandwich on eps, the derivative bound
// and the Holder quotient bound; finite and window-stable constants pass.
struct AssumptionReport {
    AssumptionBound upper;   // eps(t) t^{1/(m-2)}
    AssumptionBound lower;   // t^{-1/(m-2)} / eps(t)
    AssumptionBound deriv;   // |eps'(t)| t^{(m-1)/(m-2)}
    AssumptionBound holder;  // Holder quotient of eps' against its power law
    bool finite = false;
};

AssumptionReport validate_assumption(const std::function<double(double)>& eps,
                                     const std::function<double(double)>& deps,
                                     int m, double Lambda, double T, double alpha,
                                     int grid = 400);

// least-squares slope of log values vs log times
double blowup_rate(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace slglue
