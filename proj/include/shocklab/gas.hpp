#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shocklab/common.hpp"

namespace shocklab {

// Power-law barotropic gas: p(v) = v^-gamma, mu(v) = b v^-alpha.
struct GasModel {
    double gamma = 2.0;    // adiabatic exponent, > 1
    double alpha = 1.0;    // viscosity exponent, 0 < alpha <= gamma <= alpha+1
    double b = 2.0;        // viscosity amplitude, > 0
    double nu = 1.0;       // viscosity strength, >= 0
    double v_min = 1e-10;  // positivity floor for domain guards

    double beta() const { return gamma - alpha; }
    void validate() const;
};

double pressure(double v, const GasModel& g);
double pressure_slope(double v, const GasModel& g);  // p'(v)
double pressure_curv(double v, const GasModel& g);   // p''(v)
double pressure_inverse(double p, const GasModel& g);
double entropy_Q(double v, const GasModel& g);  // Q(v) = v^(1-gamma)/(gamma-1), Q' = -p

// Relative functionals F(v|w) = F(v) - F(w) - F'(w)(v-w).
double rel_Q(double v, double w, const GasModel& g);
double rel_p(double v, double w, const GasModel& g);

enum class RelativeFn { Q, P };
double relative_fn(RelativeFn f, double v1, double v2, const GasModel& g);

struct State {
    double v;  // specific volume, > 0
    double u;  // fluid velocity
};

struct BDState {
    double v;  // specific volume, > 0
    double h;  // BD-modulated velocity
};

// eta(U1|U2) = |h1-h2|^2/2 + Q(v1|v2)
double rel_entropy_eta(const BDState& a, const BDState& b, const GasModel& g);

// E((v1,u1)|(v2,u2)) with caller-supplied discrete gradients
// d_i = d/dx [ p(v_i)^(alpha/gamma) ]. Equals eta of the BD-transformed
// pair when the gradients are exact.
double rel_E_functional(const State& a, double da, const State& b, double db,
                        const GasModel& g);

// Scale factor between h - u and d/dx p(v)^(alpha/gamma): the (v,h) system
//   v_t - h_x = -(v^beta p(v)_x)_x,  h_t + p(v)_x = 0
// is equivalent to the raw (v,u) system with b = gamma exactly when
//   h = u + nu*(gamma/alpha) * (p(v)^(alpha/gamma))_x.
double bd_gradient_factor(const GasModel& g);

// Empirical report for the global/local inequalities on Q(.|.) and p(.|.).
struct InequalityReport {
    // Q(v|w) >= c1 |v-w|^2 for w in (0,2v*), 0 < v <= 3v*
    double c1_fitted = 0.0;
    int c1_samples = 0;
    // Q(v|w) >= c2 |v-w| for w in (0,2v*), v >= 3v*
    double c2_fitted = 0.0;
    int c2_samples = 0;
    // p(v|w) <= C |v-w|^2 for v, w >= v*/2
    double C_fitted = 0.0;
    int C_samples = 0;
    // constant-free local lower bound on Q(v|w) in terms of p(v)-p(w)
    int local_samples = 0;
    int local_violations = 0;
    double local_worst_margin = 0.0;  // min of LHS-RHS over regime samples
    // largest regime size delta for which no sampled violation occurred
    double local_delta_empirical = 0.0;
};

// Evaluates every inequality on the given (v,w) samples around v_star.
// Constants are fitted (smallest/largest making the bound hold on the set);
// the constant-free local bound is checked as-is and violations flagged.
InequalityReport check_inequality_suite(
    const std::vector<std::pair<double, double>>& samples, const GasModel& g,
    double v_star);

}  // namespace shocklab
