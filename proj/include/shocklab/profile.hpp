#pragma once

#include <vector>

#include "shocklab/riemann.hpp"

namespace shocklab {

// Sampled monotone viscous shock profile in the traveling variable
// xi = x - sigma t, normalized so v(0) is the midpoint of the end volumes.
// Outside the sampled window the profile is extended by its end values.
struct ShockProfile {
    GasModel gas;
    int family = 1;      // 1 or 2
    State left, right;   // end states in (v,u); left = xi -> -inf limit
    double sigma = 0.0;
    double eps = 0.0;    // pressure-jump strength
    double xi0 = 0.0;    // first grid point
    double dxi = 0.0;    // grid spacing
    std::vector<double> v, h, u;  // samples on xi_j = xi0 + j*dxi
    double rate_left = 0.0;   // linearized decay rate |f'(v_left)|
    double rate_right = 0.0;  // linearized decay rate |f'(v_right)|

    bool degenerate() const { return eps == 0.0; }

    // RHS of the integrated traveling-wave ODE dv/dxi = f(v) and its slope.
    double ode_rhs(double vv) const;
    double ode_rhs_slope(double vv) const;

    // Linear interpolation with constant end-state extension.
    double eval_v(double xi) const;
    double eval_h(double xi) const;
    double eval_u(double xi) const;
    // Derivatives through the ODE closed forms (exact in v once v is known).
    double eval_dv(double xi) const;    // dv/dxi = f(v(xi))
    double eval_d2v(double xi) const;   // f'(v) f(v)
    double eval_dh(double xi) const;    // p'(v) dv / sigma
};

// Integrates the once-integrated scalar traveling-wave ODE outward from the
// midpoint normalization. xi_half_width <= 0 or dxi <= 0 pick defaults
// (width from the linearized tail rate so that end values are approached to
// within 1e-8*eps at the grid boundary; dxi = 0.01/eps).
ShockProfile solve_profile(int family, const WaveFan& fan, const GasModel& g,
                           double xi_half_width = 0.0, double dxi = 0.0);

// Superposition of the two profiles minus the middle state.
struct CompositeWave {
    ShockProfile wave1, wave2;
    State middle;
    WaveFan fan;

    BDState eval_bd(double t, double x, double X1, double X2) const;
    State eval_state(double t, double x, double X1, double X2) const;
};

CompositeWave make_composite(const WaveFan& fan, const GasModel& g,
                             double xi_half_width = 0.0, double dxi = 0.0);

// h = u + nu * (gamma/alpha) * d/dx p(v)^(alpha/gamma), centered differences
// inside, one-sided at the boundary nodes.
std::vector<double> bd_transform(const std::vector<double>& v,
                                 const std::vector<double>& u, double dx,
                                 const GasModel& g, double nu);

// Algebraic inverse on the same stencil: u = h - nu*(gamma/alpha)*(...)_x.
std::vector<double> bd_inverse(const std::vector<double>& v,
                               const std::vector<double>& h, double dx,
                               const GasModel& g, double nu);

// Max-norm residuals of the (v,h) traveling-wave system evaluated on the
// sampled arrays with centered differences (independent of the solve path).
struct ProfileResidual {
    double eq_mass = 0.0;      // -sigma v' - h' + (v^beta p(v)')'
    double eq_momentum = 0.0;  // -sigma h' + p(v)'
    double max_abs() const { return eq_mass > eq_momentum ? eq_mass : eq_momentum; }
};

ProfileResidual profile_residual(const ShockProfile& prof);

// Fitted exponential tail rate of v - v_end on xi in [5/eps, 10/eps]
// (family 1 fits the right tail toward v_m, family 2 the left tail).
double profile_tail_rate(const ShockProfile& prof);

}  // namespace shocklab
