#pragma once

#include <functional>
#include <vector>

#include "shocklab/profile.hpp"

namespace shocklab {

struct Grid {
    double x_min = 0.0, x_max = 0.0;
    int n = 0;  // cell count; n+1 nodes

    double dx() const { return (x_max - x_min) / n; }
    double x(int j) const { return x_min + j * dx(); }
    std::vector<double> nodes() const;
    void validate() const;
};

// Discrete (v,h) solution of  v_t - h_x = -nu (v^beta p(v)_x)_x,
// h_t + p(v)_x = 0, with far-field Dirichlet pinning.
struct Field {
    Grid grid;
    std::vector<double> v, h;  // size n+1
    double t = 0.0;
    BDState far_left{1.0, 0.0}, far_right{1.0, 0.0};
};

// Raw (v,u) system v_t - u_x = 0, u_t + p(v)_x = nu((mu(v)/v)u_x)_x,
// kept for cross-validating the BD transform.
struct RawField {
    Grid grid;
    std::vector<double> v, u;
    double t = 0.0;
    State far_left{1.0, 0.0}, far_right{1.0, 0.0};
};

// Largest stable step: min(c_cfl dx / max wave speed,
//                          c_diff dx^2 / max(nu v^beta |p'(v)|)).
double stable_dt(const std::vector<double>& v, double dx, const GasModel& g,
                 double nu, double c_cfl = 0.4, double c_diff = 0.25);

// One explicit two-stage (Heun) step. Throws NumericalError (with the node
// location) on lost positivity or NaN.
void step(Field& f, double dt, const GasModel& g, double nu);
void raw_step(RawField& f, double dt, const GasModel& g, double nu);

// Driver loop: fixed step dt_max if positive (checked against stability each
// step), otherwise the stability-limited step. after_step runs once per
// accepted step with the step actually taken.
void evolve(Field& f, double T, const GasModel& g, double nu, double dt_max,
            const std::function<void(Field&, double)>& after_step = {});

// Field sampled from the composite wave at its current time.
Field make_field_from_composite(const CompositeWave& waves, const Grid& grid,
                                double t0 = 0.0);

// Net boundary flux bookkeeping for the conservation check: discrete mass
// sum_j dx * v_j over the interior changes only through the boundary terms.
double interior_mass(const Field& f);

FanDistance fan_distance(const Field& f, const WaveFan& fan, double t,
                         double X1, double X2);

}  // namespace shocklab
