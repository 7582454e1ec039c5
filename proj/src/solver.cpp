#include "shocklab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shocklab {

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n + 1);
    for (int j = 0; j <= n; ++j) xs[j] = x(j);
    return xs;
}

void Grid::validate() const {
    if (!(n >= 8)) throw ConfigError("Grid: need at least 8 cells");
    if (!(x_max > x_min)) throw ConfigError("Grid: x_max must exceed x_min");
}

double stable_dt(const std::vector<double>& v, double dx, const GasModel& g,
                 double nu, double c_cfl, double c_diff) {
    double max_speed = 0.0, max_diff = 0.0;
    for (double vv : v) {
        const double dp = -pressure_slope(vv, g);  // > 0
        max_speed = std::max(max_speed, std::sqrt(dp));
        max_diff = std::max(max_diff, nu * pow_beta(vv, g.beta()) * dp);
    }
    double dt = c_cfl * dx / max_speed;
    if (max_diff > 0.0) dt = std::min(dt, c_diff * dx * dx / max_diff);
    return dt;
}

namespace {

void check_positivity(const std::vector<double>& v, const Grid& grid,
                      const GasModel& g, const char* who) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] > g.v_min) || !std::isfinite(v[j]))
            throw NumericalError(std::string(who) + ": volume blow-up at x = " +
                                 std::to_string(grid.x(static_cast<int>(j))) +
                                 " (v = " + std::to_string(v[j]) + ")");
    }
}

// Semi-discrete RHS of the (v,h) system: centered h_x and p(v)_x,
// conservative face fluxes for the diffusion. Boundary nodes pinned.
void rhs_vh(const std::vector<double>& v, const std::vector<double>& h,
            double dx, const GasModel& g, double nu, std::vector<double>& dv,
            std::vector<double>& dh) {
    const std::size_t m = v.size();
    dv.assign(m, 0.0);
    dh.assign(m, 0.0);
    std::vector<double> p(m), vb(m);
    for (std::size_t j = 0; j < m; ++j) {
        p[j] = pressure(v[j], g);
        vb[j] = pow_beta(v[j], g.beta());
    }
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double flux_r = 0.5 * (vb[j] + vb[j + 1]) * (p[j + 1] - p[j]) / dx;
        const double flux_l = 0.5 * (vb[j - 1] + vb[j]) * (p[j] - p[j - 1]) / dx;
        dv[j] = (h[j + 1] - h[j - 1]) / (2.0 * dx) - nu * (flux_r - flux_l) / dx;
        dh[j] = -(p[j + 1] - p[j - 1]) / (2.0 * dx);
    }
}

void rhs_raw(const std::vector<double>& v, const std::vector<double>& u,
             double dx, const GasModel& g, double nu, std::vector<double>& dv,
             std::vector<double>& du) {
    const std::size_t m = v.size();
    dv.assign(m, 0.0);
    du.assign(m, 0.0);
    std::vector<double> p(m), muv(m);
    for (std::size_t j = 0; j < m; ++j) {
        p[j] = pressure(v[j], g);
        muv[j] = g.b * std::pow(v[j], -g.alpha - 1.0);  // mu(v)/v
    }
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double flux_r = 0.5 * (muv[j] + muv[j + 1]) * (u[j + 1] - u[j]) / dx;
        const double flux_l = 0.5 * (muv[j - 1] + muv[j]) * (u[j] - u[j - 1]) / dx;
        dv[j] = (u[j + 1] - u[j - 1]) / (2.0 * dx);
        du[j] = -(p[j + 1] - p[j - 1]) / (2.0 * dx) + nu * (flux_r - flux_l) / dx;
    }
}

}  // namespace

void step(Field& f, double dt, const GasModel& g, double nu) {
    const double dx = f.grid.dx();
    const std::size_t m = f.v.size();
    static thread_local std::vector<double> dv1, dh1, dv2, dh2, v1, h1;
    rhs_vh(f.v, f.h, dx, g, nu, dv1, dh1);
    v1.resize(m);
    h1.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        v1[j] = f.v[j] + dt * dv1[j];
        h1[j] = f.h[j] + dt * dh1[j];
    }
    check_positivity(v1, f.grid, g, "step");
    rhs_vh(v1, h1, dx, g, nu, dv2, dh2);
    for (std::size_t j = 0; j < m; ++j) {
        f.v[j] = 0.5 * (f.v[j] + v1[j] + dt * dv2[j]);
        f.h[j] = 0.5 * (f.h[j] + h1[j] + dt * dh2[j]);
    }
    check_positivity(f.v, f.grid, g, "step");
    f.t += dt;
}

void raw_step(RawField& f, double dt, const GasModel& g, double nu) {
    const double dx = f.grid.dx();
    const std::size_t m = f.v.size();
    static thread_local std::vector<double> dv1, du1, dv2, du2, v1, u1;
    rhs_raw(f.v, f.u, dx, g, nu, dv1, du1);
    v1.resize(m);
    u1.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        v1[j] = f.v[j] + dt * dv1[j];
        u1[j] = f.u[j] + dt * du1[j];
    }
    check_positivity(v1, f.grid, g, "raw_step");
    rhs_raw(v1, u1, dx, g, nu, dv2, du2);
    for (std::size_t j = 0; j < m; ++j) {
        f.v[j] = 0.5 * (f.v[j] + v1[j] + dt * dv2[j]);
        f.u[j] = 0.5 * (f.u[j] + u1[j] + dt * du2[j]);
    }
    check_positivity(f.v, f.grid, g, "raw_step");
    f.t += dt;
}

void evolve(Field& f, double T, const GasModel& g, double nu, double dt_max,
            const std::function<void(Field&, double)>& after_step) {
    const double t_end = f.t + T;
    // tolerance absorbs step-count rounding so no stray microstep is taken
    while (f.t < t_end - 1e-9 * std::max(1.0, t_end)) {
        double dt = stable_dt(f.v, f.grid.dx(), g, nu);
        if (dt_max > 0.0) {
            if (dt_max > 1.0000001 * dt)
                throw NumericalError("evolve: requested dt exceeds stability bound");
            dt = dt_max;
        }
        dt = std::min(dt, t_end - f.t);
        step(f, dt, g, nu);
        if (after_step) after_step(f, dt);
    }
}

Field make_field_from_composite(const CompositeWave& waves, const Grid& grid,
                                double t0) {
    Field f;
    f.grid = grid;
    f.t = t0;
    f.v.resize(grid.n + 1);
    f.h.resize(grid.n + 1);
    for (int j = 0; j <= grid.n; ++j) {
        const BDState s = waves.eval_bd(t0, grid.x(j), 0.0, 0.0);
        f.v[j] = s.v;
        f.h[j] = s.h;
    }
    f.far_left = BDState{waves.fan.left.v, waves.fan.left.u};
    f.far_right = BDState{waves.fan.right.v, waves.fan.right.u};
    return f;
}

double interior_mass(const Field& f) {
    double s = 0.0;
    for (std::size_t j = 1; j + 1 < f.v.size(); ++j) s += f.v[j];
    return s * f.grid.dx();
}

FanDistance fan_distance(const Field& f, const WaveFan& fan, double t,
                         double X1, double X2) {
    return fan_distance(f.grid.nodes(), f.v, f.h, fan, t, X1, X2);
}

}  // namespace shocklab
