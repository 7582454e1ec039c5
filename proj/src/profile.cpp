#include "shocklab/profile.hpp"

#include <algorithm>
#include <cmath>

namespace shocklab {

namespace {

// f(v) = [sigma (v - v_l) + (p(v) - p(v_l))/sigma] / (v^beta p'(v))
double ode_rhs_impl(double v, double vl, double pl, double sigma,
                    const GasModel& g) {
    const double num = sigma * (v - vl) + (pressure(v, g) - pl) / sigma;
    const double den = std::pow(v, g.beta()) * pressure_slope(v, g);
    return num / den;
}

double ode_rhs_slope_impl(double v, double vl, double pl, double sigma,
                          const GasModel& g) {
    const double beta = g.beta();
    const double p = pressure(v, g);
    const double dp = pressure_slope(v, g);
    const double d2p = pressure_curv(v, g);
    const double num = sigma * (v - vl) + (p - pl) / sigma;
    const double dnum = sigma + dp / sigma;
    const double den = std::pow(v, beta) * dp;
    const double dden = beta * std::pow(v, beta - 1.0) * dp + std::pow(v, beta) * d2p;
    return (dnum * den - num * dden) / (den * den);
}

}  // namespace

double ShockProfile::ode_rhs(double vv) const {
    return ode_rhs_impl(vv, left.v, pressure(left.v, gas), sigma, gas);
}

double ShockProfile::ode_rhs_slope(double vv) const {
    return ode_rhs_slope_impl(vv, left.v, pressure(left.v, gas), sigma, gas);
}

namespace {

double interp(const std::vector<double>& f, double xi0, double dxi, double xi) {
    if (f.size() == 1) return f[0];
    const double s = (xi - xi0) / dxi;
    if (s <= 0.0) return f.front();
    const double smax = static_cast<double>(f.size() - 1);
    if (s >= smax) return f.back();
    const std::size_t j = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(j);
    return (1.0 - w) * f[j] + w * f[j + 1];
}

}  // namespace

double ShockProfile::eval_v(double xi) const { return interp(v, xi0, dxi, xi); }
double ShockProfile::eval_h(double xi) const { return interp(h, xi0, dxi, xi); }
double ShockProfile::eval_u(double xi) const { return interp(u, xi0, dxi, xi); }

double ShockProfile::eval_dv(double xi) const {
    if (degenerate()) return 0.0;
    // Outside the window the profile is constant.
    if (xi < xi0 || xi > xi0 + dxi * static_cast<double>(v.size() - 1)) return 0.0;
    return ode_rhs(eval_v(xi));
}

double ShockProfile::eval_d2v(double xi) const {
    if (degenerate()) return 0.0;
    if (xi < xi0 || xi > xi0 + dxi * static_cast<double>(v.size() - 1)) return 0.0;
    const double vv = eval_v(xi);
    return ode_rhs_slope(vv) * ode_rhs(vv);
}

double ShockProfile::eval_dh(double xi) const {
    if (degenerate()) return 0.0;
    return pressure_slope(eval_v(xi), gas) * eval_dv(xi) / sigma;
}

ShockProfile solve_profile(int family, const WaveFan& fan, const GasModel& g,
                           double xi_half_width, double dxi) {
    if (family != 1 && family != 2)
        throw std::invalid_argument("solve_profile: family must be 1 or 2");

    ShockProfile prof;
    prof.gas = g;
    prof.family = family;
    prof.left = family == 1 ? fan.left : fan.middle;
    prof.right = family == 1 ? fan.middle : fan.right;
    prof.sigma = family == 1 ? fan.sigma1 : fan.sigma2;
    prof.eps = family == 1 ? fan.eps1 : fan.eps2;

    if (prof.eps == 0.0) {
        // Degenerate shock: constant state.
        prof.xi0 = -1.0;
        prof.dxi = 2.0;
        prof.v = {prof.left.v, prof.left.v};
        prof.h = {prof.left.u, prof.left.u};
        prof.u = {prof.left.u, prof.left.u};
        return prof;
    }

    const double vl = prof.left.v;
    const double vr = prof.right.v;
    const double pl = pressure(vl, g);
    const double sigma = prof.sigma;

    // Linearized tail rates at the two equilibria.
    prof.rate_left = std::abs(ode_rhs_slope_impl(vl, vl, pl, sigma, g));
    prof.rate_right = std::abs(ode_rhs_slope_impl(vr, vl, pl, sigma, g));
    const double rate = std::min(prof.rate_left, prof.rate_right);

    if (dxi <= 0.0) dxi = 0.01 / prof.eps;
    if (dxi > 0.1 / prof.eps)
        throw NumericalError("solve_profile: dxi does not resolve the layer");
    if (xi_half_width <= 0.0) {
        // Wide enough that amp*exp(-rate*W) <= 1e-8*eps at the boundary.
        const double amp = std::abs(vl - vr);
        xi_half_width =
            std::max(20.0 / prof.eps,
                     1.1 * std::log(amp / (1e-8 * prof.eps)) / rate);
    }

    const std::size_t nside =
        static_cast<std::size_t>(std::ceil(xi_half_width / dxi));
    const std::size_t m = 2 * nside + 1;
    prof.xi0 = -static_cast<double>(nside) * dxi;
    prof.dxi = dxi;
    prof.v.assign(m, 0.0);
    prof.v[nside] = 0.5 * (vl + vr);

    auto rk4 = [&](double vv, double hstep) {
        const double k1 = ode_rhs_impl(vv, vl, pl, sigma, g);
        const double k2 = ode_rhs_impl(vv + 0.5 * hstep * k1, vl, pl, sigma, g);
        const double k3 = ode_rhs_impl(vv + 0.5 * hstep * k2, vl, pl, sigma, g);
        const double k4 = ode_rhs_impl(vv + hstep * k3, vl, pl, sigma, g);
        return vv + hstep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const double stop_gap = 1e-10 * prof.eps;
    // March right toward prof.right, left toward prof.left; freeze once the
    // remaining gap is below stop_gap (the endpoints are equilibria).
    bool frozen = false;
    for (std::size_t j = nside; j + 1 < m; ++j) {
        if (frozen || std::abs(prof.v[j] - vr) < stop_gap) {
            frozen = true;
            prof.v[j + 1] = prof.v[j];
        } else {
            prof.v[j + 1] = rk4(prof.v[j], dxi);
        }
    }
    frozen = false;
    for (std::size_t j = nside; j > 0; --j) {
        if (frozen || std::abs(prof.v[j] - vl) < stop_gap) {
            frozen = true;
            prof.v[j - 1] = prof.v[j];
        } else {
            prof.v[j - 1] = rk4(prof.v[j], -dxi);
        }
    }

    // End values must be approached at the grid boundary.
    const double tol_end = 1e-8 * prof.eps;
    if (std::abs(prof.v.front() - vl) > tol_end ||
        std::abs(prof.v.back() - vr) > tol_end)
        throw NumericalError(
            "solve_profile: end states not approached; widen xi_half_width");

    // Monotone in v: decreasing for family 1, increasing for family 2, strictly
    // until the frozen tails.
    const double dir = family == 1 ? -1.0 : 1.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double step = dir * (prof.v[j + 1] - prof.v[j]);
        const bool tail = prof.v[j + 1] == prof.v[j];
        if (!tail && step <= 0.0)
            throw NumericalError("solve_profile: non-monotone samples; reduce dxi");
    }

    // Integrated second equation: h = h_l + (p(v)-p(v_l))/sigma, and the raw
    // velocity u = u_l - sigma (v - v_l).
    const double hl = prof.left.u;
    prof.h.resize(m);
    prof.u.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        prof.h[j] = hl + (pressure(prof.v[j], g) - pl) / sigma;
        prof.u[j] = hl - sigma * (prof.v[j] - vl);
    }
    return prof;
}

ProfileResidual profile_residual(const ShockProfile& prof) {
    ProfileResidual res;
    if (prof.degenerate()) return res;
    const GasModel& g = prof.gas;
    const std::size_t m = prof.v.size();
    const double dxi = prof.dxi;
    std::vector<double> p(m), flux(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = pressure(prof.v[j], g);
    for (std::size_t j = 1; j + 1 < m; ++j)
        flux[j] = std::pow(prof.v[j], g.beta()) *
                  (p[j + 1] - p[j - 1]) / (2.0 * dxi);
    for (std::size_t j = 2; j + 2 < m; ++j) {
        const double dv = (prof.v[j + 1] - prof.v[j - 1]) / (2.0 * dxi);
        const double dh = (prof.h[j + 1] - prof.h[j - 1]) / (2.0 * dxi);
        const double dp = (p[j + 1] - p[j - 1]) / (2.0 * dxi);
        const double dflux = (flux[j + 1] - flux[j - 1]) / (2.0 * dxi);
        const double r1 = -prof.sigma * dv - dh + dflux;
        const double r2 = -prof.sigma * dh + dp;
        res.eq_mass = std::max(res.eq_mass, std::abs(r1));
        res.eq_momentum = std::max(res.eq_momentum, std::abs(r2));
    }
    return res;
}

double profile_tail_rate(const ShockProfile& prof) {
    if (prof.degenerate()) return 0.0;
    const double lo = 5.0 / prof.eps, hi = 10.0 / prof.eps;
    // Fit log|v - v_end| on the decaying tail: the right tail for family 1,
    // the left tail for family 2 (both approach the middle state).
    const double v_end = prof.family == 1 ? prof.right.v : prof.left.v;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    const std::size_t m = prof.v.size();
    for (std::size_t j = 0; j < m; ++j) {
        const double xi = prof.xi0 + prof.dxi * static_cast<double>(j);
        const double axi = prof.family == 1 ? xi : -xi;
        if (axi < lo || axi > hi) continue;
        const double gap = std::abs(prof.v[j] - v_end);
        if (gap <= 0.0) continue;
        const double ly = std::log(gap);
        sx += axi;
        sy += ly;
        sxx += axi * axi;
        sxy += axi * ly;
        ++n;
    }
    if (n < 2) throw NumericalError("profile_tail_rate: tail window empty");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;  // decay rate
}

BDState CompositeWave::eval_bd(double t, double x, double X1, double X2) const {
    const double xi1 = x - fan.sigma1 * t - X1;
    const double xi2 = x - fan.sigma2 * t - X2;
    return BDState{wave1.eval_v(xi1) + wave2.eval_v(xi2) - middle.v,
                   wave1.eval_h(xi1) + wave2.eval_h(xi2) - middle.u};
}

State CompositeWave::eval_state(double t, double x, double X1, double X2) const {
    const double xi1 = x - fan.sigma1 * t - X1;
    const double xi2 = x - fan.sigma2 * t - X2;
    return State{wave1.eval_v(xi1) + wave2.eval_v(xi2) - middle.v,
                 wave1.eval_u(xi1) + wave2.eval_u(xi2) - middle.u};
}

CompositeWave make_composite(const WaveFan& fan, const GasModel& g,
                             double xi_half_width, double dxi) {
    CompositeWave w;
    w.wave1 = solve_profile(1, fan, g, xi_half_width, dxi);
    w.wave2 = solve_profile(2, fan, g, xi_half_width, dxi);
    w.middle = fan.middle;
    w.fan = fan;
    return w;
}

std::vector<double> bd_transform(const std::vector<double>& v,
                                 const std::vector<double>& u, double dx,
                                 const GasModel& g, double nu) {
    const std::size_t n = v.size();
    if (u.size() != n || n < 2)
        throw std::invalid_argument("bd_transform: inconsistent arrays");
    const double expo = g.alpha / g.gamma;
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j)
        phi[j] = std::pow(pressure(v[j], g), expo);
    const double k = nu * bd_gradient_factor(g);
    std::vector<double> h(n);
    h[0] = u[0] + k * (phi[1] - phi[0]) / dx;
    for (std::size_t j = 1; j + 1 < n; ++j)
        h[j] = u[j] + k * (phi[j + 1] - phi[j - 1]) / (2.0 * dx);
    h[n - 1] = u[n - 1] + k * (phi[n - 1] - phi[n - 2]) / dx;
    return h;
}

std::vector<double> bd_inverse(const std::vector<double>& v,
                               const std::vector<double>& h, double dx,
                               const GasModel& g, double nu) {
    const std::size_t n = v.size();
    if (h.size() != n || n < 2)
        throw std::invalid_argument("bd_inverse: inconsistent arrays");
    const double expo = g.alpha / g.gamma;
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j)
        phi[j] = std::pow(pressure(v[j], g), expo);
    const double k = nu * bd_gradient_factor(g);
    std::vector<double> u(n);
    u[0] = h[0] - k * (phi[1] - phi[0]) / dx;
    for (std::size_t j = 1; j + 1 < n; ++j)
        u[j] = h[j] - k * (phi[j + 1] - phi[j - 1]) / (2.0 * dx);
    u[n - 1] = h[n - 1] - k * (phi[n - 1] - phi[n - 2]) / dx;
    return u;
}

}  // namespace shocklab
