#include "shocklab/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace shocklab {

namespace {

// One Hugoniot step from (vl, ul) with pressure jump eps (p increases across
// a 1-shock seen from the left, decreases across a 2-shock).
struct HugoniotArm {
    double v, u, sigma;
};

HugoniotArm hugoniot(const State& l, double eps, int family, const GasModel& g) {
    const double pl = pressure(l.v, g);
    const double pr = family == 1 ? pl + eps : pl - eps;
    if (!(pr > 0.0))
        throw std::domain_error("build_fan: strength drives pressure negative");
    const double vr = pressure_inverse(pr, g);
    if (!(vr > g.v_min))
        throw std::domain_error("build_fan: strength drives volume below floor");
    double sigma;
    if (eps == 0.0) {
        // Zero-strength limit: characteristic speed.
        sigma = std::sqrt(-pressure_slope(l.v, g));
        if (family == 1) sigma = -sigma;
        return {l.v, l.u, sigma};
    }
    sigma = std::sqrt(-(pr - pl) / (vr - l.v));
    if (family == 1) sigma = -sigma;
    // RH mass condition: -sigma (vr - vl) - (ur - ul) = 0.
    const double ur = l.u - sigma * (vr - l.v);
    return {vr, ur, sigma};
}

}  // namespace

WaveFan build_fan(const State& u_minus, double eps1, double eps2,
                  const GasModel& g) {
    g.validate();
    if (!(eps1 >= 0.0) || !(eps2 >= 0.0))
        throw std::domain_error("build_fan: strengths must be >= 0");
    if (!(u_minus.v > g.v_min))
        throw std::domain_error("build_fan: left volume below floor");

    const HugoniotArm a1 = hugoniot(u_minus, eps1, 1, g);
    const State um{a1.v, a1.u};
    const HugoniotArm a2 = hugoniot(um, eps2, 2, g);

    WaveFan fan;
    fan.gas = g;
    fan.left = u_minus;
    fan.middle = um;
    fan.right = State{a2.v, a2.u};
    fan.sigma1 = a1.sigma;
    fan.sigma2 = a2.sigma;
    fan.eps1 = eps1;
    fan.eps2 = eps2;
    return fan;
}

double RHResidual::max_abs() const {
    return std::max(std::max(std::abs(r1_mass), std::abs(r1_momentum)),
                    std::max(std::abs(r2_mass), std::abs(r2_momentum)));
}

RHResidual rh_residuals(const WaveFan& fan) {
    const GasModel& g = fan.gas;
    const State &l = fan.left, &m = fan.middle, &r = fan.right;
    RHResidual res;
    res.r1_mass = -fan.sigma1 * (m.v - l.v) - (m.u - l.u);
    res.r1_momentum = -fan.sigma1 * (m.u - l.u) + pressure(m.v, g) - pressure(l.v, g);
    res.r2_mass = -fan.sigma2 * (r.v - m.v) - (r.u - m.u);
    res.r2_momentum = -fan.sigma2 * (r.u - m.u) + pressure(r.v, g) - pressure(m.v, g);
    return res;
}

State eval_fan(const WaveFan& fan, double t, double x, double X1, double X2) {
    const double b1 = fan.sigma1 * t + X1;
    const double b2 = fan.sigma2 * t + X2;
    if (b1 > b2)
        throw NumericalError("eval_fan: discontinuities crossed (b1 > b2)");
    if (x <= b1) return fan.left;
    if (x <= b2) return fan.middle;
    return fan.right;
}

FanDistance fan_distance(const std::vector<double>& xs,
                         const std::vector<double>& v,
                         const std::vector<double>& h, const WaveFan& fan,
                         double t, double X1, double X2) {
    if (xs.size() != v.size() || xs.size() != h.size() || xs.size() < 2)
        throw std::invalid_argument("fan_distance: inconsistent arrays");
    const std::size_t n = xs.size();
    std::vector<double> f1(n), f2(n), f3(n);
    for (std::size_t j = 0; j < n; ++j) {
        const State bar = eval_fan(fan, t, xs[j], X1, X2);
        const double dh = h[j] - bar.u;
        f1[j] = std::abs(v[j] - bar.v);
        f2[j] = dh * dh;
        f3[j] = 0.5 * dh * dh + rel_Q(v[j], bar.v, fan.gas);
    }
    const double dx = xs[1] - xs[0];
    FanDistance d;
    d.l1_v = trapezoid(f1, dx);
    d.l2_h = std::sqrt(trapezoid(f2, dx));
    d.rel_entropy = trapezoid(f3, dx);
    return d;
}

std::string fan_to_json(const WaveFan& fan) {
    nlohmann::json j;
    j["v_minus"] = fan.left.v;
    j["u_minus"] = fan.left.u;
    j["eps1"] = fan.eps1;
    j["eps2"] = fan.eps2;
    j["gamma"] = fan.gas.gamma;
    j["alpha"] = fan.gas.alpha;
    return j.dump(2);
}

WaveFan fan_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GasModel g;
    g.gamma = j.at("gamma").get<double>();
    g.alpha = j.at("alpha").get<double>();
    g.b = g.gamma;
    return build_fan(State{j.at("v_minus").get<double>(),
                           j.at("u_minus").get<double>()},
                     j.at("eps1").get<double>(), j.at("eps2").get<double>(), g);
}

}  // namespace shocklab
