#include "shocklab/gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shocklab {

namespace {

void require_volume(double v, const GasModel& g, const char* who) {
    if (!(v > g.v_min)) {
        throw std::domain_error(std::string(who) + ": specific volume " +
                                std::to_string(v) + " below floor " +
                                std::to_string(g.v_min));
    }
}

}  // namespace

void GasModel::validate() const {
    if (!(gamma > 1.0)) throw ConfigError("GasModel: gamma must be > 1");
    if (!(alpha > 0.0)) throw ConfigError("GasModel: alpha must be > 0");
    if (!(alpha <= gamma && gamma <= alpha + 1.0))
        throw ConfigError("GasModel: need alpha <= gamma <= alpha + 1");
    if (!(b > 0.0)) throw ConfigError("GasModel: b must be > 0");
    if (!(nu >= 0.0)) throw ConfigError("GasModel: nu must be >= 0");
    if (!(v_min > 0.0)) throw ConfigError("GasModel: v_min must be > 0");
}

double pressure(double v, const GasModel& g) {
    require_volume(v, g, "pressure");
    if (g.gamma == 2.0) return 1.0 / (v * v);
    return std::pow(v, -g.gamma);
}

double pressure_slope(double v, const GasModel& g) {
    require_volume(v, g, "pressure_slope");
    if (g.gamma == 2.0) return -2.0 / (v * v * v);
    return -g.gamma * std::pow(v, -g.gamma - 1.0);
}

double pressure_curv(double v, const GasModel& g) {
    require_volume(v, g, "pressure_curv");
    if (g.gamma == 2.0) return 6.0 / (v * v * v * v);
    return g.gamma * (g.gamma + 1.0) * std::pow(v, -g.gamma - 2.0);
}

double pressure_inverse(double p, const GasModel& g) {
    if (!(p > 0.0))
        throw std::domain_error("pressure_inverse: pressure must be positive");
    return std::pow(p, -1.0 / g.gamma);
}

double entropy_Q(double v, const GasModel& g) {
    require_volume(v, g, "entropy_Q");
    if (g.gamma == 2.0) return 1.0 / v;
    return std::pow(v, 1.0 - g.gamma) / (g.gamma - 1.0);
}

double rel_Q(double v, double w, const GasModel& g) {
    // Q'(w) = -p(w)
    return entropy_Q(v, g) - entropy_Q(w, g) + pressure(w, g) * (v - w);
}

double rel_p(double v, double w, const GasModel& g) {
    return pressure(v, g) - pressure(w, g) - pressure_slope(w, g) * (v - w);
}

double relative_fn(RelativeFn f, double v1, double v2, const GasModel& g) {
    return f == RelativeFn::Q ? rel_Q(v1, v2, g) : rel_p(v1, v2, g);
}

double rel_entropy_eta(const BDState& a, const BDState& b, const GasModel& g) {
    const double dh = a.h - b.h;
    return 0.5 * dh * dh + rel_Q(a.v, b.v, g);
}

double bd_gradient_factor(const GasModel& g) { return g.gamma / g.alpha; }

double rel_E_functional(const State& a, double da, const State& b, double db,
                        const GasModel& g) {
    const double k = bd_gradient_factor(g);
    const double dh = (a.u + k * da) - (b.u + k * db);
    return 0.5 * dh * dh + rel_Q(a.v, b.v, g);
}

InequalityReport check_inequality_suite(
    const std::vector<std::pair<double, double>>& samples, const GasModel& g,
    double v_star) {
    if (samples.empty())
        throw std::invalid_argument("check_inequality_suite: empty sample set");

    InequalityReport rep;
    rep.c1_fitted = std::numeric_limits<double>::infinity();
    rep.c2_fitted = std::numeric_limits<double>::infinity();
    rep.C_fitted = 0.0;
    rep.local_worst_margin = std::numeric_limits<double>::infinity();

    const double p_star = pressure(v_star, g);
    // Regime sizes (|p(v)-p(w)|, |p(w)-p(v*)|) of local-bound violations; used
    // to report the empirically safe delta.
    std::vector<double> violation_scales;
    double max_ok_scale = 0.0;

    for (const auto& [v, w] : samples) {
        if (!(v > g.v_min) || !(w > g.v_min)) continue;
        const double dv = v - w;

        if (w < 2.0 * v_star && std::abs(dv) > 0.0) {
            const double q = rel_Q(v, w, g);
            if (v <= 3.0 * v_star) {
                rep.c1_fitted = std::min(rep.c1_fitted, q / (dv * dv));
                ++rep.c1_samples;
            } else {
                rep.c2_fitted = std::min(rep.c2_fitted, q / std::abs(dv));
                ++rep.c2_samples;
            }
        }

        if (v >= 0.5 * v_star && w >= 0.5 * v_star && std::abs(dv) > 0.0) {
            rep.C_fitted = std::max(rep.C_fitted, rel_p(v, w, g) / (dv * dv));
            ++rep.C_samples;
        }

        // Constant-free local bound:
        //   Q(v|w) >= p(w)^(-1/g-1)/(2g) dp^2 - (1+g)/(3g^2) p(w)^(-1/g-2) dp^3
        const double pw = pressure(w, g);
        const double dp = pressure(v, g) - pw;
        const double scale = std::max(std::abs(dp), std::abs(pw - p_star));
        const double rhs =
            std::pow(pw, -1.0 / g.gamma - 1.0) / (2.0 * g.gamma) * dp * dp -
            (1.0 + g.gamma) / (3.0 * g.gamma * g.gamma) *
                std::pow(pw, -1.0 / g.gamma - 2.0) * dp * dp * dp;
        const double margin = rel_Q(v, w, g) - rhs;
        ++rep.local_samples;
        rep.local_worst_margin = std::min(rep.local_worst_margin, margin);
        // Tolerate pure rounding at v ~ w where both sides vanish.
        if (margin < -1e-13 * (1.0 + std::abs(rhs))) {
            ++rep.local_violations;
            violation_scales.push_back(scale);
        } else {
            max_ok_scale = std::max(max_ok_scale, scale);
        }
    }

    if (rep.c1_samples == 0) rep.c1_fitted = 0.0;
    if (rep.c2_samples == 0) rep.c2_fitted = 0.0;

    if (violation_scales.empty()) {
        rep.local_delta_empirical = max_ok_scale;
    } else {
        rep.local_delta_empirical =
            *std::min_element(violation_scales.begin(), violation_scales.end());
    }
    return rep;
}

}  // namespace shocklab
