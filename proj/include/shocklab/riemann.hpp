#pragma once

#include <string>
#include <vector>

#include "shocklab/gas.hpp"

namespace shocklab {

// Two-shock Riemann configuration: U- connects to Um by a 1-shock and Um to
// U+ by a 2-shock, both satisfying Rankine-Hugoniot and Lax conditions.
struct WaveFan {
    GasModel gas;
    State left;    // U-
    State middle;  // Um
    State right;   // U+
    double sigma1;  // 1-shock speed, < 0
    double sigma2;  // 2-shock speed, > 0
    double eps1;    // |p(v-) - p(vm)|
    double eps2;    // |p(vm) - p(v+)|
};

// Builds the fan from the left state and the two pressure-jump strengths.
// eps = 0 degenerates to equal states with the characteristic speed.
WaveFan build_fan(const State& u_minus, double eps1, double eps2,
                  const GasModel& g);

struct RHResidual {
    double r1_mass, r1_momentum;  // 1-shock jump conditions
    double r2_mass, r2_momentum;  // 2-shock jump conditions
    double max_abs() const;
};

RHResidual rh_residuals(const WaveFan& fan);

// Shifted Riemann fan at (t, x). Boundary points between regions are
// assigned to the left region (left-closed intervals).
State eval_fan(const WaveFan& fan, double t, double x, double X1, double X2);

struct FanDistance {
    double l1_v;         // \int |v - vbar| dx
    double l2_h;         // sqrt( \int |h - ubar|^2 dx )
    double rel_entropy;  // \int eta((v,h)|(vbar,ubar)) dx
};

// Distance between a sampled (v,h) field on nodes xs and the shifted fan.
FanDistance fan_distance(const std::vector<double>& xs,
                         const std::vector<double>& v,
                         const std::vector<double>& h, const WaveFan& fan,
                         double t, double X1, double X2);

// JSON document with fields {v_minus, u_minus, eps1, eps2, gamma, alpha};
// derived quantities are recomputed on load.
std::string fan_to_json(const WaveFan& fan);
WaveFan fan_from_json(const std::string& text);

}  // namespace shocklab
