#pragma once

#include "shocklab/profile.hpp"

namespace shocklab {

// Piecewise-linear rate factors driving the shift ODE.
// rate_phi: 0 for y <= 0, -y/eps^4 on [0, eps^2], -1/eps^2 for y >= eps^2.
double rate_phi(double y, double eps);
// rate_psi: 1 for y <= -eps^2, -y/eps^2 on [-eps^2, 0], 0 for y >= 0.
double rate_psi(double y, double eps);

// Branches of the explicit four-case form, per family i with y = (-1)^(i-1) Y_i.
enum ShiftBranch : int {
    kBranchPushSaturated = 0,  // y >= eps^2
    kBranchPushLinear = 1,     // 0 <= y <= eps^2
    kBranchPullLinear = 2,     // -eps^2 <= y <= 0
    kBranchTravel = 3,         // y <= -eps^2 (rate -sigma/2)
};

struct ShiftRates {
    double dX1, dX2;
    int branch1, branch2;
};

// dX1/dt = rate_phi(Y1)(2|Jbad|+1) - sigma1/2 rate_psi(Y1)
// dX2/dt = -rate_phi(-Y2)(2|Jbad|+1) - sigma2/2 rate_psi(-Y2)
// Satisfies dX1/dt <= -sigma1/2 and dX2/dt >= -sigma2/2 for every input.
ShiftRates shift_rhs(double Y1, double Y2, double j_bad, const WaveFan& fan);

// Independent four-branch evaluation, for cross-checking shift_rhs.
ShiftRates shift_rhs_explicit(double Y1, double Y2, double j_bad,
                              const WaveFan& fan);

// Shift positions plus floating-point-exact extremal trackers: ext_i
// accumulates the clamped rate -sigma_i/2 with the same summation, so the
// separation invariants can be asserted with zero tolerance.
struct ShiftState {
    double X1 = 0.0, X2 = 0.0;
    double t = 0.0;
    double ext1 = 0.0, ext2 = 0.0;
};

// Explicit Euler update; throws if the separation invariants fail (they hold
// by construction because the rates are clamped pointwise).
ShiftState advance_shifts(const ShiftState& s, const ShiftRates& r, double dt,
                          const WaveFan& fan);

// Weight functions a_1 (decreasing 1 -> 1-lambda), a_2 (increasing
// 1-lambda -> 1), and a = a_1 + a_2 - 1, built on the shock profiles.
struct WeightPair {
    double lambda = 0.1;
    const CompositeWave* waves = nullptr;

    struct Values {
        double a1, a2, a;
        double da1, da2;  // spatial derivatives
    };
    Values eval(double t, double x, double X1, double X2) const;

    // Per-family weight value and derivative in the traveling variable.
    double a1_of_xi(double xi) const;
    double a2_of_xi(double xi) const;
    double da1_of_xi(double xi) const;
    double da2_of_xi(double xi) const;
};

}  // namespace shocklab
