#include "shocklab/weights.hpp"

#include <cmath>

namespace shocklab {

double rate_phi(double y, double eps) {
    const double e2 = eps * eps;
    if (y <= 0.0) return 0.0;
    if (y >= e2) return -1.0 / e2;
    return -y / (e2 * e2);
}

double rate_psi(double y, double eps) {
    const double e2 = eps * eps;
    if (y <= -e2) return 1.0;
    if (y >= 0.0) return 0.0;
    return -y / e2;
}

namespace {

int branch_of(double y, double eps) {
    const double e2 = eps * eps;
    if (y >= e2) return kBranchPushSaturated;
    if (y >= 0.0) return kBranchPushLinear;
    if (y >= -e2) return kBranchPullLinear;
    return kBranchTravel;
}

}  // namespace

ShiftRates shift_rhs(double Y1, double Y2, double j_bad, const WaveFan& fan) {
    const double drive = 2.0 * std::abs(j_bad) + 1.0;
    ShiftRates r;
    r.dX1 = rate_phi(Y1, fan.eps1) * drive - 0.5 * fan.sigma1 * rate_psi(Y1, fan.eps1);
    r.dX2 = -rate_phi(-Y2, fan.eps2) * drive - 0.5 * fan.sigma2 * rate_psi(-Y2, fan.eps2);
    r.branch1 = branch_of(Y1, fan.eps1);
    r.branch2 = branch_of(-Y2, fan.eps2);
    return r;
}

ShiftRates shift_rhs_explicit(double Y1, double Y2, double j_bad,
                              const WaveFan& fan) {
    const double drive = 2.0 * std::abs(j_bad) + 1.0;
    ShiftRates r;
    r.branch1 = branch_of(Y1, fan.eps1);
    r.branch2 = branch_of(-Y2, fan.eps2);
    const double e12 = fan.eps1 * fan.eps1;
    const double e22 = fan.eps2 * fan.eps2;
    switch (r.branch1) {
        case kBranchPushSaturated: r.dX1 = -drive / e12; break;
        case kBranchPushLinear: r.dX1 = -Y1 / (e12 * e12) * drive; break;
        case kBranchPullLinear: r.dX1 = 0.5 * fan.sigma1 * Y1 / e12; break;
        default: r.dX1 = -0.5 * fan.sigma1; break;
    }
    switch (r.branch2) {
        case kBranchPushSaturated: r.dX2 = drive / e22; break;
        case kBranchPushLinear: r.dX2 = -Y2 / (e22 * e22) * drive; break;
        case kBranchPullLinear: r.dX2 = -0.5 * fan.sigma2 * Y2 / e22; break;
        default: r.dX2 = -0.5 * fan.sigma2; break;
    }
    return r;
}

ShiftState advance_shifts(const ShiftState& s, const ShiftRates& r, double dt,
                          const WaveFan& fan) {
    if (!(dt > 0.0)) throw std::invalid_argument("advance_shifts: dt must be > 0");
    const double cap1 = -(0.5 * fan.sigma1);  // upper bound on dX1/dt
    const double cap2 = -(0.5 * fan.sigma2);  // lower bound on dX2/dt
    if (r.dX1 > cap1 || r.dX2 < cap2)
        throw NumericalError("advance_shifts: rate clamp violated (RHS bug)");
    ShiftState out = s;
    out.X1 = s.X1 + dt * r.dX1;
    out.X2 = s.X2 + dt * r.dX2;
    // Extremal trajectories accumulated with identical operations; IEEE
    // rounding is monotone, so X1 <= ext1 and X2 >= ext2 hold exactly.
    out.ext1 = s.ext1 + dt * cap1;
    out.ext2 = s.ext2 + dt * cap2;
    out.t = s.t + dt;
    if (out.X1 > out.ext1 || out.X2 < out.ext2)
        throw NumericalError("advance_shifts: separation invariant violated");
    return out;
}

WeightPair::Values WeightPair::eval(double t, double x, double X1,
                                    double X2) const {
    const WaveFan& fan = waves->fan;
    const double xi1 = x - fan.sigma1 * t - X1;
    const double xi2 = x - fan.sigma2 * t - X2;
    Values w;
    w.a1 = a1_of_xi(xi1);
    w.a2 = a2_of_xi(xi2);
    w.a = w.a1 + w.a2 - 1.0;
    w.da1 = da1_of_xi(xi1);
    w.da2 = da2_of_xi(xi2);
    return w;
}

double WeightPair::a1_of_xi(double xi) const {
    const ShockProfile& p1 = waves->wave1;
    if (p1.degenerate()) return 1.0;
    const double pv = pressure(p1.eval_v(xi), p1.gas);
    const double pl = pressure(p1.left.v, p1.gas);
    return 1.0 - lambda * (pv - pl) / p1.eps;
}

double WeightPair::a2_of_xi(double xi) const {
    const ShockProfile& p2 = waves->wave2;
    if (p2.degenerate()) return 1.0;
    const double pv = pressure(p2.eval_v(xi), p2.gas);
    const double pr = pressure(p2.right.v, p2.gas);
    return 1.0 - lambda * (pv - pr) / p2.eps;
}

double WeightPair::da1_of_xi(double xi) const {
    const ShockProfile& p1 = waves->wave1;
    if (p1.degenerate()) return 0.0;
    return -lambda / p1.eps * pressure_slope(p1.eval_v(xi), p1.gas) *
           p1.eval_dv(xi);
}

double WeightPair::da2_of_xi(double xi) const {
    const ShockProfile& p2 = waves->wave2;
    if (p2.degenerate()) return 0.0;
    return -lambda / p2.eps * pressure_slope(p2.eval_v(xi), p2.gas) *
           p2.eval_dv(xi);
}

}  // namespace shocklab
