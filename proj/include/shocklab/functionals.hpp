#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shocklab/solver.hpp"
#include "shocklab/weights.hpp"

namespace shocklab {

// Wave, weight, and interaction-error samples on the solver grid at a fixed
// (t, X1, X2); shared by all functional evaluations at that instant.
struct WaveFrame {
    const GasModel* gas = nullptr;
    double t = 0.0, X1 = 0.0, X2 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double dx = 0.0;
    // per-node arrays (size n+1)
    std::vector<double> vt1, vt2, vt;      // wave volumes and composite
    std::vector<double> ht1, ht2, ht;      // BD velocities
    std::vector<double> dvt1, dvt2;        // profile dv/dxi
    std::vector<double> d2vt1, d2vt2;      // profile d^2v/dxi^2
    std::vector<double> dht1, dht2;        // profile dh/dxi
    std::vector<double> a1, a2, a;         // weights
    std::vector<double> da1, da2;          // weight derivatives
    std::vector<double> pt, pt1, pt2;      // p(vt), p(vt1), p(vt2)
    std::vector<double> dpt;               // d/dx p(vt) (closed form)
    std::vector<double> vtbeta;            // vt^beta
    std::vector<double> e1, e2;            // interaction errors E1, E2
};

WaveFrame build_frame(const Grid& grid, const CompositeWave& waves,
                      const WeightPair& weights, double t, double X1,
                      double X2);

// All functional values of the weighted relative-entropy budget at one
// instant. B/G term names follow the per-wave decomposition of the budget.
struct EntropyReport {
    double t = 0.0;
    double y1 = 0.0, y2 = 0.0;
    double j_bad = 0.0, j_good = 0.0;
    // bad terms, per family where indexed
    double b1[2] = {0, 0};
    double b2m[2] = {0, 0};  // h-coupled part outside the truncation region
    double b2p[2] = {0, 0};  // completed-square pressure part inside
    double b3[2] = {0, 0};
    double b4[2] = {0, 0};
    double b5 = 0.0;
    double b6 = 0.0;
    // good terms
    double g1m[2] = {0, 0};
    double g1p[2] = {0, 0};
    double g2[2] = {0, 0};
    double d = 0.0;
    double a_eta = 0.0;  // \int a eta(U|Utilde) dx
    double e1_l1 = 0.0, e2_l1 = 0.0;
    // wave-interaction magnitudes \int |dv1||vt-vt1| dx and \int |dv1||dv2| dx
    double inter1 = 0.0, inter2 = 0.0;
    // shift data filled by the driver
    double dX1 = 0.0, dX2 = 0.0;
    int branch1 = 0, branch2 = 0;
    // sharp-estimate margins per family, filled at report cadence
    double rdelta1 = 0.0, rdelta2 = 0.0;

    double b_delta() const;
    double g_delta() const;
    // relative mismatch of (j_bad - j_good) against (b_delta - g_delta)
    double identity_residual() const;
    bool goods_nonnegative() const;
};

// Y_i = -\int (a_i)_x eta(U|Utilde) dx
//       + \int a (Utilde_i)_x . Hess(eta)(Utilde) (U - Utilde) dx
std::pair<double, double> compute_Y(const Field& f, const WaveFrame& w);

// Every budget term by trapezoid / face quadrature; asserts the
// decomposition identity and the sign structure of the good terms.
EntropyReport compute_budget(const Field& f, const WaveFrame& w, double delta1);

// \int a eta(U|Utilde) dx alone (cheap per-step monitor quantity).
double weighted_rel_entropy(const Field& f, const WaveFrame& w);

struct TruncatedField {
    double delta1 = 0.0;
    std::vector<double> bar_v;        // two-sided truncation
    std::vector<double> bar_v_small;  // one-sided, clamps p(v)-p(vt) above
    std::vector<double> bar_v_big;    // one-sided, clamps from below
    std::vector<std::uint8_t> omega;  // 1 where p(v)-p(vt) <= delta1
};

TruncatedField truncate(const Field& f, const WaveFrame& w, double delta1);

// Complementary piecewise-linear partition moving with the half-shifted wave
// positions m_i = (X_i + sigma_i t)/2.
struct PartitionPhi {
    double m1 = 0.0, m2 = 0.0;
    double phi1(double x) const;
    double phi2(double x) const { return 1.0 - phi1(x); }
    double slope() const;  // |d/dx phi_i| on the transition zone
};

PartitionPhi partition_phi(double t, const ShiftState& s, const WaveFan& fan);

// Localized single-wave functionals evaluated on a (typically truncated)
// volume field; used by the sharp-estimate monitor.
struct LocalizedFunctionals {
    double yg = 0.0;  // weighted linear+quadratic v-part
    double i1 = 0.0;  // relative-pressure term
    double i2 = 0.0;  // completed-square pressure term
    double g2 = 0.0;  // cubic expansion of the relative entropy
    double d = 0.0;   // localized diffusion
};

LocalizedFunctionals localized_functionals(const std::vector<double>& vol,
                                           const Field& f, const WaveFrame& w,
                                           const PartitionPhi& phi,
                                           int family);

// Per-step contraction bookkeeping: discrete budget residual, accumulated
// good terms, fitted stability constant, and invariant verdicts.
struct ContractionMonitor {
    bool have_prev = false;
    double t_prev = 0.0, s_prev = 0.0, rhs_prev = 0.0, goods_prev = 0.0;
    double s0 = 0.0;
    double goods_accum = 0.0;
    double max_abs_residual = 0.0;
    double sum_abs_residual = 0.0;
    int n_residuals = 0;
    double fitted_C = 0.0;
    bool identity_ok = true;
    bool goods_ok = true;

    // Called once per accepted step with the report evaluated at the
    // pre-step state and the post-step weighted entropy.
    void record(const EntropyReport& pre, double aeta_post, double dt);
    double mean_abs_residual() const {
        return n_residuals ? sum_abs_residual / n_residuals : 0.0;
    }
};

}  // namespace shocklab
