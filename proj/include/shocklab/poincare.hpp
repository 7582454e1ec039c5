#pragma once

#include <cstdint>
#include <vector>

#include "shocklab/functionals.hpp"

namespace shocklab {

// Trial profile W(y) = c0 + sum_k [ cs_k cos(k pi y) + ss_k sin(k pi y) ]
// on [0,1], with closed-form derivative.
struct TestProfileW {
    double c0 = 0.0;
    std::vector<double> cs, ss;  // cosine / sine coefficients

    double eval(double y) const;
    double deriv(double y) const;
    double l2sq(int quad_n) const;  // midpoint quadrature of W^2
    void scale(double s);
};

// LHS of the weighted nonlinear Poincare inequality:
//   -(1/delta) (I2 + 2 I1)^2 + (1+delta) I2 + (2/3) I3 + delta I3abs
//     - (1-delta) Id,
// with I1 = \int W, I2 = \int W^2, I3 = \int W^3, I3abs = \int |W|^3,
// Id = \int y(1-y) |W'|^2, all over (0,1). Expected <= 0 for small delta
// whenever I2 <= C1. Midpoint quadrature with quad_n nodes (endpoints never
// sampled).
double winst_lhs(const TestProfileW& W, double delta, int quad_n);

struct SamplerConfig {
    int n_modes = 8;        // Fourier modes per trig family
    int quad_n = 512;       // quadrature resolution
    int polish_iters = 50;  // ascent iterations on the best candidate
    double polish_step = 0.05;
};

struct ViolationSearchResult {
    double max_lhs = 0.0;      // largest LHS found (violation if > 0)
    double worst_margin = 0.0; // = max_lhs
    int n_violations = 0;      // samples with LHS > 0
    TestProfileW argmax;
    std::uint64_t seed = 0;
};

// Random search under the constraint \int W^2 <= C1 plus a finite-difference
// ascent polish of the best candidate. A positive max_lhs is reported
// honestly; the inequality only claims small delta.
ViolationSearchResult search_violations(const SamplerConfig& cfg, double delta,
                                        double C1, int n_samples,
                                        std::uint64_t seed);

// Assembled sharp-estimate margin for one wave family; expected <= 0 in the
// small-Y regime (reported, not asserted).
double rdelta_margin(const LocalizedFunctionals& lf, double eps, double lambda,
                     double delta);

}  // namespace shocklab
