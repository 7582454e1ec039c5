#include "shocklab/poincare.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace shocklab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double TestProfileW::eval(double y) const {
    double s = c0;
    for (std::size_t k = 0; k < cs.size(); ++k)
        s += cs[k] * std::cos((k + 1) * kPi * y);
    for (std::size_t k = 0; k < ss.size(); ++k)
        s += ss[k] * std::sin((k + 1) * kPi * y);
    return s;
}

double TestProfileW::deriv(double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < cs.size(); ++k)
        s -= cs[k] * (k + 1) * kPi * std::sin((k + 1) * kPi * y);
    for (std::size_t k = 0; k < ss.size(); ++k)
        s += ss[k] * (k + 1) * kPi * std::cos((k + 1) * kPi * y);
    return s;
}

double TestProfileW::l2sq(int quad_n) const {
    double s = 0.0;
    const double hstep = 1.0 / quad_n;
    for (int i = 0; i < quad_n; ++i) {
        const double y = (i + 0.5) * hstep;
        const double wv = eval(y);
        s += wv * wv;
    }
    return s * hstep;
}

void TestProfileW::scale(double s) {
    c0 *= s;
    for (auto& c : cs) c *= s;
    for (auto& c : ss) c *= s;
}

double winst_lhs(const TestProfileW& W, double delta, int quad_n) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("winst_lhs: delta must lie in (0,1)");
    if (quad_n < 8) throw std::invalid_argument("winst_lhs: quad_n too small");
    double i1 = 0.0, i2 = 0.0, i3 = 0.0, i3abs = 0.0, id = 0.0;
    const double hstep = 1.0 / quad_n;
    for (int i = 0; i < quad_n; ++i) {
        const double y = (i + 0.5) * hstep;
        const double wv = W.eval(y);
        const double dv = W.deriv(y);
        i1 += wv;
        i2 += wv * wv;
        i3 += wv * wv * wv;
        i3abs += std::abs(wv * wv * wv);
        id += y * (1.0 - y) * dv * dv;
    }
    i1 *= hstep;
    i2 *= hstep;
    i3 *= hstep;
    i3abs *= hstep;
    id *= hstep;
    const double q = i2 + 2.0 * i1;
    return -q * q / delta + (1.0 + delta) * i2 + (2.0 / 3.0) * i3 +
           delta * i3abs - (1.0 - delta) * id;
}

namespace {

TestProfileW random_profile(std::mt19937_64& rng, const SamplerConfig& cfg,
                            double C1, int quad_n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TestProfileW W;
    W.c0 = gauss(rng);
    W.cs.resize(cfg.n_modes);
    W.ss.resize(cfg.n_modes);
    for (int k = 0; k < cfg.n_modes; ++k) {
        // Spectral decay keeps the derivative term from dominating everything.
        const double damp = 1.0 / (1.0 + k);
        W.cs[k] = gauss(rng) * damp;
        W.ss[k] = gauss(rng) * damp;
    }
    // Random mass in (0, C1].
    const double target = unif(rng) * C1;
    const double norm = W.l2sq(quad_n);
    if (norm > 0.0) W.scale(std::sqrt(target / norm));
    return W;
}

void project_to_ball(TestProfileW& W, double C1, int quad_n) {
    const double norm = W.l2sq(quad_n);
    if (norm > C1) W.scale(std::sqrt(C1 / norm));
}

}  // namespace

ViolationSearchResult search_violations(const SamplerConfig& cfg, double delta,
                                        double C1, int n_samples,
                                        std::uint64_t seed) {
    if (n_samples < 1)
        throw std::invalid_argument("search_violations: n_samples must be >= 1");
    std::mt19937_64 rng(seed);
    ViolationSearchResult res;
    res.seed = seed;
    res.max_lhs = -std::numeric_limits<double>::infinity();

    auto consider = [&](const TestProfileW& W) {
        const double lhs = winst_lhs(W, delta, cfg.quad_n);
        if (lhs > 0.0) ++res.n_violations;
        if (lhs > res.max_lhs) {
            res.max_lhs = lhs;
            res.argmax = W;
        }
    };
    for (int s = 0; s < n_samples; ++s)
        consider(random_profile(rng, cfg, C1, cfg.quad_n));
    // Deterministic probes along the constant family, which sits on the
    // critical manifold of the quadratic term (the degenerate W ~ 0 equality
    // case is skipped).
    for (double c = -2.4; c <= -0.399; c += 0.2) {
        TestProfileW W;
        W.c0 = c;
        W.cs.assign(cfg.n_modes, 0.0);
        W.ss.assign(cfg.n_modes, 0.0);
        if (W.l2sq(cfg.quad_n) <= C1) consider(W);
    }

    // Finite-difference ascent polish of the best candidate; a falsifier,
    // not an optimizer with guarantees.
    TestProfileW best = res.argmax;
    double best_lhs = res.max_lhs;
    double stepsz = cfg.polish_step;
    auto coords = [&](TestProfileW& W) {
        std::vector<double*> ptrs{&W.c0};
        for (auto& c : W.cs) ptrs.push_back(&c);
        for (auto& c : W.ss) ptrs.push_back(&c);
        return ptrs;
    };
    for (int it = 0; it < cfg.polish_iters; ++it) {
        TestProfileW trial = best;
        auto ptrs = coords(trial);
        const double fd = 1e-6;
        std::vector<double> grad(ptrs.size());
        for (std::size_t i = 0; i < ptrs.size(); ++i) {
            const double keep = *ptrs[i];
            *ptrs[i] = keep + fd;
            const double up = winst_lhs(trial, delta, cfg.quad_n);
            *ptrs[i] = keep;
            grad[i] = (up - best_lhs) / fd;
        }
        double gnorm = 0.0;
        for (double gv : grad) gnorm += gv * gv;
        gnorm = std::sqrt(gnorm);
        if (gnorm < 1e-12) break;
        TestProfileW cand = best;
        auto cptrs = coords(cand);
        for (std::size_t i = 0; i < cptrs.size(); ++i)
            *cptrs[i] += stepsz * grad[i] / gnorm;
        project_to_ball(cand, C1, cfg.quad_n);
        const double lhs = winst_lhs(cand, delta, cfg.quad_n);
        if (lhs > best_lhs) {
            best = cand;
            best_lhs = lhs;
        } else {
            stepsz *= 0.5;
            if (stepsz < 1e-10) break;
        }
    }
    if (best_lhs > res.max_lhs) {
        res.max_lhs = best_lhs;
        res.argmax = best;
        if (best_lhs > 0.0) ++res.n_violations;
    }
    res.worst_margin = res.max_lhs;
    return res;
}

double rdelta_margin(const LocalizedFunctionals& lf, double eps, double lambda,
                     double delta) {
    if (!(eps > 0.0) || !(lambda > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("rdelta_margin: parameters must be > 0");
    const double r = eps / lambda;
    return -lf.yg * lf.yg / (eps * delta) + lf.i1 + delta * std::abs(lf.i1) +
           lf.i2 + delta * r * std::abs(lf.i2) -
           (1.0 - delta * r) * lf.g2 - (1.0 - delta) * lf.d;
}

}  // namespace shocklab
