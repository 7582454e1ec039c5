#include "shocklab/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace shocklab {

WaveFrame build_frame(const Grid& grid, const CompositeWave& waves,
                      const WeightPair& weights, double t, double X1,
                      double X2) {
    const GasModel& g = waves.wave1.gas;
    const std::size_t m = static_cast<std::size_t>(grid.n) + 1;
    WaveFrame w;
    w.gas = &waves.wave1.gas;
    w.t = t;
    w.X1 = X1;
    w.X2 = X2;
    w.sigma1 = waves.fan.sigma1;
    w.sigma2 = waves.fan.sigma2;
    w.dx = grid.dx();
    for (auto* arr :
         {&w.vt1, &w.vt2, &w.vt, &w.ht1, &w.ht2, &w.ht, &w.dvt1, &w.dvt2,
          &w.d2vt1, &w.d2vt2, &w.dht1, &w.dht2, &w.a1, &w.a2, &w.a, &w.da1,
          &w.da2, &w.pt, &w.pt1, &w.pt2, &w.dpt, &w.vtbeta, &w.e1, &w.e2})
        arr->resize(m);

    const ShockProfile& p1 = waves.wave1;
    const ShockProfile& p2 = waves.wave2;
    const double beta = g.beta();

    for (std::size_t j = 0; j < m; ++j) {
        const double x = grid.x(static_cast<int>(j));
        const double xi1 = x - w.sigma1 * t - X1;
        const double xi2 = x - w.sigma2 * t - X2;
        const double v1 = p1.eval_v(xi1);
        const double v2 = p2.eval_v(xi2);
        const double vc = v1 + v2 - waves.middle.v;
        w.vt1[j] = v1;
        w.vt2[j] = v2;
        w.vt[j] = vc;
        w.ht1[j] = p1.eval_h(xi1);
        w.ht2[j] = p2.eval_h(xi2);
        w.ht[j] = w.ht1[j] + w.ht2[j] - waves.middle.u;
        w.dvt1[j] = p1.eval_dv(xi1);
        w.dvt2[j] = p2.eval_dv(xi2);
        w.d2vt1[j] = p1.eval_d2v(xi1);
        w.d2vt2[j] = p2.eval_d2v(xi2);
        w.dht1[j] = p1.eval_dh(xi1);
        w.dht2[j] = p2.eval_dh(xi2);
        w.a1[j] = weights.a1_of_xi(xi1);
        w.a2[j] = weights.a2_of_xi(xi2);
        w.a[j] = w.a1[j] + w.a2[j] - 1.0;
        w.da1[j] = weights.da1_of_xi(xi1);
        w.da2[j] = weights.da2_of_xi(xi2);
        w.pt[j] = pressure(vc, g);
        w.pt1[j] = pressure(v1, g);
        w.pt2[j] = pressure(v2, g);
        const double dpc = pressure_slope(vc, g);
        const double dv_sum = w.dvt1[j] + w.dvt2[j];
        w.dpt[j] = dpc * dv_sum;
        w.vtbeta[j] = pow_beta(vc, beta);

        // E2 = p(vt)_x - p(vt1)_x - p(vt2)_x
        w.e2[j] = (dpc - pressure_slope(v1, g)) * w.dvt1[j] +
                  (dpc - pressure_slope(v2, g)) * w.dvt2[j];

        // E1 = (vt^b p(vt)_x)_x - sum_i (vti^b p(vti)_x)_x with
        // (v^b p(v)_x)_x = (b v^(b-1) p' + v^b p'')(v_x)^2 + v^b p' v_xx.
        auto diff_div = [&](double vv, double dv, double d2v) {
            const double pb = std::pow(vv, beta);
            return (beta * std::pow(vv, beta - 1.0) * pressure_slope(vv, g) +
                    pb * pressure_curv(vv, g)) *
                       dv * dv +
                   pb * pressure_slope(vv, g) * d2v;
        };
        w.e1[j] = diff_div(vc, dv_sum, w.d2vt1[j] + w.d2vt2[j]) -
                  diff_div(v1, w.dvt1[j], w.d2vt1[j]) -
                  diff_div(v2, w.dvt2[j], w.d2vt2[j]);
    }
    return w;
}

namespace {

struct Trapezoid {
    double dx;
    std::size_t m;
    double acc = 0.0;
    void add(std::size_t j, double val) {
        const double wt = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        acc += wt * val;
    }
    double value() const { return acc * dx; }
};

}  // namespace

std::pair<double, double> compute_Y(const Field& f, const WaveFrame& w) {
    const GasModel& g = *w.gas;
    const std::size_t m = f.v.size();
    Trapezoid y1{w.dx, m}, y2{w.dx, m};
    for (std::size_t j = 0; j < m; ++j) {
        const double H = f.h[j] - w.ht[j];
        const double eta = 0.5 * H * H + rel_Q(f.v[j], w.vt[j], g);
        const double dpc = pressure_slope(w.vt[j], g);
        const double dvq = f.v[j] - w.vt[j];
        y1.add(j, -w.da1[j] * eta +
                      w.a[j] * (-w.dvt1[j] * dpc * dvq + w.dht1[j] * H));
        y2.add(j, -w.da2[j] * eta +
                      w.a[j] * (-w.dvt2[j] * dpc * dvq + w.dht2[j] * H));
    }
    return {y1.value(), y2.value()};
}

double weighted_rel_entropy(const Field& f, const WaveFrame& w) {
    const GasModel& g = *w.gas;
    const std::size_t m = f.v.size();
    Trapezoid s{w.dx, m};
    for (std::size_t j = 0; j < m; ++j) {
        const double H = f.h[j] - w.ht[j];
        s.add(j, w.a[j] * (0.5 * H * H + rel_Q(f.v[j], w.vt[j], g)));
    }
    return s.value();
}

double EntropyReport::b_delta() const {
    double s = b5 + b6;
    for (int i = 0; i < 2; ++i) s += b1[i] + b2m[i] + b2p[i] + b3[i] + b4[i];
    return s;
}

double EntropyReport::g_delta() const {
    double s = d;
    for (int i = 0; i < 2; ++i) s += g1m[i] + g1p[i] + g2[i];
    return s;
}

double EntropyReport::identity_residual() const {
    const double lhs = j_bad - j_good;
    const double rhs = b_delta() - g_delta();
    double scale = std::abs(j_bad) + std::abs(j_good) + std::abs(b_delta()) +
                   std::abs(g_delta());
    return std::abs(lhs - rhs) / std::max(scale, 1e-30);
}

bool EntropyReport::goods_nonnegative() const {
    for (int i = 0; i < 2; ++i)
        if (g1m[i] < 0.0 || g1p[i] < 0.0 || g2[i] < 0.0) return false;
    return d >= 0.0;
}

EntropyReport compute_budget(const Field& f, const WaveFrame& w,
                             double delta1) {
    if (!(delta1 > 0.0))
        throw std::invalid_argument("compute_budget: delta1 must be > 0");
    const GasModel& g = *w.gas;
    const std::size_t m = f.v.size();
    const double beta = g.beta();
    const double s1 = w.sigma1, s2 = w.sigma2;

    EntropyReport r;
    r.t = w.t;

    // Node arrays for the field side.
    std::vector<double> P(m), H(m), vbeta(m);
    for (std::size_t j = 0; j < m; ++j) {
        P[j] = pressure(f.v[j], g) - w.pt[j];
        H[j] = f.h[j] - w.ht[j];
        vbeta[j] = pow_beta(f.v[j], beta);
    }

    Trapezoid b11{w.dx, m}, b12{w.dx, m}, t11{w.dx, m}, t12{w.dx, m},
        b2m1{w.dx, m}, b2m2{w.dx, m}, b2p1{w.dx, m}, b2p2{w.dx, m},
        b6a{w.dx, m}, b6b{w.dx, m}, g1m1{w.dx, m}, g1m2{w.dx, m},
        g1p1{w.dx, m}, g1p2{w.dx, m}, gh1{w.dx, m}, gh2{w.dx, m},
        g21{w.dx, m}, g22{w.dx, m}, aeta{w.dx, m}, e1n{w.dx, m}, e2n{w.dx, m},
        in1{w.dx, m}, in2{w.dx, m}, y1{w.dx, m}, y2{w.dx, m};

    for (std::size_t j = 0; j < m; ++j) {
        const double dpc = pressure_slope(w.vt[j], g);
        const double relp_c = P[j] - dpc * (f.v[j] - w.vt[j]);
        const double relq_c = rel_Q(f.v[j], w.vt[j], g);
        const bool in_omega = P[j] <= delta1;

        const double eta = 0.5 * H[j] * H[j] + relq_c;
        const double dvq = f.v[j] - w.vt[j];
        y1.add(j, -w.da1[j] * eta +
                      w.a[j] * (-w.dvt1[j] * dpc * dvq + w.dht1[j] * H[j]));
        y2.add(j, -w.da2[j] * eta +
                      w.a[j] * (-w.dvt2[j] * dpc * dvq + w.dht2[j] * H[j]));

        b11.add(j, w.a[j] * w.dvt1[j] * relp_c);
        b12.add(j, w.a[j] * w.dvt2[j] * relp_c);
        t11.add(j, w.da1[j] * P[j] * H[j]);
        t12.add(j, w.da2[j] * P[j] * H[j]);
        if (in_omega) {
            b2p1.add(j, w.da1[j] * P[j] * P[j]);
            b2p2.add(j, w.da2[j] * P[j] * P[j]);
            const double c1 = H[j] - P[j] / s1;
            const double c2 = H[j] - P[j] / s2;
            g1p1.add(j, w.da1[j] * c1 * c1);
            g1p2.add(j, w.da2[j] * c2 * c2);
        } else {
            b2m1.add(j, w.da1[j] * P[j] * H[j]);
            b2m2.add(j, w.da2[j] * P[j] * H[j]);
            g1m1.add(j, w.da1[j] * H[j] * H[j]);
            g1m2.add(j, w.da2[j] * H[j] * H[j]);
        }
        gh1.add(j, w.da1[j] * H[j] * H[j]);
        gh2.add(j, w.da2[j] * H[j] * H[j]);
        g21.add(j, w.da1[j] * relq_c);
        g22.add(j, w.da2[j] * relq_c);
        b6a.add(j, w.a[j] * P[j] * w.e1[j]);
        b6b.add(j, w.a[j] * H[j] * w.e2[j]);
        aeta.add(j, w.a[j] * (0.5 * H[j] * H[j] + relq_c));
        e1n.add(j, std::abs(w.e1[j]));
        e2n.add(j, std::abs(w.e2[j]));
        in1.add(j, std::abs(w.dvt1[j]) * std::abs(w.vt[j] - w.vt1[j]));
        in2.add(j, std::abs(w.dvt1[j]) * std::abs(w.dvt2[j]));
    }

    // Face-based quadratures matching the solver's flux stencils, so that the
    // diffusion chain of the budget telescopes discretely.
    double d_acc = 0.0, b31 = 0.0, b32 = 0.0, b41 = 0.0, b42 = 0.0, b5 = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double dPf = (P[j + 1] - P[j]) / w.dx;
        const double da1f = (w.a1[j + 1] - w.a1[j]) / w.dx;
        const double da2f = (w.a2[j + 1] - w.a2[j]) / w.dx;
        const double af = 0.5 * (w.a[j] + w.a[j + 1]);
        const double Pf = 0.5 * (P[j] + P[j + 1]);
        const double vbf = 0.5 * (vbeta[j] + vbeta[j + 1]);
        const double dvbf =
            0.5 * (vbeta[j] - w.vtbeta[j] + vbeta[j + 1] - w.vtbeta[j + 1]);
        const double dptf = 0.5 * (w.dpt[j] + w.dpt[j + 1]);
        d_acc += af * vbf * dPf * dPf;
        b31 -= da1f * vbf * Pf * dPf;
        b32 -= da2f * vbf * Pf * dPf;
        b41 -= da1f * Pf * dvbf * dptf;
        b42 -= da2f * Pf * dvbf * dptf;
        b5 -= af * dPf * dvbf * dptf;
    }

    r.b1[0] = s1 * b11.value();
    r.b1[1] = s2 * b12.value();
    r.b2m[0] = b2m1.value();
    r.b2m[1] = b2m2.value();
    r.b2p[0] = b2p1.value() / (2.0 * s1);
    r.b2p[1] = b2p2.value() / (2.0 * s2);
    r.b3[0] = b31 * w.dx;
    r.b3[1] = b32 * w.dx;
    r.b4[0] = b41 * w.dx;
    r.b4[1] = b42 * w.dx;
    r.b5 = b5 * w.dx;
    r.b6 = b6a.value() - b6b.value();
    r.g1m[0] = 0.5 * s1 * g1m1.value();
    r.g1m[1] = 0.5 * s2 * g1m2.value();
    r.g1p[0] = 0.5 * s1 * g1p1.value();
    r.g1p[1] = 0.5 * s2 * g1p2.value();
    r.g2[0] = s1 * g21.value();
    r.g2[1] = s2 * g22.value();
    r.d = d_acc * w.dx;
    r.y1 = y1.value();
    r.y2 = y2.value();
    r.a_eta = aeta.value();
    r.e1_l1 = e1n.value();
    r.e2_l1 = e2n.value();
    r.inter1 = in1.value();
    r.inter2 = in2.value();

    // J^bad uses the unsplit h-coupled term; J^good the unsplit square.
    r.j_bad = t11.value() + t12.value() + r.b1[0] + r.b1[1] + r.b3[0] +
              r.b3[1] + r.b4[0] + r.b4[1] + r.b5 + r.b6;
    r.j_good = 0.5 * s1 * gh1.value() + 0.5 * s2 * gh2.value() + r.g2[0] +
               r.g2[1] + r.d;

    if (r.identity_residual() > 1e-10)
        throw NumericalError("compute_budget: decomposition identity violated");
    if (!r.goods_nonnegative())
        throw NumericalError("compute_budget: negative good term");
    return r;
}

TruncatedField truncate(const Field& f, const WaveFrame& w, double delta1) {
    if (!(delta1 > 0.0))
        throw std::invalid_argument("truncate: delta1 must be > 0");
    const GasModel& g = *w.gas;
    const std::size_t m = f.v.size();
    TruncatedField tf;
    tf.delta1 = delta1;
    tf.bar_v.resize(m);
    tf.bar_v_small.resize(m);
    tf.bar_v_big.resize(m);
    tf.omega.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double y = pressure(f.v[j], g) - w.pt[j];
        const double two_sided = std::min(delta1, std::max(-delta1, y));
        const double one_small = std::min(delta1, y);
        const double one_big = std::max(-delta1, y);
        tf.bar_v[j] = (two_sided == y)
                          ? f.v[j]
                          : pressure_inverse(w.pt[j] + two_sided, g);
        tf.bar_v_small[j] = (one_small == y)
                                ? f.v[j]
                                : pressure_inverse(w.pt[j] + one_small, g);
        tf.bar_v_big[j] = (one_big == y)
                              ? f.v[j]
                              : pressure_inverse(w.pt[j] + one_big, g);
        tf.omega[j] = y <= delta1 ? 1 : 0;
    }
    return tf;
}

double PartitionPhi::phi1(double x) const {
    if (x <= m1) return 1.0;
    if (x >= m2) return 0.0;
    return (m2 - x) / (m2 - m1);
}

double PartitionPhi::slope() const {
    return m2 > m1 ? 1.0 / (m2 - m1) : 0.0;
}

PartitionPhi partition_phi(double t, const ShiftState& s, const WaveFan& fan) {
    PartitionPhi p;
    p.m1 = 0.5 * (s.X1 + fan.sigma1 * t);
    p.m2 = 0.5 * (s.X2 + fan.sigma2 * t);
    if (p.m1 > p.m2)
        throw NumericalError("partition_phi: crossed midpoints");
    return p;
}

LocalizedFunctionals localized_functionals(const std::vector<double>& vol,
                                           const Field& f, const WaveFrame& w,
                                           const PartitionPhi& phi,
                                           int family) {
    if (family != 1 && family != 2)
        throw std::invalid_argument("localized_functionals: family must be 1|2");
    const GasModel& g = *w.gas;
    const std::size_t m = vol.size();
    const double sigma = family == 1 ? w.sigma1 : w.sigma2;
    const auto& vti = family == 1 ? w.vt1 : w.vt2;
    const auto& pti = family == 1 ? w.pt1 : w.pt2;
    const auto& dvti = family == 1 ? w.dvt1 : w.dvt2;
    const auto& dhti = family == 1 ? w.dht1 : w.dht2;
    const auto& dai = family == 1 ? w.da1 : w.da2;
    const double expo1 = -1.0 / g.gamma - 1.0;
    const double expo2 = -1.0 / g.gamma - 2.0;
    const double cg2a = 1.0 / (2.0 * g.gamma);
    const double cg2b = (1.0 + g.gamma) / (3.0 * g.gamma * g.gamma);

    Trapezoid yg{w.dx, m}, i1{w.dx, m}, i2{w.dx, m}, g2{w.dx, m};
    std::vector<double> phiP(m), vbeta(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double x = f.grid.x(static_cast<int>(j));
        const double ph = family == 1 ? phi.phi1(x) : phi.phi2(x);
        const double Pi = pressure(vol[j], g) - pti[j];
        phiP[j] = ph * Pi;
        vbeta[j] = pow_beta(vol[j], g.beta());
        const double dpi = pressure_slope(vti[j], g) * dvti[j];
        yg.add(j, -0.5 / (sigma * sigma) * dai[j] * ph * ph * Pi * Pi -
                      dai[j] * ph * ph * rel_Q(vol[j], vti[j], g) -
                      w.a[j] * dpi * ph * (vol[j] - vti[j]) +
                      w.a[j] * dhti[j] * ph * Pi / sigma);
        i1.add(j, w.a[j] * dvti[j] * ph * ph * rel_p(vol[j], vti[j], g));
        i2.add(j, dai[j] * ph * ph * Pi * Pi);
        g2.add(j, dai[j] * (cg2a * std::pow(pti[j], expo1) * ph * ph * Pi * Pi -
                            cg2b * std::pow(pti[j], expo2) * ph * ph * ph * Pi *
                                Pi * Pi));
    }
    double d_acc = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double dq = (phiP[j + 1] - phiP[j]) / w.dx;
        d_acc += 0.5 * (w.a[j] + w.a[j + 1]) * 0.5 * (vbeta[j] + vbeta[j + 1]) *
                 dq * dq;
    }

    LocalizedFunctionals out;
    out.yg = yg.value();
    out.i1 = sigma * i1.value();
    out.i2 = i2.value() / (2.0 * sigma);
    out.g2 = sigma * g2.value();
    out.d = d_acc * w.dx;
    return out;
}

void ContractionMonitor::record(const EntropyReport& pre, double aeta_post,
                                double dt) {
    const double rhs =
        pre.dX1 * pre.y1 + pre.dX2 * pre.y2 + pre.j_bad - pre.j_good;
    const double goods_rate = pre.g2[0] + pre.g2[1] + pre.d;
    if (!have_prev) s0 = pre.a_eta;
    const double residual = (aeta_post - pre.a_eta) / dt - rhs;
    max_abs_residual = std::max(max_abs_residual, std::abs(residual));
    sum_abs_residual += std::abs(residual);
    ++n_residuals;
    goods_accum += dt * goods_rate;
    identity_ok = identity_ok && pre.identity_residual() <= 1e-10;
    goods_ok = goods_ok && pre.goods_nonnegative();
    fitted_C = std::max(fitted_C, (aeta_post + goods_accum) / (s0 + 1.0));
    have_prev = true;
    t_prev = pre.t + dt;
    s_prev = aeta_post;
    rhs_prev = rhs;
    goods_prev = goods_rate;
}

}  // namespace shocklab
