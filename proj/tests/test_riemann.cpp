#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "shocklab/riemann.hpp"

using namespace shocklab;

namespace {
GasModel gas(double gamma, double alpha) {
    GasModel g;
    g.gamma = gamma;
    g.alpha = alpha;
    g.b = gamma;
    return g;
}
}  // namespace

TEST_CASE("shallow-water fan satisfies Rankine-Hugoniot exactly") {
    const GasModel g = gas(2.0, 1.0);
    const WaveFan fan = build_fan({1.0, 0.0}, 0.1, 0.1, g);
    CHECK(rh_residuals(fan).max_abs() < 1e-12);
    CHECK(fan.left.v > fan.middle.v);
    CHECK(fan.left.u > fan.middle.u);
    CHECK(fan.middle.v < fan.right.v);
    CHECK(fan.middle.u > fan.right.u);
    CHECK(fan.sigma1 < 0.0);
    CHECK(fan.sigma2 > 0.0);
}

TEST_CASE("degenerate fan collapses to the characteristic speeds") {
    const GasModel g = gas(2.0, 1.0);
    const WaveFan fan = build_fan({1.0, 0.0}, 0.0, 0.0, g);
    CHECK(fan.middle.v == 1.0);
    CHECK(fan.right.v == 1.0);
    const double c = std::sqrt(-pressure_slope(1.0, g));
    CHECK(fan.sigma1 == doctest::Approx(-c));
    CHECK(fan.sigma2 == doctest::Approx(c));
}

TEST_CASE("random fans: residuals, Lax ordering, idempotent strengths") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double gamma : {1.4, 2.0, 3.0}) {
        const GasModel g = gas(gamma, gamma > 2.0 ? gamma - 1.0 : 1.0);
        for (int i = 0; i < 300; ++i) {
            const double e1 = 0.3 * unif(rng), e2 = 0.3 * unif(rng);
            const WaveFan fan = build_fan({1.0, 0.0}, e1, e2, g);
            CHECK(rh_residuals(fan).max_abs() < 1e-10);
            CHECK(fan.left.v >= fan.middle.v);
            CHECK(fan.left.u >= fan.middle.u);
            CHECK(fan.middle.v <= fan.right.v);
            CHECK(fan.middle.u >= fan.right.u);
            // strengths recovered from the built states
            const double r1 =
                std::abs(pressure(fan.left.v, g) - pressure(fan.middle.v, g));
            const double r2 =
                std::abs(pressure(fan.middle.v, g) - pressure(fan.right.v, g));
            CHECK(std::abs(r1 - e1) <= 1e-12 * (1.0 + e1));
            CHECK(std::abs(r2 - e2) <= 1e-12 * (1.0 + e2));
            // speeds approach the characteristic speeds as eps -> 0
            const double c_l = std::sqrt(-pressure_slope(fan.left.v, g));
            const double c_m = std::sqrt(-pressure_slope(fan.middle.v, g));
            CHECK(std::abs(fan.sigma1 + c_l) <= 2.0 * e1);
            CHECK(std::abs(fan.sigma2 - c_m) <= 2.0 * e2);
        }
    }
}

TEST_CASE("strength beyond vacuum rejected") {
    const GasModel g = gas(2.0, 1.0);
    // p(vm) = 1 - eps2 must stay positive when stepping down from vm
    CHECK_THROWS_AS(build_fan({1.0, 0.0}, 0.0, 1.5, g), std::domain_error);
    CHECK_THROWS_AS(build_fan({1.0, 0.0}, -0.1, 0.1, g), std::domain_error);
}

TEST_CASE("fan evaluation with shifts") {
    const GasModel g = gas(2.0, 1.0);
    const WaveFan fan = build_fan({1.0, 0.0}, 0.1, 0.1, g);
    // t = 0: U- for x <= 0, U+ for x > 0 (left-closed intervals)
    CHECK(eval_fan(fan, 0.0, -1e-12, 0, 0).v == fan.left.v);
    CHECK(eval_fan(fan, 0.0, 0.0, 0, 0).v == fan.left.v);
    CHECK(eval_fan(fan, 0.0, 1e-12, 0, 0).v == fan.right.v);
    // t = 1, x = 0 lies between the shocks
    CHECK(eval_fan(fan, 1.0, 0.0, 0, 0).v == fan.middle.v);
    // shifted fan: middle region is [sigma1/2, sigma2/2] at t = 1
    const double X1 = -fan.sigma1 / 2.0, X2 = -fan.sigma2 / 2.0;
    CHECK(eval_fan(fan, 1.0, fan.sigma1 / 2.0 - 1e-9, X1, X2).v == fan.left.v);
    CHECK(eval_fan(fan, 1.0, fan.sigma1 / 2.0 + 1e-9, X1, X2).v == fan.middle.v);
    CHECK(eval_fan(fan, 1.0, fan.sigma2 / 2.0 - 1e-9, X1, X2).v == fan.middle.v);
    CHECK(eval_fan(fan, 1.0, fan.sigma2 / 2.0 + 1e-9, X1, X2).v == fan.right.v);
    // crossed discontinuities
    CHECK_THROWS_AS(eval_fan(fan, 1.0, 0.0, 10.0, -10.0), NumericalError);
}

TEST_CASE("fan distance: self distance and bump oracle") {
    const GasModel g = gas(2.0, 1.0);
    const WaveFan fan = build_fan({1.0, 0.0}, 0.1, 0.1, g);
    const int n = 4000;
    std::vector<double> xs(n + 1), v(n + 1), h(n + 1);
    const double L = 20.0, dx = 2.0 * L / n;
    for (int j = 0; j <= n; ++j) {
        xs[j] = -L + j * dx;
        const State s = eval_fan(fan, 1.0, xs[j], 0, 0);
        v[j] = s.v;
        h[j] = s.u;
    }
    const FanDistance self = fan_distance(xs, v, h, fan, 1.0, 0, 0);
    CHECK(self.l1_v == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(self.l2_h == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(self.rel_entropy == doctest::Approx(0.0).epsilon(1e-12));

    // bump of height 0.1, width 1 in the middle region; L1 mass is analytic:
    // \int 0.1 exp(-x^2) dx = 0.1 sqrt(pi)
    for (int j = 0; j <= n; ++j) v[j] += 0.1 * std::exp(-xs[j] * xs[j]);
    const FanDistance d = fan_distance(xs, v, h, fan, 1.0, 0, 0);
    CHECK(d.l1_v == doctest::Approx(0.1 * std::sqrt(M_PI)).epsilon(1e-6));
    CHECK(d.l2_h == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.rel_entropy > 0.0);

    // refinement: distance stable to O(dx)
    const int n2 = 2 * n;
    std::vector<double> xs2(n2 + 1), v2(n2 + 1), h2(n2 + 1);
    const double dx2 = 2.0 * L / n2;
    for (int j = 0; j <= n2; ++j) {
        xs2[j] = -L + j * dx2;
        const State s = eval_fan(fan, 1.0, xs2[j], 0, 0);
        v2[j] = s.v + 0.1 * std::exp(-xs2[j] * xs2[j]);
        h2[j] = s.u;
    }
    const FanDistance d2 = fan_distance(xs2, v2, h2, fan, 1.0, 0, 0);
    CHECK(std::abs(d2.l1_v - d.l1_v) < 10.0 * dx);
}

TEST_CASE("fan JSON round trip recomputes derived quantities") {
    const GasModel g = gas(2.0, 1.0);
    const WaveFan fan = build_fan({1.1, 0.2}, 0.12, 0.07, g);
    const WaveFan back = fan_from_json(fan_to_json(fan));
    CHECK(back.left.v == doctest::Approx(fan.left.v).epsilon(1e-15));
    CHECK(back.left.u == doctest::Approx(fan.left.u).epsilon(1e-15));
    CHECK(back.middle.v == doctest::Approx(fan.middle.v).epsilon(1e-14));
    CHECK(back.sigma1 == doctest::Approx(fan.sigma1).epsilon(1e-14));
    CHECK(back.sigma2 == doctest::Approx(fan.sigma2).epsilon(1e-14));
}
