#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "shocklab/gas.hpp"

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

TEST_CASE("pressure closed forms and domain guard") {
    CHECK(pressure(1.0, gas(1.4, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pressure(2.0, gas(2.0, 1.0)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(pressure(0.0, gas(1.4, 1.0)), std::domain_error);
    CHECK_THROWS_AS(pressure(-1.0, gas(1.4, 1.0)), std::domain_error);
}

TEST_CASE("pressure inverse round trip") {
    const GasModel g = gas(2.0, 1.0);
    CHECK(pressure_inverse(1.0, g) == doctest::Approx(1.0));
    CHECK(pressure_inverse(0.25, g) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pressure_inverse(0.0, g), std::domain_error);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double p = unif(rng);
        CHECK(std::abs(pressure(pressure_inverse(p, g), g) - p) <= 1e-13 * p);
    }
}

TEST_CASE("entropy values and finite-difference slope oracle") {
    const GasModel g = gas(2.0, 1.0);
    CHECK(entropy_Q(1.0, g) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(entropy_Q(2.0, g) == doctest::Approx(0.5).epsilon(1e-15));
    // Q'(v) = -p(v), centered differences with step 1e-4.
    const double step = 1e-4;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.4, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double v = unif(rng);
        const double fd = (entropy_Q(v + step, g) - entropy_Q(v - step, g)) / (2 * step);
        CHECK(std::abs(fd + pressure(v, g)) < 1e-6);
    }
    const double fd13 =
        (entropy_Q(1.3 + step, g) - entropy_Q(1.3 - step, g)) / (2 * step);
    CHECK(std::abs(fd13 + pressure(1.3, g)) < 1e-6);
}

TEST_CASE("relative functionals: diagonal, arithmetic, convexity") {
    const GasModel g = gas(2.0, 1.0);
    CHECK(rel_Q(1.7, 1.7, g) == doctest::Approx(0.0).epsilon(1e-16));
    // gamma=2: Q(2|1) = Q(2) - Q(1) + p(1)(2-1) = 0.5 - 1 + 1 = 0.5
    CHECK(rel_Q(2.0, 1.0, g) == doctest::Approx(0.5).epsilon(1e-14));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double v = unif(rng), w = unif(rng);
        CHECK(rel_Q(v, w, g) >= 0.0);
        CHECK(rel_p(v, w, g) >= 0.0);
        CHECK(relative_fn(RelativeFn::Q, v, w, g) == rel_Q(v, w, g));
        CHECK(relative_fn(RelativeFn::P, v, w, g) == rel_p(v, w, g));
    }
}

TEST_CASE("triple identity holds to 1e-12") {
    const GasModel g = gas(1.4, 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double u = unif(rng), v = unif(rng), w = unif(rng);
        // F(u|w) + F(w|v) = F(u|v) + (F'(w) - F'(v))(w - u)
        const double lhsQ = rel_Q(u, w, g) + rel_Q(w, v, g);
        const double rhsQ = rel_Q(u, v, g) +
                            (-pressure(w, g) + pressure(v, g)) * (w - u);
        CHECK(std::abs(lhsQ - rhsQ) <= 1e-12 * (1.0 + std::abs(rhsQ)));
        const double lhsP = rel_p(u, w, g) + rel_p(w, v, g);
        const double rhsP =
            rel_p(u, v, g) +
            (pressure_slope(w, g) - pressure_slope(v, g)) * (w - u);
        CHECK(std::abs(lhsP - rhsP) <= 1e-12 * (1.0 + std::abs(rhsP)));
    }
}

TEST_CASE("relative entropy eta") {
    const GasModel g = gas(2.0, 1.0);
    CHECK(rel_entropy_eta({1.5, 0.3}, {1.5, 0.3}, g) == doctest::Approx(0.0));
    // gamma=2, U1=(2,1), U2=(1,0): 0.5 + Q(2|1) = 1.0
    CHECK(rel_entropy_eta({2.0, 1.0}, {1.0, 0.0}, g) ==
          doctest::Approx(1.0).epsilon(1e-14));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    for (int i = 0; i < 200; ++i) {
        const BDState a{unif(rng), unif(rng)}, b{unif(rng), unif(rng)};
        const double dh = a.h - b.h;
        CHECK(rel_entropy_eta(a, b, g) >= 0.5 * dh * dh);
    }
}

TEST_CASE("E functional reduces to eta and vanishes on diagonal") {
    const GasModel g = gas(2.0, 1.0);
    CHECK(rel_E_functional({1.2, 0.5}, 0.7, {1.2, 0.5}, 0.7, g) ==
          doctest::Approx(0.0));
    // constant states: gradient terms zero -> eta of the raw pair
    const double e = rel_E_functional({1.5, 0.8}, 0.0, {1.0, 0.2}, 0.0, g);
    CHECK(e == doctest::Approx(rel_entropy_eta({1.5, 0.8}, {1.0, 0.2}, g)));
    CHECK(rel_E_functional({1.5, 0.8}, 0.3, {1.0, 0.2}, -0.1, g) >= 0.0);
}

TEST_CASE("inequality suite: fitted constants and local bound") {
    const GasModel g = gas(1.4, 1.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, double>> samples;
    // local-regime samples: |p(v)-p(w)| <= 0.05, |w-1| <= 0.05
    for (int i = 0; i < 10000; ++i) {
        const double w = 1.0 + 0.05 * (2.0 * unif(rng) - 1.0);
        const double dp = 0.05 * (2.0 * unif(rng) - 1.0);
        samples.emplace_back(pressure_inverse(pressure(w, g) + dp, g), w);
    }
    const InequalityReport rep = check_inequality_suite(samples, g, 1.0);
    CHECK(rep.local_violations == 0);
    CHECK(rep.local_samples == 10000);
    CHECK(rep.c1_fitted > 0.0);
    CHECK(rep.C_fitted > 0.0);

    // direct evaluation at gamma=2, w=1, p(v)-p(w)=0.1
    const GasModel g2 = gas(2.0, 1.0);
    const double dp = 0.1;
    const double v = pressure_inverse(1.0 + dp, g2);
    const double rhs = 1.0 / (2.0 * 2.0) * dp * dp -
                       3.0 / (3.0 * 4.0) * dp * dp * dp;
    CHECK(rel_Q(v, 1.0, g2) >= rhs);

    // identical pairs count as passes
    std::vector<std::pair<double, double>> diag{{1.0, 1.0}, {2.0, 2.0}};
    const InequalityReport rep2 = check_inequality_suite(diag, g, 1.0);
    CHECK(rep2.local_violations == 0);

    CHECK_THROWS_AS(check_inequality_suite({}, g, 1.0), std::invalid_argument);
}

TEST_CASE("model validation") {
    GasModel g = gas(2.0, 1.0);
    CHECK_NOTHROW(g.validate());
    g.gamma = 0.9;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = gas(3.0, 1.0);  // gamma > alpha + 1
    CHECK_THROWS_AS(g.validate(), ConfigError);
}
