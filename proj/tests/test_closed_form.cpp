#include <doctest.h>

#include <cmath>

#include "gme/closed_form.hpp"

using namespace gme;

TEST_SUITE_BEGIN("closed_form");

namespace {

// Independent long-double oracle for the shape functions, straight from their
// defining expressions (safe for x well past the library's factored-form
// switchover since long double exponentials reach e^11000).
long double f0_oracle(long double x) {
    long double x2 = x * x, x4 = x2 * x2;
    long double e4 = std::exp(x2 / 4.0L), e2 = std::exp(x2 / 2.0L);
    long double den = 4.0L * (e4 + 1.0L) * (e4 + 1.0L);
    return (-x4 - 4.0L * x2 + 4.0L * e2 - 2.0L * e4 * (x4 + 2.0L * x2 - 4.0L) + 4.0L) / den;
}
long double f2_oracle(long double x) {
    long double x2 = x * x, x4 = x2 * x2;
    long double e4 = std::exp(x2 / 4.0L), e2 = std::exp(x2 / 2.0L);
    long double den = 8.0L * (e4 + 1.0L) * (e4 + 1.0L);
    return (-12.0L * x2 + 8.0L * e2 + (-3.0L * x4 - 12.0L * x2 + 16.0L) * e4 + 8.0L) / den;
}
long double f4_oracle(long double x) {
    long double x2 = x * x;
    long double e4 = std::exp(x2 / 4.0L);
    long double num = -x2 / 2.0L + e4 + 1.0L;
    return num * num / ((e4 + 1.0L) * (e4 + 1.0L));
}

}  // namespace

TEST_CASE("shape functions match the long-double oracle on [0, 50]") {
    for (int i = 0; i <= 1000; ++i) {
        double x = 50.0 * i / 1000.0;
        CAPTURE(x);
        CHECK(f0(x) == doctest::Approx((double)f0_oracle(x)).epsilon(1e-10));
        CHECK(f2(x) == doctest::Approx((double)f2_oracle(x)).epsilon(1e-10));
        CHECK(f4(x) == doctest::Approx((double)f4_oracle(x)).epsilon(1e-10));
    }
}

TEST_CASE("factored large-x form is continuous across the switchover") {
    // Switchover at x^2 = 500, x ~ 22.36.
    for (double x : {22.34, 22.355, 22.365, 22.40}) {
        CAPTURE(x);
        CHECK(f0(x) == doctest::Approx((double)f0_oracle(x)).epsilon(1e-12));
        CHECK(f2(x) == doctest::Approx((double)f2_oracle(x)).epsilon(1e-12));
        CHECK(f4(x) == doctest::Approx((double)f4_oracle(x)).epsilon(1e-12));
    }
    // No overflow far past it.
    CHECK(std::isfinite(f0(1e4)));
    CHECK(f0(1e4) == doctest::Approx(1.0));
    CHECK(f2(1e4) == doctest::Approx(1.0));
    CHECK(f4(1e4) == doctest::Approx(1.0));
}

TEST_CASE("shape functions stay order unity") {
    // f0 and f2 dip negative mid-range (f0 bottoms out near -3.56 at x ~ 2.9);
    // all three stay O(1) and recover to 1 at both ends.
    for (int i = 0; i <= 500; ++i) {
        double x = 50.0 * i / 500.0;
        for (double v : {f0(x), f2(x), f4(x)}) {
            CHECK(v > -3.6);
            CHECK(v < 1.31);
        }
        CHECK(f4(x) >= 0.0);  // f4 is a perfect square
    }
    CHECK(f0(50.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f2(50.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("f4 has its dip near x = 2.2") {
    double best_x = 0.0, best = 1e300;
    for (int i = 0; i <= 5000; ++i) {
        double x = 5.0 * i / 5000.0;
        if (f4(x) < best) {
            best = f4(x);
            best_x = x;
        }
    }
    CHECK(best_x == doctest::Approx(2.2).epsilon(0.1));
    CHECK(best < 1.0);
}

TEST_CASE("unified formula anchors") {
    // xi = 0 collapses to the oscillator form.
    DimensionlessGroups g{1e-3, 0.01, 0.0, 0.0, 1.0};
    CHECK(entanglement_unified(g).value ==
          doctest::Approx(entanglement_oscillator_limit(g).value).epsilon(1e-14));

    // phi omegaT = 1, eps = 0.01, omegaT = 1, xi = 0: E = 2e-4 sqrt(1+1/3+1/9).
    DimensionlessGroups a{1.0, 0.01, 0.0, 0.0, 1.0};
    CHECK(entanglement_unified(a).value ==
          doctest::Approx(2e-4 * std::sqrt(1.0 + 1.0 / 3.0 + 1.0 / 9.0)).epsilon(1e-12));
    CHECK(entanglement_unified(a).value == doctest::Approx(2.404e-4).epsilon(1e-3));
}

TEST_CASE("path limit and large-omegaT limit expressions") {
    DimensionlessGroups g{2e-3, 0.01, 3.0, 0.0, 0.7};
    CHECK(entanglement_path_limit(g).value ==
          doctest::Approx(g.phi * g.omegaT * g.epsilon * g.epsilon * g.xi * g.xi)
              .epsilon(1e-14));
    CHECK(entanglement_oscillator_large_omegaT(g).value ==
          doctest::Approx(2.0 / 3.0 * g.phi * g.omegaT * g.epsilon * g.epsilon *
                          g.omegaT * g.omegaT)
              .epsilon(1e-14));
    // beta = 0 gives exactly zero in the path limit.
    g.xi = 0.0;
    CHECK(entanglement_path_limit(g).value == 0.0);
}

TEST_CASE("relativistic correction") {
    DimensionlessGroups g{1e-3, 0.01, 0.0, 1e-3, 1.0};

    SUBCASE("requires xi = 0") {
        g.xi = 0.5;
        CHECK_THROWS_AS(relativistic_correction(g), unsupported_regime);
    }
    SUBCASE("vanishes at omegaT = sqrt(3)") {
        g.omegaT = std::sqrt(3.0);
        CHECK(std::fabs(*relativistic_correction(g).correction) < 1e-20);
    }
    SUBCASE("positive below, negative above sqrt(3)") {
        g.omegaT = 1.0;
        CHECK(*relativistic_correction(g).correction > 0.0);
        g.omegaT = 3.0;
        CHECK(*relativistic_correction(g).correction < 0.0);
    }
    SUBCASE("large-omegaT form agrees asymptotically") {
        g.omegaT = 200.0;
        ClosedFormResult r = relativistic_correction(g);
        CHECK(*r.correction / *r.correction_large_omegaT == doctest::Approx(1.0).epsilon(5e-3));
        // dE = -(3/2)(Omega/omegaT)^2 E_large.
        double e_large = entanglement_oscillator_large_omegaT(g).value;
        CHECK(*r.correction_large_omegaT ==
              doctest::Approx(-1.5 * g.Omega * g.Omega / (g.omegaT * g.omegaT) * e_large)
                  .epsilon(1e-12));
    }
    SUBCASE("corrected value is base plus general correction") {
        ClosedFormResult r = relativistic_correction(g);
        CHECK(r.value == doctest::Approx(entanglement_oscillator_limit(g).value +
                                         *r.correction)
                             .epsilon(1e-14));
    }
}

TEST_SUITE_END();
