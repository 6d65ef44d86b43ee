#include <doctest.h>

#include <limits>

#include "gme/params.hpp"

using namespace gme;

TEST_SUITE_BEGIN("params");

namespace {
ExperimentParams sane() {
    // Milligram-scale masses a few mm apart, micron packets.
    ExperimentParams p{};
    p.m = 1e-6;
    p.d = 1e-3;
    p.alpha = 1e-6;
    p.beta = 2e-6;
    p.T = 1.0;
    p.G = 6.67430e-11;
    p.hbar = 1.054571817e-34;
    p.c = 299792458.0;
    return p;
}
}  // namespace

TEST_CASE("validate accepts sane inputs") {
    CHECK_NOTHROW(sane().validate());
}

TEST_CASE("validate rejects non-positive and non-finite fields") {
    auto bad = [](auto mutate) {
        ExperimentParams p = sane();
        mutate(p);
        CHECK_THROWS_AS(p.validate(), invalid_parameter);
    };
    bad([](ExperimentParams& p) { p.m = 0.0; });
    bad([](ExperimentParams& p) { p.d = -1.0; });
    bad([](ExperimentParams& p) { p.alpha = 0.0; });
    bad([](ExperimentParams& p) { p.beta = -1e-9; });  // beta may be 0, not negative
    bad([](ExperimentParams& p) { p.T = 0.0; });
    bad([](ExperimentParams& p) { p.G = 0.0; });
    bad([](ExperimentParams& p) { p.hbar = 0.0; });
    bad([](ExperimentParams& p) { p.c = std::numeric_limits<double>::infinity(); });
}

TEST_CASE("derived groups match their definitions") {
    ExperimentParams p = sane();
    DimensionlessGroups g = derive_groups(p);
    double omega = p.hbar / (p.m * p.alpha * p.alpha);
    CHECK(p.omega() == doctest::Approx(omega).epsilon(1e-14));
    CHECK(g.phi == doctest::Approx(p.G * p.m * p.m / (p.hbar * omega * p.d)).epsilon(1e-14));
    CHECK(g.epsilon == doctest::Approx(p.alpha / p.d).epsilon(1e-14));
    CHECK(g.xi == doctest::Approx(p.beta / p.alpha).epsilon(1e-14));
    CHECK(g.Omega == doctest::Approx(omega * p.d / p.c).epsilon(1e-14));
    CHECK(g.omegaT == doctest::Approx(omega * p.T).epsilon(1e-14));
}

TEST_CASE("group validation") {
    DimensionlessGroups g{1e-3, 0.02, 1.0, 0.0, 1.0};
    CHECK_NOTHROW(g.validate());
    g.epsilon = -0.1;
    CHECK_THROWS_AS(g.validate(), invalid_parameter);
}

TEST_CASE("regime report flags large small-parameters") {
    DimensionlessGroups ok{1e-3, 0.02, 1.0, 0.01, 1.0};
    CHECK(validate_regime(ok).all_pass());

    DimensionlessGroups strained{1e-3, 0.3, 1.0, 0.01, 1.0};
    RegimeReport r = validate_regime(strained);
    CHECK_FALSE(r.all_pass());
    bool eps_flagged = false;
    for (const auto& c : r.checks)
        if (!c.pass && c.value == doctest::Approx(0.3)) eps_flagged = true;
    CHECK(eps_flagged);
}

TEST_SUITE_END();
