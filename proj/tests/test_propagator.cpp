#include <doctest.h>

#include <cmath>

#include "gme/entanglement.hpp"
#include "gme/propagator.hpp"

using namespace gme;

TEST_SUITE_BEGIN("propagator");

namespace {

const DimensionlessGroups kFree{0.0, 0.02, 0.0, 0.0, 1.0};

double marginal_std(const BipartiteWavefunction& psi) {
    double norm = 0.0, mean = 0.0, m2 = 0.0;
    for (int i = 0; i < psi.amplitudes.rows(); ++i) {
        double p = 0.0;
        for (int j = 0; j < psi.amplitudes.cols(); ++j)
            p += std::norm(psi.amplitudes(i, j));
        double y = psi.axis_A.point(i);
        norm += p;
        mean += p * y;
        m2 += p * y * y;
    }
    mean /= norm;
    return std::sqrt(m2 / norm - mean * mean);
}

}  // namespace

TEST_CASE("initial product state is normalized and unentangled") {
    Axis ax = make_axis(-8.0, 8.0, 96);
    OneParticleState g{PacketKind::single_gaussian, 0.0};
    BipartiteWavefunction psi = initial_state(g, g, ax, ax);
    CHECK(psi.squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(measure_schmidt(psi).value < 1e-10);
    // Unit-width packet: density std is 1/sqrt(2).
    CHECK(marginal_std(psi) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("two-Gaussian packet amplitude and hump geometry") {
    OneParticleState two{PacketKind::two_gaussians, 3.0};
    CHECK(two.hump_count() == 2);
    CHECK(two.hump_center(0) == doctest::Approx(-1.5));
    CHECK(two.hump_center(1) == doctest::Approx(1.5));
    CHECK(two.amplitude(1.5) == doctest::Approx(two.amplitude(-1.5)).epsilon(1e-14));
    CHECK(two.amplitude(0.0) < two.amplitude(1.5));
    // Grid too small to hold the humps must be refused.
    Axis tiny = make_axis(-1.0, 1.0, 32);
    CHECK_THROWS_AS(initial_state(two, two, tiny, tiny), std::domain_error);
}

TEST_CASE("free stationary-phase evolution spreads like a free Gaussian") {
    for (double wt : {0.5, 1.0, 2.0}) {
        OneParticleState g{PacketKind::single_gaussian, 0.0};
        EvolutionSpec spec;
        spec.omegaT = wt;
        spec.lagrangian = LagrangianConfig{0, 0, 0, kFree};
        spec.final_axis_A = spec.final_axis_B = default_final_axis(0.0, wt, 96);
        BipartiteWavefunction psi = evolve_stationary_phase(g, g, spec, 1);
        CAPTURE(wt);
        CHECK(measure_schmidt(psi).value < 1e-9);
        // Packet width sqrt(1 + wt^2); marginal density std is that over sqrt(2).
        double want = std::sqrt((1.0 + wt * wt) / 2.0);
        CHECK(marginal_std(psi) == doctest::Approx(want).epsilon(1e-4));
    }
}

TEST_CASE("identical particles give an exchange-symmetric state") {
    DimensionlessGroups g{1e-3, 0.02, 1.0, 0.0, 1.0};
    OneParticleState two{PacketKind::two_gaussians, 1.0};
    EvolutionSpec spec;
    spec.omegaT = 1.0;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.quadrature_nodes = 24;
    spec.final_axis_A = spec.final_axis_B = default_final_axis(1.0, 1.0, 48);
    BipartiteWavefunction psi = evolve_stationary_phase(two, two, spec, 1);
    double asym = (psi.amplitudes - psi.amplitudes.transpose().eval()).cwiseAbs().maxCoeff();
    CHECK(asym < 1e-12);
}

TEST_CASE("evolution rejects too few quadrature nodes") {
    OneParticleState g{PacketKind::single_gaussian, 0.0};
    EvolutionSpec spec;
    spec.lagrangian = LagrangianConfig{0, 0, 0, kFree};
    spec.quadrature_nodes = 8;
    spec.final_axis_A = spec.final_axis_B = default_final_axis(0.0, 1.0, 32);
    CHECK_THROWS_AS(evolve_stationary_phase(g, g, spec, 1), std::invalid_argument);
}

TEST_CASE("split-step refuses a grid coarser than 1/8 width") {
    Axis coarse = make_axis(-8.0, 8.0, 64);  // spacing 0.25
    OneParticleState g{PacketKind::single_gaussian, 0.0};
    BipartiteWavefunction psi = initial_state(g, g, coarse, coarse);
    CHECK_THROWS_WITH_AS(
        evolve_split_step(psi, PotentialKind::expanded_second_order, 64, 1.0, kFree),
        doctest::Contains("0.125"), std::invalid_argument);
}

TEST_CASE("split-step is unitary and free evolution stays a product") {
    Axis ax = make_axis(-10.0, 10.0, 160);
    OneParticleState g{PacketKind::single_gaussian, 0.0};
    BipartiteWavefunction psi2 = initial_state(g, g, ax, ax);
    BipartiteWavefunction out =
        evolve_split_step(psi2, PotentialKind::full_inverse_separation, 128, 1.0, kFree);
    CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(measure_schmidt(normalize(out)).value < 1e-9);
    CHECK(marginal_std(out) == doctest::Approx(1.0).epsilon(1e-3));  // sqrt(2/2)
}

TEST_CASE("split-step and stationary phase agree on the interacting problem") {
    DimensionlessGroups g{1e-3, 0.02, 0.0, 0.0, 1.0};
    Axis ax = make_axis(-8.0, 8.0, 128);
    OneParticleState sp{PacketKind::single_gaussian, 0.0};
    EvolutionSpec spec;
    spec.omegaT = 1.0;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.final_axis_A = spec.final_axis_B = ax;
    BipartiteWavefunction a = evolve_stationary_phase(sp, sp, spec, 1);
    BipartiteWavefunction b = normalize(evolve_split_step(
        initial_state(sp, sp, ax, ax), PotentialKind::expanded_second_order, 128, 1.0, g));
    CHECK(fidelity(a, b) > 0.9999);
    CHECK(measure_schmidt(a).value ==
          doctest::Approx(measure_schmidt(b).value).epsilon(1e-3));
}

TEST_CASE("convergence check passes at converged settings") {
    DimensionlessGroups g{1e-3, 0.02, 0.0, 0.0, 1.0};
    OneParticleState sp{PacketKind::single_gaussian, 0.0};
    EvolutionSpec spec;
    spec.omegaT = 1.0;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.quadrature_nodes = 48;
    spec.final_axis_A = spec.final_axis_B = default_final_axis(0.0, 1.0, 32);
    spec.convergence_check_tolerance = 1e-6;
    CHECK_NOTHROW(evolve_stationary_phase(sp, sp, spec, 1));
}

TEST_CASE("default final axis covers the spread packet") {
    Axis ax = default_final_axis(2.0, 1.5, 64);
    CHECK(ax.n == 64);
    CHECK(ax.min == doctest::Approx(-(1.0 + 4.0 + 6.0)));
    CHECK(ax.max() == doctest::Approx(11.0));
}

TEST_SUITE_END();
