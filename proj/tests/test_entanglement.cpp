#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gme/entanglement.hpp"
#include "gme/grid.hpp"

using namespace gme;

TEST_SUITE_BEGIN("entanglement");

namespace {

BipartiteWavefunction from_matrix(const Eigen::MatrixXcd& m, double step = 1.0) {
    BipartiteWavefunction psi;
    psi.axis_A = Axis{0.0, step, static_cast<int>(m.rows())};
    psi.axis_B = Axis{0.0, step, static_cast<int>(m.cols())};
    psi.amplitudes = m;
    return normalize(psi);
}

BipartiteWavefunction random_state(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(dist(rng), dist(rng));
    return from_matrix(m, 0.37);
}

}  // namespace

TEST_CASE("Bell state has E = 1") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = m(1, 1) = 1.0;
    BipartiteWavefunction bell = from_matrix(m);
    CHECK(measure_quadrature(bell).value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(measure_schmidt(bell).value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(measure_schmidt(bell).purity == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("product state has E = 0 without cancellation noise") {
    Eigen::VectorXcd a(17), b(23);
    for (int i = 0; i < 17; ++i) a(i) = std::complex<double>(std::sin(i + 1.0), 0.2 * i);
    for (int j = 0; j < 23; ++j) b(j) = std::complex<double>(std::cos(0.3 * j), 0.1);
    Eigen::MatrixXcd m = a * b.transpose();
    BipartiteWavefunction prod{};
    prod.axis_A = Axis{-1.0, 0.25, 17};
    prod.axis_B = Axis{-2.0, 0.5, 23};
    prod.amplitudes = m;
    prod = normalize(prod);
    CHECK(measure_quadrature(prod).value < 1e-9);
    CHECK(measure_schmidt(prod).value < 1e-9);
}

TEST_CASE("rank-k maximally mixed reduced state gives E = sqrt(2 - 2/k)") {
    for (int k : {2, 3, 5, 8}) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
        for (int i = 0; i < k; ++i) m(i, i) = 1.0;
        BipartiteWavefunction psi = from_matrix(m);
        double want = std::sqrt(2.0 - 2.0 / k);
        CAPTURE(k);
        CHECK(measure_quadrature(psi).value == doctest::Approx(want).epsilon(1e-12));
        CHECK(measure_schmidt(psi).value == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("two-term superposition: E = |sin 2 theta|") {
    for (double theta : {0.1, 0.4, 0.7853981633974483, 1.2}) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = std::cos(theta);
        m(1, 1) = std::sin(theta);
        BipartiteWavefunction psi = from_matrix(m);
        CAPTURE(theta);
        CHECK(measure_schmidt(psi).value ==
              doctest::Approx(std::fabs(std::sin(2.0 * theta))).epsilon(1e-12));
    }
}

TEST_CASE("methods agree on random states") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        BipartiteWavefunction psi = random_state(24, seed);
        double eq = measure_quadrature(psi).value;
        double es = measure_schmidt(psi).value;
        CAPTURE(seed);
        CHECK(std::fabs(eq - es) < 1e-10);
    }
}

TEST_CASE("E is invariant under a global phase and under particle swap") {
    BipartiteWavefunction psi = random_state(16, 7u);
    double e0 = measure_schmidt(psi).value;

    BipartiteWavefunction phased = psi;
    phased.amplitudes *= std::polar(1.0, 1.234);
    CHECK(measure_schmidt(phased).value == doctest::Approx(e0).epsilon(1e-12));

    BipartiteWavefunction swapped;
    swapped.axis_A = psi.axis_B;
    swapped.axis_B = psi.axis_A;
    swapped.amplitudes = psi.amplitudes.transpose();
    CHECK(measure_schmidt(swapped).value == doctest::Approx(e0).epsilon(1e-12));
    CHECK(measure_quadrature(swapped).value == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("Schmidt spectrum is normalized and nonincreasing") {
    BipartiteWavefunction psi = random_state(20, 11u);
    EntanglementResult r = measure_schmidt(psi);
    REQUIRE(r.schmidt_spectrum.has_value());
    const auto& spec = *r.schmidt_spectrum;
    double sum = 0.0;
    for (size_t i = 0; i < spec.size(); ++i) {
        CHECK(spec[i] >= 0.0);
        if (i > 0) CHECK(spec[i] <= spec[i - 1]);
        sum += spec[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    double purity = 0.0;
    for (double l : spec) purity += l * l;
    CHECK(purity == doctest::Approx(r.purity).epsilon(1e-10));
}

TEST_CASE("grid state serialization round-trips bit-exactly") {
    BipartiteWavefunction psi = random_state(12, 3u);
    std::stringstream buf;
    save_grid_state(psi, buf);
    BipartiteWavefunction back = load_grid_state(buf);
    CHECK(back.axis_A == psi.axis_A);
    CHECK(back.axis_B == psi.axis_B);
    REQUIRE(back.amplitudes.rows() == psi.amplitudes.rows());
    REQUIRE(back.amplitudes.cols() == psi.amplitudes.cols());
    CHECK((back.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(measure_schmidt(back).value == measure_schmidt(psi).value);
}

TEST_SUITE_END();
