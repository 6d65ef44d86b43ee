#include "gme/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <vector>

#include "gme/closed_form.hpp"
#include "gme/dynamics.hpp"
#include "gme/entanglement.hpp"
#include "gme/grid.hpp"
#include "gme/propagator.hpp"
#include "gme/run.hpp"

namespace gme {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool pass, const std::string& what) {
        ok = ok && pass;
        if (!detail.str().empty()) detail << "; ";
        detail << what << (pass ? "" : " [FAILED]");
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        double err = std::fabs(got - want);
        expect(err <= tol, what + " err=" + fmt(err) + " tol=" + fmt(tol));
    }
    CriterionResult done(int id, const std::string& name) const {
        return {id, name, ok, detail.str()};
    }
};

// Shared across criteria 3-5: evaluator disagreement is tracked on every grid
// state the suite produces.
struct EvaluatorTracker {
    double max_diff = 0.0;
    int states = 0;

    double record(const BipartiteWavefunction& psi, double* schmidt_out = nullptr) {
        EntanglementResult eq = measure_quadrature(psi);
        EntanglementResult es = measure_schmidt(psi);
        max_diff = std::max(max_diff, std::fabs(eq.value - es.value));
        ++states;
        if (schmidt_out) *schmidt_out = es.value;
        return es.value;
    }
};

BipartiteWavefunction simulate(const DimensionlessGroups& g, int grid_n,
                               int nodes, int threads,
                               TrajectoryKind kind = TrajectoryKind::straight_line) {
    OneParticleState packet;
    packet.kind = g.xi > 0.0 ? PacketKind::two_gaussians : PacketKind::single_gaussian;
    packet.xi = g.xi;
    EvolutionSpec spec;
    spec.omegaT = g.omegaT;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.trajectory_kind = kind;
    spec.quadrature_nodes = nodes;
    spec.final_axis_A = spec.final_axis_B = default_final_axis(g.xi, g.omegaT, grid_n);
    return evolve_stationary_phase(packet, packet, spec, threads);
}

CriterionResult criterion1() {
    Checker c;
    c.expect_near(f0(0.0), 1.0, 1e-12, "f0(0)=1");
    c.expect_near(f2(0.0), 1.0, 1e-12, "f2(0)=1");
    c.expect_near(f4(0.0), 1.0, 1e-12, "f4(0)=1");
    double e = std::exp(1.0);
    c.expect_near(f4(2.0), (e - 1.0) * (e - 1.0) / ((e + 1.0) * (e + 1.0)), 1e-12,
                  "f4(2)=(e-1)^2/(e+1)^2");
    c.expect_near(f0(50.0), 1.0, 1e-6, "f0(50)->1");
    c.expect_near(f2(50.0), 1.0, 1e-6, "f2(50)->1");
    c.expect_near(f4(50.0), 1.0, 1e-6, "f4(50)->1");
    return c.done(1, "shape function anchors");
}

CriterionResult criterion2() {
    Checker c;
    {
        DimensionlessGroups g{1e-3, 0.01, 30.0, 0.0, 0.1};
        double ratio = entanglement_unified(g).value / entanglement_path_limit(g).value;
        c.expect_near(ratio, 1.0, 5e-3, "unified/path at xi=30,omegaT=0.1");
    }
    for (double wt : {0.5, 1.0, 2.0}) {
        DimensionlessGroups g{1e-3, 0.01, 0.05, 0.0, wt};
        double ratio =
            entanglement_unified(g).value / entanglement_oscillator_limit(g).value;
        c.expect_near(ratio, 1.0, 5e-3,
                      "unified/oscillator at xi=0.05,omegaT=" + fmt(wt));
    }
    {
        DimensionlessGroups g{1e-3, 0.01, 0.0, 0.0, 30.0};
        double ratio = entanglement_oscillator_limit(g).value /
                       entanglement_oscillator_large_omegaT(g).value;
        c.expect_near(ratio, 1.0, 1e-2, "oscillator/large at omegaT=30");
    }
    return c.done(2, "closed-form limit consistency");
}

CriterionResult criterion3(int threads, bool verbose, EvaluatorTracker& tracker,
                           double* reference_E) {
    Checker c;
    for (double xi : {0.0, 1.0, 5.0}) {
        for (double wt : {0.5, 1.0, 2.0}) {
            DimensionlessGroups g{1e-3, 0.02, xi, 0.0, wt};
            double exact = entanglement_unified(g).value;
            double e_coarse =
                tracker.record(simulate(g, 96, 64, threads));
            double rel = std::fabs(e_coarse / exact - 1.0);
            c.expect(rel <= 0.02, "xi=" + fmt(xi) + ",omegaT=" + fmt(wt) +
                                      " rel=" + fmt(rel) + " tol=0.02");
            DimensionlessGroups gh = g;
            gh.epsilon = 0.01;
            double exact_h = entanglement_unified(gh).value;
            double e_half = tracker.record(simulate(gh, 96, 64, threads));
            double rel_h = std::fabs(e_half / exact_h - 1.0);
            // The leading residual is exactly quadratic in eps, so the shrink
            // converges to 4 (from below at omegaT = 2, where the next-order
            // term has opposite sign); allow 1% measurement slack.
            c.expect(rel >= 3.96 * rel_h,
                     "shrink(eps/2)=" + fmt(rel / rel_h) + " >= 4 (1% slack)");
            if (xi == 0.0 && wt == 1.0 && reference_E) *reference_E = e_coarse;
            if (verbose)
                std::fprintf(stderr, "  [3] xi=%g omegaT=%g rel=%.3g shrink=%.3g\n",
                             xi, wt, rel, rel / rel_h);
        }
    }
    return c.done(3, "stationary phase vs closed form");
}

CriterionResult criterion4(int threads, EvaluatorTracker& tracker) {
    Checker c;
    DimensionlessGroups g{1e-3, 0.02, 0.0, 0.0, 1.0};
    Axis ax = make_axis(-8.0, 8.0, 128);
    OneParticleState packet{PacketKind::single_gaussian, 0.0};
    EvolutionSpec spec;
    spec.omegaT = 1.0;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.final_axis_A = spec.final_axis_B = ax;
    BipartiteWavefunction psi_sp = evolve_stationary_phase(packet, packet, spec, threads);
    BipartiteWavefunction psi2 = initial_state(packet, packet, ax, ax);
    BipartiteWavefunction psi_ss = normalize(
        evolve_split_step(psi2, PotentialKind::expanded_second_order, 256, 1.0, g));
    double F = fidelity(psi_sp, psi_ss);
    c.expect(F >= 0.999, "fidelity=" + fmt(F) + " >= 0.999");
    double e_sp = tracker.record(psi_sp);
    double e_ss = tracker.record(psi_ss);
    double rel = std::fabs(e_ss - e_sp) / e_sp;
    c.expect(rel <= 0.01, "|dE|/E=" + fmt(rel) + " <= 0.01");
    return c.done(4, "split-step oracle agreement");
}

CriterionResult criterion5(const EvaluatorTracker& tracker) {
    Checker c;
    c.expect(tracker.max_diff < 1e-8,
             "max evaluator diff over " + std::to_string(tracker.states) +
                 " states = " + fmt(tracker.max_diff) + " < 1e-8");

    // Bell anchor: psi = (|00> + |11>)/sqrt(2) on a 2-point grid.
    BipartiteWavefunction bell;
    bell.axis_A = bell.axis_B = Axis{0.0, 1.0, 2};
    bell.amplitudes = Eigen::MatrixXcd::Zero(2, 2);
    bell.amplitudes(0, 0) = bell.amplitudes(1, 1) = 1.0 / std::sqrt(2.0);
    double eb_q = measure_quadrature(bell).value;
    double eb_s = measure_schmidt(bell).value;
    c.expect_near(eb_q, 1.0, 1e-12, "Bell E (quadrature)");
    c.expect_near(eb_s, 1.0, 1e-12, "Bell E (schmidt)");

    // Product anchor.
    DimensionlessGroups g{0.0, 0.02, 0.0, 0.0, 1.0};
    OneParticleState packet{PacketKind::single_gaussian, 0.0};
    Axis ax = default_final_axis(0.0, 1.0, 96);
    BipartiteWavefunction prod = initial_state(packet, packet, ax, ax);
    double ep_q = measure_quadrature(prod).value;
    double ep_s = measure_schmidt(prod).value;
    c.expect(ep_q < 1e-9, "product E (quadrature)=" + fmt(ep_q) + " < 1e-9");
    c.expect(ep_s < 1e-9, "product E (schmidt)=" + fmt(ep_s) + " < 1e-9");
    return c.done(5, "entanglement evaluator cross-check");
}

CriterionResult criterion6() {
    Checker c;
    {
        DimensionlessGroups g{1e-3, 0.01, 0.0, 1e-3, 100.0};
        ClosedFormResult r = relativistic_correction(g);
        double ratio = *r.correction / *r.correction_large_omegaT;
        c.expect_near(ratio, 1.0, 1e-2, "general/large-omegaT at omegaT=100");
    }
    {
        // Bisect the sign change of the general correction in omegaT.
        auto corr = [](double wt) {
            DimensionlessGroups g{1e-3, 0.01, 0.0, 1e-3, wt};
            return *relativistic_correction(g).correction;
        };
        double lo = 1.0, hi = 3.0;
        c.expect(corr(lo) > 0.0 && corr(hi) < 0.0, "sign change bracketed in [1,3]");
        while (hi - lo > 1e-9) {
            double mid = 0.5 * (lo + hi);
            (corr(mid) > 0.0 ? lo : hi) = mid;
        }
        c.expect_near(0.5 * (lo + hi), std::sqrt(3.0), 1e-6, "zero at omegaT=sqrt(3)");
        c.expect(corr(2.0) < 0.0 && corr(10.0) < 0.0,
                 "correction negative for omegaT > sqrt(3)");
    }
    return c.done(6, "relativistic correction consistency");
}

CriterionResult criterion7(int threads, EvaluatorTracker& tracker) {
    Checker c;
    DimensionlessGroups g{1e-3, 0.02, 0.0, 0.0, 1.0};
    double e_straight = tracker.record(
        simulate(g, 48, 64, threads, TrajectoryKind::straight_line));
    double e_kepler = tracker.record(
        simulate(g, 48, 64, threads, TrajectoryKind::kepler_bvp));
    double rel = std::fabs(e_kepler / e_straight - 1.0);
    c.expect(rel < 1e-3, "kepler vs straight rel=" + fmt(rel) + " < 1e-3");
    return c.done(7, "trajectory equivalence");
}

CriterionResult criterion8() {
    Checker c;
    {
        // Static worldlines at the nominal separation: t_ab = t - Omega exactly.
        DimensionlessGroups g{1e-3, 0.02, 0.0, 0.05, 1.0};
        Trajectory a = straight_line(0.0, 0.0, 0.0, 2.0);
        double tab = retarded_time(a, a, 1.0, g);
        c.expect_near(tab, 1.0 - g.Omega, 1e-12, "static t_ab = t - Omega");
    }
    {
        // Drifting, curved worldline with order-one curvature so the Taylor
        // truncation error is visible; oracle is bisection on the exact
        // light-cone condition Delta = Omega (1 + eps (q_a(t-Delta) + q_b(t))).
        Trajectory a;
        a.kind = TrajectoryKind::kepler_bvp;
        a.t_initial = 0.0;
        a.t_final = 2.0;
        a.k = 1.3;
        a.c_const = 0.1;
        a.c_lin = 0.4;
        a.c_cosh = 0.25;
        a.c_sinh = 0.35;
        a.c_quad = 0.2;
        Trajectory b = straight_line(0.0, 0.3, 0.0, 2.0);
        double t = 1.0;
        std::vector<double> errors;
        for (double Om : {0.02, 0.01, 0.005}) {
            DimensionlessGroups g{1e-3, 0.2, 0.0, Om, 1.0};
            double approx = retarded_time(a, b, t, g);
            auto residual = [&](double delta) {
                return delta - g.Omega * (1.0 + g.epsilon * (a.position(t - delta) +
                                                             b.position(t)));
            };
            double lo = 0.0, hi = 4.0 * Om;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                (residual(mid) < 0.0 ? lo : hi) = mid;
            }
            double exact = t - 0.5 * (lo + hi);
            errors.push_back(std::fabs(approx - exact));
        }
        double exponent = std::log(errors[0] / errors[2]) / std::log(0.02 / 0.005);
        c.expect(errors[0] > 1e-15, "truncation error measurable (err=" + fmt(errors[0]) + ")");
        c.expect(exponent >= 2.7,
                 "convergence exponent=" + fmt(exponent) + " >= 2.7");
    }
    return c.done(8, "retarded time");
}

CriterionResult criterion9(int threads, EvaluatorTracker& tracker,
                           double reference_E) {
    Checker c;
    {
        DimensionlessGroups g{1e-3, 0.02, 1.5, 0.0, 1.0};
        DimensionlessGroups g2 = g;
        g2.phi *= 2.0;
        double ratio = entanglement_unified(g2).value / entanglement_unified(g).value;
        c.expect_near(ratio, 2.0, 1e-15, "closed form E(2phi)/E(phi)=2");
    }
    {
        DimensionlessGroups g2{2e-3, 0.02, 0.0, 0.0, 1.0};
        double e2 = tracker.record(simulate(g2, 96, 64, threads));
        double ratio = e2 / reference_E;
        c.expect_near(ratio, 2.0, 1e-4, "simulated E(2phi)/E(phi)=2");
    }
    {
        // Free evolution: no entanglement, packet width alpha sqrt(1+omegaT^2).
        DimensionlessGroups g{0.0, 0.02, 0.0, 0.0, 1.0};
        BipartiteWavefunction psi = simulate(g, 96, 64, threads);
        double e_free = tracker.record(psi);
        c.expect(e_free < 1e-9, "free E=" + fmt(e_free) + " < 1e-9");
        // Marginal density std of a width-sigma packet is sigma/sqrt(2).
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
        double width = std::sqrt(2.0 * (m2 / norm - mean * mean));
        double expected = std::sqrt(1.0 + g.omegaT * g.omegaT);
        c.expect(std::fabs(width / expected - 1.0) < 1e-3,
                 "free width=" + fmt(width) + " vs " + fmt(expected) + " (0.1%)");
    }
    return c.done(9, "physics properties");
}

CriterionResult criterion10() {
    Checker c;
    {
        // simulate determinism: bitwise identical final amplitudes.
        DimensionlessGroups g{1e-3, 0.02, 1.0, 0.0, 1.0};
        BipartiteWavefunction ref = simulate(g, 48, 32, 1);
        for (int threads : {2, 8}) {
            BipartiteWavefunction psi = simulate(g, 48, 32, threads);
            bool same = psi.amplitudes.rows() == ref.amplitudes.rows() &&
                        psi.amplitudes.cols() == ref.amplitudes.cols();
            if (same)
                same = std::memcmp(psi.amplitudes.data(), ref.amplitudes.data(),
                                   sizeof(std::complex<double>) *
                                       psi.amplitudes.size()) == 0;
            c.expect(same, "simulate bit-identical at " + std::to_string(threads) +
                               " threads");
        }
    }
    {
        // sweep determinism: byte-identical CSV including a simulated column.
        RunConfig cfg;
        cfg.mode = RunMode::sweep;
        cfg.groups = DimensionlessGroups{1e-3, 0.02, 0.0, 0.0, 1.0};
        cfg.sweep = SweepAxis{"omegaT", 0.5, 1.5, 3, "linear"};
        cfg.sweep_outputs = {"unified", "oscillator", "simulated"};
        cfg.numerics.final_grid_points = 32;
        cfg.numerics.quadrature_nodes = 24;
        std::string ref;
        for (int threads : {1, 2, 8}) {
            cfg.threads = threads;
            std::ostringstream out;
            write_sweep_csv(cfg, out);
            if (threads == 1)
                ref = out.str();
            else
                c.expect(out.str() == ref, "sweep CSV byte-identical at " +
                                               std::to_string(threads) + " threads");
        }
        c.expect(!ref.empty(), "sweep CSV non-empty");
    }
    return c.done(10, "determinism across thread counts");
}

}  // namespace

std::vector<CriterionResult> run_verification(int threads, bool verbose) {
    std::vector<CriterionResult> results;
    EvaluatorTracker tracker;
    auto log = [&](const CriterionResult& r) {
        if (verbose)
            std::fprintf(stderr, "[%s] criterion %d (%s)\n",
                         r.passed ? "pass" : "FAIL", r.id, r.name.c_str());
        results.push_back(r);
    };
    log(criterion1());
    log(criterion2());
    double reference_E = 0.0;
    log(criterion3(threads, verbose, tracker, &reference_E));
    log(criterion4(threads, tracker));
    log(criterion6());
    log(criterion7(threads, tracker));
    log(criterion8());
    log(criterion9(threads, tracker, reference_E));
    log(criterion5(tracker));  // after all grid states exist
    log(criterion10());
    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) {
                  return a.id < b.id;
              });
    return results;
}

}  // namespace gme
