#include "gme/propagator.hpp"

#include <fftw3.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gme {

namespace {

// Gauss-Hermite nodes and weights for weight e^{-x^2} (largest node first),
// orthonormal-recurrence Newton iteration.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussHermite(int n) : nodes(n), weights(n) {
        const double pim4 = 0.7511255444649425;  // pi^{-1/4}
        double z = 0.0, pp = 0.0;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            if (i == 0)
                z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
            else if (i == 1)
                z -= 1.14 * std::pow(n, 0.426) / z;
            else if (i == 2)
                z = 1.86 * z - 0.86 * nodes[0];
            else if (i == 3)
                z = 1.91 * z - 0.91 * nodes[1];
            else
                z = 2.0 * z - nodes[i - 2];
            for (int it = 0; it < 50; ++it) {
                double p1 = pim4, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
                }
                pp = std::sqrt(2.0 * n) * p2;
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15) break;
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = weights[n - 1 - i] = 2.0 / (pp * pp);
        }
    }
};

}  // namespace

double OneParticleState::amplitude(double y) const {
    if (kind == PacketKind::single_gaussian) return std::exp(-0.5 * y * y);
    const double dp = y - 0.5 * xi;
    const double dm = y + 0.5 * xi;
    return std::exp(-0.5 * dp * dp) + std::exp(-0.5 * dm * dm);
}

double OneParticleState::hump_center(int h) const {
    if (kind == PacketKind::single_gaussian) return 0.0;
    return (h == 0 ? -0.5 : 0.5) * xi;
}

Axis default_final_axis(double xi, double omegaT, int n) {
    const double half = 0.5 * xi + 4.0 + 4.0 * omegaT;
    return make_axis(-half, half, n);
}

namespace {

void check_span(const Axis& axis, const OneParticleState& spec, double omegaT,
                const char* which) {
    const double need = 0.5 * (spec.kind == PacketKind::two_gaussians ? spec.xi : 0.0) +
                        4.0 + 4.0 * omegaT;
    if (axis.min > -need + 1e-9 || axis.max() < need - 1e-9) {
        std::ostringstream msg;
        msg << "evolve_stationary_phase: final axis " << which << " spans ["
            << axis.min << ", " << axis.max() << "] but must cover +-" << need;
        throw std::invalid_argument(msg.str());
    }
}

// Probability mass of the packet falling outside [lo, hi]; per-hump Gaussian
// tail bound, |psi_hump|^2 has sigma = 1/sqrt(2).
double mass_outside(const OneParticleState& spec, double lo, double hi) {
    double out = 0.0;
    for (int h = 0; h < spec.hump_count(); ++h) {
        const double c = spec.hump_center(h);
        out += 0.5 * std::erfc(hi - c) + 0.5 * std::erfc(c - lo);
    }
    return out / spec.hump_count();
}

}  // namespace

BipartiteWavefunction initial_state(const OneParticleState& specA,
                                    const OneParticleState& specB,
                                    const Axis& axisA, const Axis& axisB) {
    if (mass_outside(specA, axisA.min, axisA.max()) > 1e-8 ||
        mass_outside(specB, axisB.min, axisB.max()) > 1e-8)
        throw std::domain_error("initial_state: grid too small to hold the packets");

    BipartiteWavefunction psi;
    psi.axis_A = axisA;
    psi.axis_B = axisB;
    psi.amplitudes.resize(axisA.n, axisB.n);
    std::vector<double> fa(axisA.n), fb(axisB.n);
    for (int i = 0; i < axisA.n; ++i) fa[i] = specA.amplitude(axisA.point(i));
    for (int j = 0; j < axisB.n; ++j) fb[j] = specB.amplitude(axisB.point(j));
    for (int i = 0; i < axisA.n; ++i)
        for (int j = 0; j < axisB.n; ++j) psi.amplitudes(i, j) = fa[i] * fb[j];
    return normalize(psi);
}

namespace {

struct QuadratureSet {
    // Flattened (hump, node) source points and real prefactors for one particle.
    std::vector<double> y2;
    std::vector<double> pref;
};

QuadratureSet build_quadrature(const OneParticleState& spec, const GaussHermite& gh,
                               double sigma) {
    QuadratureSet q;
    const double jac = std::sqrt(2.0) * sigma;
    for (int h = 0; h < spec.hump_count(); ++h) {
        const double c = spec.hump_center(h);
        for (size_t k = 0; k < gh.nodes.size(); ++k) {
            const double x = gh.nodes[k];
            q.y2.push_back(c + jac * x);
            // Residual Gaussian factor when the node spread differs from the
            // hump width: hump / e^{-x^2} = e^{-(sigma^2 - 1) x^2}.
            q.pref.push_back(gh.weights[k] * jac *
                             std::exp(-(sigma * sigma - 1.0) * x * x));
        }
    }
    return q;
}

Eigen::MatrixXcd stationary_phase_grid(const OneParticleState& specA,
                                       const OneParticleState& specB,
                                       const EvolutionSpec& spec, int nodes,
                                       int threads) {
    const GaussHermite gh(nodes);
    const double x_max = gh.nodes[0];
    double sigma = spec.hump_width_scale;
    if (sigma <= 0.0) {
        // Saddle-width match of the hump * kinetic-phase complex Gaussian.
        const double T2 = spec.omegaT * spec.omegaT;
        const double saddle = 0.85 * std::pow(T2 / (1.0 + T2), 0.25);
        // Cap so the kinetic-phase oscillation |y3 - y2| sqrt(2) sigma / T at
        // the farthest grid point stays resolvable by n nodes.
        double y_far = 0.0;
        auto spread = [&](const Axis& ax, const OneParticleState& sp) {
            for (int h = 0; h < sp.hump_count(); ++h) {
                y_far = std::max(y_far, std::abs(ax.min - sp.hump_center(h)));
                y_far = std::max(y_far, std::abs(ax.max() - sp.hump_center(h)));
            }
        };
        spread(spec.final_axis_A, specA);
        spread(spec.final_axis_B, specB);
        const double freq_cap = 1.24 * spec.omegaT * std::sqrt(double(nodes)) / y_far;
        // Keep the node range covering the hump: e^{-sigma^2 x_max^2} <~ 1e-9.
        sigma = std::max(std::min(saddle, freq_cap), 4.5 / x_max);
    }
    const QuadratureSet qa = build_quadrature(specA, gh, sigma);
    const QuadratureSet qb = build_quadrature(specB, gh, sigma);
    const Axis& axA = spec.final_axis_A;
    const Axis& axB = spec.final_axis_B;
    const double T = spec.omegaT;
    const auto& groups = spec.lagrangian.groups;
    const bool kepler = spec.trajectory_kind == TrajectoryKind::kepler_bvp;

    Eigen::MatrixXcd out(axA.n, axB.n);

    auto worker = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i) {
            const double y3a = axA.point(i);
            for (int j = 0; j < axB.n; ++j) {
                const double y3b = axB.point(j);
                std::complex<double> acc = 0.0;
                for (size_t ka = 0; ka < qa.y2.size(); ++ka) {
                    const double y2a = qa.y2[ka];
                    const double wa = qa.pref[ka];
                    for (size_t kb = 0; kb < qb.y2.size(); ++kb) {
                        const double y2b = qb.y2[kb];
                        double S;
                        if (!kepler) {
                            const auto trA = straight_line(y2a, y3a, 0.0, T);
                            const auto trB = straight_line(y2b, y3b, 0.0, T);
                            S = action_phase(trA, trB, spec.lagrangian).total;
                        } else {
                            const auto [trA, trB] =
                                solve_kepler_bvp(y2a, y3a, y2b, y3b, 0.0, T, groups);
                            S = action_phase(trA, trB, spec.lagrangian).total;
                        }
                        acc += wa * qb.pref[kb] * std::polar(1.0, S);
                    }
                }
                out(i, j) = acc;
            }
        }
    };

    if (threads <= 1) {
        worker(0, axA.n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (axA.n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(axA.n, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace

BipartiteWavefunction evolve_stationary_phase(const OneParticleState& specA,
                                              const OneParticleState& specB,
                                              const EvolutionSpec& spec,
                                              int threads) {
    if (spec.quadrature_nodes < 16)
        throw std::invalid_argument("evolve_stationary_phase: need >= 16 quadrature nodes");
    if (!(spec.omegaT > 0.0))
        throw std::invalid_argument("evolve_stationary_phase: omegaT must be positive");
    check_span(spec.final_axis_A, specA, spec.omegaT, "A");
    check_span(spec.final_axis_B, specB, spec.omegaT, "B");

    Eigen::MatrixXcd amp =
        stationary_phase_grid(specA, specB, spec, spec.quadrature_nodes, threads);

    if (spec.convergence_check_tolerance > 0.0) {
        const Eigen::MatrixXcd fine =
            stationary_phase_grid(specA, specB, spec, 2 * spec.quadrature_nodes, threads);
        const double scale = amp.cwiseAbs().maxCoeff();
        for (int i = 0; i < amp.rows(); ++i) {
            for (int j = 0; j < amp.cols(); ++j) {
                if (std::abs(amp(i, j) - fine(i, j)) >
                    spec.convergence_check_tolerance * scale) {
                    std::ostringstream msg;
                    msg << "evolve_stationary_phase: quadrature not converged at grid "
                           "point ("
                        << i << ", " << j << "): node-doubling change "
                        << std::abs(amp(i, j) - fine(i, j)) / scale << " relative";
                    throw std::runtime_error(msg.str());
                }
            }
        }
    }

    BipartiteWavefunction psi;
    psi.axis_A = spec.final_axis_A;
    psi.axis_B = spec.final_axis_B;
    psi.amplitudes = std::move(amp);

    // Global-phase removal keyed to the largest amplitude: stable fixtures.
    int imax = 0, jmax = 0;
    psi.amplitudes.cwiseAbs().maxCoeff(&imax, &jmax);
    const std::complex<double> peak = psi.amplitudes(imax, jmax);
    if (std::abs(peak) > 0.0) psi.amplitudes *= std::conj(peak) / std::abs(peak);

    return normalize(psi);
}

BipartiteWavefunction evolve_split_step(const BipartiteWavefunction& psi2,
                                        PotentialKind potential, int steps,
                                        double omegaT,
                                        const DimensionlessGroups& groups) {
    if (steps < 1) throw std::invalid_argument("evolve_split_step: steps must be >= 1");
    const double hA = psi2.axis_A.step, hB = psi2.axis_B.step;
    if (hA > 0.125 + 1e-12 || hB > 0.125 + 1e-12) {
        std::ostringstream msg;
        msg << "evolve_split_step: grid spacing (" << hA << ", " << hB
            << ") too coarse; need <= 0.125 (alpha units) to resolve the packets";
        throw std::invalid_argument(msg.str());
    }

    const int nA = psi2.axis_A.n, nB = psi2.axis_B.n;
    const double dt = omegaT / steps;
    const double eps = groups.epsilon;
    const double phi = groups.phi;

    // Potential phase over half a step, e^{-i V dt/2}.
    Eigen::MatrixXcd vhalf(nA, nB);
    for (int i = 0; i < nA; ++i) {
        const double ya = psi2.axis_A.point(i);
        for (int j = 0; j < nB; ++j) {
            const double s = ya + psi2.axis_B.point(j);
            const double V = potential == PotentialKind::expanded_second_order
                                 ? -phi * (eps * eps * s * s - eps * s + 1.0)
                                 : -phi / (1.0 + eps * s);
            vhalf(i, j) = std::polar(1.0, -V * dt / 2.0);
        }
    }

    // Kinetic phase over a full step in momentum space, e^{-i (kA^2+kB^2) dt/2}.
    auto wavenumbers = [](const Axis& ax) {
        std::vector<double> k(ax.n);
        for (int i = 0; i < ax.n; ++i) {
            const int f = i < (ax.n + 1) / 2 ? i : i - ax.n;
            k[i] = 2.0 * M_PI * f / (ax.n * ax.step);
        }
        return k;
    };
    const auto kA = wavenumbers(psi2.axis_A);
    const auto kB = wavenumbers(psi2.axis_B);
    Eigen::MatrixXcd kin(nA, nB);
    for (int i = 0; i < nA; ++i)
        for (int j = 0; j < nB; ++j)
            kin(i, j) = std::polar(1.0, -(kA[i] * kA[i] + kB[j] * kB[j]) * dt / 2.0);

    // FFTW works row-major; Eigen is column-major by default, so transpose the
    // index roles: treat (i, j) as FFTW (row, col) via an explicit buffer.
    std::vector<std::complex<double>> buf(static_cast<size_t>(nA) * nB);
    auto at = [&](int i, int j) -> std::complex<double>& {
        return buf[static_cast<size_t>(i) * nB + j];
    };
    for (int i = 0; i < nA; ++i)
        for (int j = 0; j < nB; ++j) at(i, j) = psi2.amplitudes(i, j);

    fftw_complex* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd = fftw_plan_dft_2d(nA, nB, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_2d(nA, nB, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    const double fft_norm = 1.0 / (static_cast<double>(nA) * nB);

    for (int step = 0; step < steps; ++step) {
        for (int i = 0; i < nA; ++i)
            for (int j = 0; j < nB; ++j) at(i, j) *= vhalf(i, j);
        fftw_execute(fwd);
        for (int i = 0; i < nA; ++i)
            for (int j = 0; j < nB; ++j) at(i, j) *= kin(i, j) * fft_norm;
        fftw_execute(bwd);
        for (int i = 0; i < nA; ++i)
            for (int j = 0; j < nB; ++j) at(i, j) *= vhalf(i, j);
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);

    BipartiteWavefunction out;
    out.axis_A = psi2.axis_A;
    out.axis_B = psi2.axis_B;
    out.norm_tolerance = psi2.norm_tolerance;
    out.amplitudes.resize(nA, nB);
    for (int i = 0; i < nA; ++i)
        for (int j = 0; j < nB; ++j) out.amplitudes(i, j) = at(i, j);
    // Returned without renormalization: the norm drift diagnoses the method.
    return out;
}

}  // namespace gme
