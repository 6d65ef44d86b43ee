#pragma once

#include "gme/dynamics.hpp"
#include "gme/grid.hpp"
#include "gme/params.hpp"

namespace gme {

// The single-particle wavefunctions and both evolvers work in the same
// dimensionless units as dynamics: positions in alpha, times in 1/omega.
// Each particle's packet is centered at 0 on its own axis; the two-Gaussian
// humps sit at +-xi/2 with unit width.

enum class PacketKind { single_gaussian, two_gaussians };

struct OneParticleState {
    PacketKind kind = PacketKind::single_gaussian;
    double xi = 0.0;  // hump separation in widths; ignored for single_gaussian

    // Unnormalized packet amplitude at dimensionless position y.
    double amplitude(double y) const;
    int hump_count() const { return kind == PacketKind::two_gaussians ? 2 : 1; }
    double hump_center(int h) const;
};

struct EvolutionSpec {
    double omegaT = 1.0;
    LagrangianConfig lagrangian;
    TrajectoryKind trajectory_kind = TrajectoryKind::straight_line;
    int quadrature_nodes = 64;  // Gauss-Hermite nodes per hump, >= 16
    // Node spread relative to the hump width; 0 selects the saddle-width
    // matched value 0.85 (omegaT^2/(1+omegaT^2))^{1/4}, which keeps the
    // kinetic-phase oscillation resolvable at 64 nodes down to omegaT ~ 0.5.
    double hump_width_scale = 0.0;
    Axis final_axis_A;
    Axis final_axis_B;
    // When > 0, the whole final grid is recomputed with doubled node count and
    // any point whose amplitude moved by more than this tolerance (relative to
    // the state's max amplitude) triggers a diagnostic.
    double convergence_check_tolerance = 0.0;
};

/// Final-grid axis wide enough for a packet spread over omegaT:
/// +-(xi/2 + 4 + 4 omegaT) in units of alpha.
Axis default_final_axis(double xi, double omegaT, int n);

/// Normalized product state psi2 = psi2_A psi2_B sampled on the given axes.
/// Throws std::domain_error when the grid is too small to hold the packets
/// (probability mass outside the grid above 1e-8).
BipartiteWavefunction initial_state(const OneParticleState& specA,
                                    const OneParticleState& specB,
                                    const Axis& axisA, const Axis& axisB);

/// Stationary-phase evolution: for each final grid point pair,
///   psi3(y3A, y3B) = int dy2A dy2B e^{i S} psi2(y2A) psi2(y2B)
/// with S the on-shell action of the boundary-pinned classical trajectories.
/// The inner integral is Gauss-Hermite quadrature with one node set per
/// Gaussian hump. Output is normalized with the global phase of its largest
/// amplitude removed. Each output point is computed independently, so the
/// result is bit-identical for any thread count.
BipartiteWavefunction evolve_stationary_phase(const OneParticleState& specA,
                                              const OneParticleState& specB,
                                              const EvolutionSpec& spec,
                                              int threads = 1);

enum class PotentialKind { expanded_second_order, full_inverse_separation };

/// Independent brute-force oracle: Strang-split Schrodinger evolution of the
/// two-particle Hamiltonian H = (pA^2 + pB^2)/2 + V(yA + yB), kinetic steps
/// spectral (FFT), with V the expanded potential -phi (eps^2 s^2 - eps s + 1)
/// or the full -phi / (1 + eps s). Requires grid spacing <= 1/8 (alpha units);
/// refuses otherwise with the required spacing in the message.
BipartiteWavefunction evolve_split_step(const BipartiteWavefunction& psi2,
                                        PotentialKind potential, int steps,
                                        double omegaT,
                                        const DimensionlessGroups& groups);

}  // namespace gme
