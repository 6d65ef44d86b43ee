#pragma once

#include <utility>

#include "gme/params.hpp"

namespace gme {

// Everything in this module is dimensionless: positions in units of alpha,
// times in units of 1/omega. The two particles' coordinates q1, q2 follow the
// convention that their positive directions point away from each other, so
// the instantaneous separation is d (1 + eps (q1 + q2)).

enum class TrajectoryKind { straight_line, kepler_bvp };

/// Boundary-pinned classical path for one particle. The closed-form solution
/// is stored as coefficients of the basis {1, u, cosh(ku), sinh(ku)/k,
/// (cosh(ku)-1)/k^2} with u = t - t_initial; the last two are defined by their
/// series at k = 0, so straight lines are the k = 0 special case.
struct Trajectory {
    double y_initial = 0.0, y_final = 0.0;
    double t_initial = 0.0, t_final = 0.0;
    TrajectoryKind kind = TrajectoryKind::straight_line;

    double k = 0.0;
    double c_const = 0.0, c_lin = 0.0, c_cosh = 0.0, c_sinh = 0.0, c_quad = 0.0;

    double position(double t) const;
    double velocity(double t) const;
    double acceleration(double t) const;
    double duration() const { return t_final - t_initial; }
};

Trajectory straight_line(double y_i, double y_f, double t_i, double t_f);

/// Solves the boundary value problem of the expanded Newtonian two-body
/// Lagrangian (linear ODEs with constant forcing):
///   q1'' = q2'' = phi (2 eps^2 s - eps),  s = q1 + q2.
/// The normal modes are s (stiffness k^2 = 4 phi eps^2) and the free relative
/// coordinate q1 - q2. phi = 0 reduces to straight lines.
std::pair<Trajectory, Trajectory> solve_kepler_bvp(double yA_i, double yA_f,
                                                   double yB_i, double yB_f,
                                                   double t_i, double t_f,
                                                   const DimensionlessGroups& groups);

/// Bookkeeping flags selecting which relativistic contributions enter the
/// expanded Lagrangian. order_Omega = 0 forces the Newtonian Lagrangian.
struct LagrangianConfig {
    int ret = 0;  // retardation contributions (0 or 1)
    int kin = 0;  // kinetic energy / momentum gravitating (0 or 1)
    int order_Omega = 0;  // 0 or 2
    DimensionlessGroups groups;
};

/// On-shell action S/hbar split by origin. total is the sum of the four
/// dynamic parts. The rest-energy constant -2 omegaT/(Omega^2 eps^2) (present
/// only at order_Omega = 2) is a global phase many orders of magnitude larger
/// than the dynamic parts; it is reported in constant_part and kept out of
/// total so downstream phase differences retain full precision. The static
/// potential +phi omegaT is endpoint-independent too but harmless, and stays
/// inside gravitational_part.
struct ActionPhase {
    double total = 0.0;
    double kinetic_part = 0.0;
    double gravitational_part = 0.0;
    double retardation_part = 0.0;
    double kinetic_gravitating_part = 0.0;
    double constant_part = 0.0;
};

/// Integrates the expanded Lagrangian over the shared time interval of the two
/// trajectories. Straight-line integrands are polynomial and integrated in
/// closed form; curved trajectories use fixed 32-node Gauss-Legendre.
ActionPhase action_phase(const Trajectory& trajA, const Trajectory& trajB,
                         const LagrangianConfig& config);

/// Retarded time t_ab at which particle a's worldline crosses the past light
/// cone of particle b's event at time t, from the expanded quadratic in
/// Delta = t - t_ab:
///   Delta = Omega (1 + eps q_a(t - Delta) + eps q_b(t)),
/// with q_a Taylor-expanded to second order around t. Smallest positive root
/// (past light cone). Throws std::domain_error when no real past root exists.
double retarded_time(const Trajectory& traj_a, const Trajectory& traj_b,
                     double t, const DimensionlessGroups& groups);

}  // namespace gme
