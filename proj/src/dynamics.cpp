#include "gme/dynamics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gme {

namespace {

// sinh(ku)/k and (cosh(ku)-1)/k^2, series-stable through k = 0.
double sh_over_k(double k, double u) {
    const double z = k * u;
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return u * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
    }
    return std::sinh(z) / k;
}

double coshm1_over_k2(double k, double u) {
    const double z = k * u;
    if (std::abs(z) < 1e-2) {
        const double z2 = z * z;
        return 0.5 * u * u * (1.0 + z2 / 12.0 + z2 * z2 / 360.0);
    }
    return (std::cosh(z) - 1.0) / (k * k);
}

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
template <int N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= N; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                pp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = -x;
            nodes[N - 1 - i] = x;
            weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }
};

const GaussLegendre<32>& gl32() {
    static const GaussLegendre<32> table;
    return table;
}

}  // namespace

double Trajectory::position(double t) const {
    const double u = t - t_initial;
    return c_const + c_lin * u + c_cosh * std::cosh(k * u) +
           c_sinh * sh_over_k(k, u) + c_quad * coshm1_over_k2(k, u);
}

double Trajectory::velocity(double t) const {
    const double u = t - t_initial;
    return c_lin + c_cosh * k * k * sh_over_k(k, u) +
           c_sinh * std::cosh(k * u) + c_quad * sh_over_k(k, u);
}

double Trajectory::acceleration(double t) const {
    const double u = t - t_initial;
    return (c_cosh * k * k + c_quad) * std::cosh(k * u) +
           c_sinh * k * k * sh_over_k(k, u);
}

Trajectory straight_line(double y_i, double y_f, double t_i, double t_f) {
    if (!(t_f > t_i)) throw std::invalid_argument("straight_line: zero or negative duration");
    Trajectory tr;
    tr.y_initial = y_i;
    tr.y_final = y_f;
    tr.t_initial = t_i;
    tr.t_final = t_f;
    tr.kind = TrajectoryKind::straight_line;
    tr.c_const = y_i;
    tr.c_lin = (y_f - y_i) / (t_f - t_i);
    return tr;
}

std::pair<Trajectory, Trajectory> solve_kepler_bvp(double yA_i, double yA_f,
                                                   double yB_i, double yB_f,
                                                   double t_i, double t_f,
                                                   const DimensionlessGroups& groups) {
    if (!(t_f > t_i)) throw std::invalid_argument("solve_kepler_bvp: zero or negative duration");
    const double T = t_f - t_i;
    const double eps = groups.epsilon;
    const double phi = groups.phi;

    // Normal modes: s = q1 + q2 obeys s'' = k^2 s + b; r = q1 - q2 is free.
    const double k = 2.0 * eps * std::sqrt(phi);
    const double b = -2.0 * phi * eps;
    const double s0 = yA_i + yB_i;
    const double sT = yA_f + yB_f;
    const double r0 = yA_i - yB_i;
    const double vr = (yA_f - yB_f - r0) / T;

    const double shT = sh_over_k(k, T);
    const double vs0 = (sT - s0 * std::cosh(k * T) - b * coshm1_over_k2(k, T)) / shT;
    if (!std::isfinite(vs0))
        throw std::runtime_error("solve_kepler_bvp: ill-conditioned boundary solve");

    auto make = [&](double sign_r, double y_i, double y_f) {
        Trajectory tr;
        tr.y_initial = y_i;
        tr.y_final = y_f;
        tr.t_initial = t_i;
        tr.t_final = t_f;
        tr.kind = TrajectoryKind::kepler_bvp;
        tr.k = k;
        tr.c_const = sign_r * r0 / 2.0;
        tr.c_lin = sign_r * vr / 2.0;
        tr.c_cosh = s0 / 2.0;
        tr.c_sinh = vs0 / 2.0;
        tr.c_quad = b / 2.0;
        return tr;
    };
    return {make(+1.0, yA_i, yA_f), make(-1.0, yB_i, yB_f)};
}

namespace {

struct LagrangianParts {
    double kinetic = 0.0;
    double gravitational = 0.0;
    double retardation = 0.0;
    double kinetic_gravitating = 0.0;
};

// Expanded Lagrangian density L/(hbar omega) at dimensionless time t.
LagrangianParts lagrangian_density(const Trajectory& a, const Trajectory& bTraj,
                                   const LagrangianConfig& cfg, double t) {
    const double eps = cfg.groups.epsilon;
    const double phi = cfg.groups.phi;
    const double Om = cfg.groups.Omega;
    const double q1 = a.position(t), q2 = bTraj.position(t);
    const double v1 = a.velocity(t), v2 = bTraj.velocity(t);
    const double s = q1 + q2;

    LagrangianParts p;
    p.kinetic = 0.5 * (v1 * v1 + v2 * v2);
    p.gravitational = phi * (eps * eps * s * s - eps * s + 1.0);

    if (cfg.order_Omega == 2) {
        const double Om2 = Om * Om;
        p.kinetic += Om2 * eps * eps * (v1 * v1 * v1 * v1 + v2 * v2 * v2 * v2) / 8.0;

        const double a1 = a.acceleration(t), a2 = bTraj.acceleration(t);
        const double ret = cfg.ret;
        // ret^2 and ret terms of the expanded gravitational Lagrangian.
        p.retardation =
            ret * ret * Om2 * phi *
                (0.5 * eps * (a1 + a2) + eps * eps * (-2.0 * v1 * v2 + v1 * v1 + v2 * v2)) +
            ret * Om2 * phi *
                (-0.25 * eps * (a1 + a2) + eps * eps * (v1 * v2 - 0.5 * (v1 * v1 + v2 * v2)));

        p.kinetic_gravitating =
            cfg.kin * Om2 * eps * eps * phi * (-4.0 * v1 * v2 + 1.5 * (v1 * v1 + v2 * v2));
    }
    return p;
}

ActionPhase straight_line_action(const Trajectory& a, const Trajectory& bTraj,
                                 const LagrangianConfig& cfg) {
    const double eps = cfg.groups.epsilon;
    const double phi = cfg.groups.phi;
    const double Om = cfg.groups.Omega;
    const double T = a.duration();
    const double va = a.c_lin, vb = bTraj.c_lin;
    const double s0 = a.y_initial + bTraj.y_initial;
    const double vs = va + vb;

    ActionPhase S;
    S.kinetic_part = 0.5 * (va * va + vb * vb) * T;
    // int s dt and int s^2 dt for linear s(t) = s0 + vs t.
    const double int_s = s0 * T + 0.5 * vs * T * T;
    const double int_s2 = s0 * s0 * T + s0 * vs * T * T + vs * vs * T * T * T / 3.0;
    S.gravitational_part = phi * (eps * eps * int_s2 - eps * int_s + T);

    if (cfg.order_Omega == 2) {
        const double Om2 = Om * Om;
        S.kinetic_part += Om2 * eps * eps * (va * va * va * va + vb * vb * vb * vb) / 8.0 * T;
        const double ret = cfg.ret;
        // q'' = 0 on straight lines; only the velocity terms survive.
        S.retardation_part =
            (ret * ret * (-2.0 * va * vb + va * va + vb * vb) +
             ret * (va * vb - 0.5 * (va * va + vb * vb))) * Om2 * phi * eps * eps * T;
        S.kinetic_gravitating_part =
            cfg.kin * Om2 * eps * eps * phi * (-4.0 * va * vb + 1.5 * (va * va + vb * vb)) * T;
        if (Om > 0.0 && eps > 0.0)
            S.constant_part = -2.0 * T / (Om2 * eps * eps);
    }
    S.total = S.kinetic_part + S.gravitational_part + S.retardation_part +
              S.kinetic_gravitating_part;
    return S;
}

}  // namespace

ActionPhase action_phase(const Trajectory& trajA, const Trajectory& trajB,
                         const LagrangianConfig& config) {
    const double T = trajA.duration();
    const double tol = 1e-12 * std::max(1.0, std::abs(T));
    if (std::abs(trajA.t_initial - trajB.t_initial) > tol ||
        std::abs(trajA.t_final - trajB.t_final) > tol)
        throw std::invalid_argument("action_phase: trajectories on mismatched intervals");

    if (trajA.kind == TrajectoryKind::straight_line &&
        trajB.kind == TrajectoryKind::straight_line)
        return straight_line_action(trajA, trajB, config);

    const auto& gl = gl32();
    ActionPhase S;
    for (int i = 0; i < 32; ++i) {
        const double t = trajA.t_initial + 0.5 * T * (gl.nodes[i] + 1.0);
        const double w = 0.5 * T * gl.weights[i];
        const auto p = lagrangian_density(trajA, trajB, config, t);
        S.kinetic_part += w * p.kinetic;
        S.gravitational_part += w * p.gravitational;
        S.retardation_part += w * p.retardation;
        S.kinetic_gravitating_part += w * p.kinetic_gravitating;
    }
    if (config.order_Omega == 2 && config.groups.Omega > 0.0 && config.groups.epsilon > 0.0)
        S.constant_part = -2.0 * T / (config.groups.Omega * config.groups.Omega *
                                      config.groups.epsilon * config.groups.epsilon);
    S.total = S.kinetic_part + S.gravitational_part + S.retardation_part +
              S.kinetic_gravitating_part;
    return S;
}

double retarded_time(const Trajectory& traj_a, const Trajectory& traj_b,
                     double t, const DimensionlessGroups& groups) {
    const double Om = groups.Omega;
    if (Om == 0.0) return t;  // instantaneous limit
    const double eps = groups.epsilon;

    const double qa = traj_a.position(t);
    const double va = traj_a.velocity(t);
    const double aa = traj_a.acceleration(t);
    const double qb = traj_b.position(t);

    // Delta = Omega (1 + eps q_a(t - Delta) + eps q_b(t)), q_a expanded to
    // second order in Delta: A Delta^2 - B Delta + C = 0.
    const double A = 0.5 * eps * Om * aa;
    const double B = 1.0 + eps * Om * va;
    const double C = Om * (1.0 + eps * (qa + qb));

    double delta;
    if (A == 0.0) {
        if (B <= 0.0) throw std::domain_error("retarded_time: no past root (B <= 0)");
        delta = C / B;
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0)
            throw std::domain_error("retarded_time: no real past root in expansion range");
        const double sq = std::sqrt(disc);
        const double small = 2.0 * C / (B + sq);  // stable form of (B - sq)/(2A)
        const double other = (B + sq) / (2.0 * A);
        // Smallest positive root = past light cone.
        delta = std::numeric_limits<double>::infinity();
        if (small > 0.0) delta = small;
        if (other > 0.0 && other < delta) delta = other;
        if (!std::isfinite(delta))
            throw std::domain_error("retarded_time: no positive root (past light cone)");
    }
    return t - delta;
}

}  // namespace gme
