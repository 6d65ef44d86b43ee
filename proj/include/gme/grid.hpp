#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>

namespace gme {

/// Uniform 1-D axis; grid points are cell midpoints: point(i) = min + (i+1/2) step.
struct Axis {
    double min = 0.0;
    double step = 0.0;
    int n = 0;

    double point(int i) const { return min + (i + 0.5) * step; }
    double max() const { return min + n * step; }

    bool operator==(const Axis&) const = default;
};

Axis make_axis(double lo, double hi, int n);

/// Two-particle state on an N_A x N_B uniform grid. Rows index particle A,
/// columns particle B. Integrals over the grid are midpoint Riemann sums with
/// measure step_A * step_B.
struct BipartiteWavefunction {
    Eigen::MatrixXcd amplitudes;
    Axis axis_A;
    Axis axis_B;
    double norm_tolerance = 1e-6;

    double squared_norm() const;  // sum |psi|^2 dA dB, compensated fixed-order sum
};

/// Rescales to unit norm under the grid measure. Throws std::domain_error on
/// (numerically) zero input.
BipartiteWavefunction normalize(const BipartiteWavefunction& psi);

/// |<psi|psi'>| under the grid measure; both inputs must be normalized and on
/// identical axes (throws std::invalid_argument on mismatch).
double fidelity(const BipartiteWavefunction& a, const BipartiteWavefunction& b);

// Binary serialization: fixed header (magic "GMEGRID1", axis metadata as
// int64/double fields) followed by row-major (re, im) double pairs.
void save_grid_state(const BipartiteWavefunction& psi, std::ostream& out);
BipartiteWavefunction load_grid_state(std::istream& in);
void save_grid_state_file(const BipartiteWavefunction& psi, const std::string& path);
BipartiteWavefunction load_grid_state_file(const std::string& path);

/// CSV dump: header comment, then rows "iA,iB,yA,yB,re,im".
void save_grid_state_csv(const BipartiteWavefunction& psi, std::ostream& out);

}  // namespace gme
