#pragma once

#include <optional>
#include <vector>

#include "gme/grid.hpp"

namespace gme {

enum class EntanglementMethod { quadrature, schmidt };

/// Generalized concurrence E of a normalized pure bipartite state,
/// E^2 = 2 - 2 Tr rho_A^2.
struct EntanglementResult {
    double value = 0.0;
    EntanglementMethod method = EntanglementMethod::quadrature;
    double purity = 1.0;  // Tr rho_A^2
    std::optional<std::vector<double>> schmidt_spectrum;
};

/// Direct evaluation of
///   E^2 = 2 - 2 int dy1 dy1' | int dy2 psi(y1,y2) psi*(y1',y2) |^2
/// as midpoint Riemann sums. Compensated summation in a fixed reduction order.
EntanglementResult measure_quadrature(const BipartiteWavefunction& psi);

/// Equivalent evaluation via the Schmidt decomposition: singular values of the
/// amplitude matrix scaled by sqrt(dyA dyB) give weights lambda_i = sigma_i^2,
/// purity = sum lambda_i^2. Populates schmidt_spectrum (nonincreasing).
EntanglementResult measure_schmidt(const BipartiteWavefunction& psi);

}  // namespace gme
