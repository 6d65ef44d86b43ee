#pragma once

#include <optional>
#include <string>

#include "gme/params.hpp"

namespace gme {

// The shape functions entering the unified entanglement formula, x = beta/alpha.
// All three tend to 1 both as x -> 0 and as x -> infinity. Evaluation is
// overflow-safe for every x >= 0: past x^2 = 500 the exponentials are factored
// out so that only decaying terms remain.
double f0(double x);
double f2(double x);
double f4(double x);

enum class Formula {
    unified,
    path_limit,
    oscillator_limit,
    oscillator_large_omegaT,
    relativistic_corrected,
};

std::string to_string(Formula f);

struct ClosedFormResult {
    double value = 0.0;  // dimensionless entanglement E >= 0
    Formula formula = Formula::unified;
    // Signed corrections, populated only for relativistic_corrected.
    std::optional<double> correction;               // general-omegaT form
    std::optional<double> correction_large_omegaT;  // -(3/2)(d/cT)^2 E form
};

// Unified two-Gaussian formula. Written fully dimensionless: the bracket of
// the dimensional expression is divided by alpha^4, so that
//   E = 2 phi omegaT eps^2 sqrt( xi^4/4 + xi^2 (1 + omegaT^2/4)
//                                + f0(xi) + f2(xi) omegaT^2/3 + f4(xi) omegaT^4/9 ).
// This is an exact rewriting: beta^4/alpha^4 = xi^4, alpha^2 beta^2/alpha^4 = xi^2,
// and the remaining alpha^4 cancels against the f-terms; the overall
// (2 G m^2 T / hbar d)(1/d^2) alpha^2 prefactor is 2 phi omega T eps^2.
ClosedFormResult entanglement_unified(const DimensionlessGroups& groups);

// Path-protocol limit (beta >> alpha): E = phi omegaT (eps xi)^2.
ClosedFormResult entanglement_path_limit(const DimensionlessGroups& groups);

// Oscillator limit (beta << alpha): E = 2 phi omegaT eps^2 sqrt(1 + omegaT^2/3 + omegaT^4/9).
ClosedFormResult entanglement_oscillator_limit(const DimensionlessGroups& groups);

// Large-omegaT oscillator limit: E = (2/3) phi omegaT (eps omegaT)^2.
ClosedFormResult entanglement_oscillator_large_omegaT(const DimensionlessGroups& groups);

/// Thrown when a closed form is requested outside its regime of validity.
class unsupported_regime : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Leading relativistic correction for the single-Gaussian case (xi must be 0).
// value = E_oscillator + dE_general with
//   dE_general = -(1/2) Omega^2 phi omegaT 2 eps^2 (omegaT^2/3 - 1)
//                / sqrt(1 + omegaT^2/3 + omegaT^4/9),
// and the large-omegaT form dE = -(3/2) (Omega/omegaT)^2 E_large is reported
// alongside for comparison.
ClosedFormResult relativistic_correction(const DimensionlessGroups& groups);

}  // namespace gme
