#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gme {

/// Thrown when a physical input violates its positivity/finiteness contract.
class invalid_parameter : public std::invalid_argument {
  public:
    explicit invalid_parameter(const std::string& field)
        : std::invalid_argument("invalid parameter: " + field), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// Physical inputs in SI (or any consistent unit system).
struct ExperimentParams {
    double m;      // mass of each particle
    double d;      // center-of-mass separation
    double alpha;  // Gaussian width of each hump
    double beta;   // separation between the two humps (>= 0)
    double T;      // interaction duration
    double G;      // gravitational constant
    double hbar;   // reduced Planck constant
    double c;      // speed of light

    // Nominal frequency of the harmonic trap whose ground state has width alpha.
    double omega() const { return hbar / (m * alpha * alpha); }

    void validate() const;
};

/// The dimensionless groups every physics kernel consumes.
///   phi    = G m^2 / (hbar omega d)   gravitational strength
///   eps    = alpha / d                relative quantum spread
///   xi     = beta / alpha             path separation in widths
///   Omega  = omega d / c              retardation strength
///   omegaT = omega T                  dimensionless duration
struct DimensionlessGroups {
    double phi;
    double epsilon;
    double xi;
    double Omega;
    double omegaT;

    void validate() const;
};

DimensionlessGroups derive_groups(const ExperimentParams& params);

struct RegimeThresholds {
    double warn_above = 0.1;
};

struct RegimeCheck {
    std::string assumption;  // e.g. "epsilon << 1"
    double value;
    bool pass;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    bool all_pass() const;
};

/// Checks the small-parameter assumptions the closed forms rely on
/// (eps, eps*xi, Omega, eps*omegaT all small). Reporting only, never throws.
RegimeReport validate_regime(const DimensionlessGroups& groups,
                             const RegimeThresholds& thresholds = {});

}  // namespace gme
