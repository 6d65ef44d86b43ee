#include "gme/params.hpp"

#include <cmath>

namespace gme {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw invalid_parameter(name);
}

}  // namespace

void ExperimentParams::validate() const {
    require_positive(m, "m");
    require_positive(d, "d");
    require_positive(alpha, "alpha");
    require_positive(T, "T");
    require_positive(G, "G");
    require_positive(hbar, "hbar");
    require_positive(c, "c");
    if (beta < 0.0 || !std::isfinite(beta)) throw invalid_parameter("beta");
    if (!std::isfinite(omega()) || !(omega() > 0.0)) throw invalid_parameter("omega");
}

void DimensionlessGroups::validate() const {
    require_positive(phi, "phi");
    require_positive(epsilon, "epsilon");
    require_positive(Omega + 1.0, "Omega");  // Omega >= 0 allowed (instantaneous limit)
    if (Omega < 0.0 || !std::isfinite(Omega)) throw invalid_parameter("Omega");
    if (xi < 0.0 || !std::isfinite(xi)) throw invalid_parameter("xi");
    require_positive(omegaT, "omegaT");
}

DimensionlessGroups derive_groups(const ExperimentParams& params) {
    params.validate();
    const double omega = params.omega();
    DimensionlessGroups g;
    g.phi = params.G * params.m * params.m / (params.hbar * omega * params.d);
    g.epsilon = params.alpha / params.d;
    g.xi = params.beta / params.alpha;
    g.Omega = omega * params.d / params.c;
    g.omegaT = omega * params.T;
    return g;
}

bool RegimeReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

RegimeReport validate_regime(const DimensionlessGroups& groups,
                             const RegimeThresholds& thresholds) {
    RegimeReport report;
    const double warn = thresholds.warn_above;
    auto add = [&](const char* name, double value) {
        report.checks.push_back({name, value, value <= warn});
    };
    add("epsilon << 1", groups.epsilon);
    add("epsilon*xi << 1", groups.epsilon * groups.xi);
    add("Omega << 1", groups.Omega);
    // Spread growth: the packet width reaches alpha sqrt(1 + omegaT^2), which
    // must stay small relative to d.
    add("epsilon*omegaT << 1", groups.epsilon * groups.omegaT);
    return report;
}

}  // namespace gme
