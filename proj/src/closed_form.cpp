#include "gme/closed_form.hpp"

#include <cmath>

namespace gme {

namespace {

void require_nonnegative_x(double x) {
    if (x < 0.0 || !std::isfinite(x))
        throw std::domain_error("f-functions: x = beta/alpha must be >= 0");
}

// e^{x^2/2} overflows double precision near x = 37.6; past x^2 = 500 the
// leading exponential is factored out of numerator and denominator, leaving
// only decaying terms.
constexpr double kFactoredFormThreshold = 500.0;

}  // namespace

double f0(double x) {
    require_nonnegative_x(x);
    const double x2 = x * x;
    const double x4 = x2 * x2;
    if (x2 > kFactoredFormThreshold) {
        const double eu = std::exp(-x2 / 4.0);   // e^{-x^2/4}
        const double e2u = std::exp(-x2 / 2.0);  // e^{-x^2/2}
        const double num = 4.0 + (-x4 - 4.0 * x2 + 4.0) * e2u - 2.0 * (x4 + 2.0 * x2 - 4.0) * eu;
        const double den = 4.0 * (1.0 + eu) * (1.0 + eu);
        return num / den;
    }
    const double eu = std::exp(x2 / 4.0);
    const double num = -x4 - 4.0 * x2 + 4.0 * eu * eu - 2.0 * eu * (x4 + 2.0 * x2 - 4.0) + 4.0;
    const double den = 4.0 * (eu + 1.0) * (eu + 1.0);
    return num / den;
}

double f2(double x) {
    require_nonnegative_x(x);
    const double x2 = x * x;
    const double x4 = x2 * x2;
    if (x2 > kFactoredFormThreshold) {
        const double eu = std::exp(-x2 / 4.0);
        const double e2u = std::exp(-x2 / 2.0);
        const double num = 8.0 + (8.0 - 12.0 * x2) * e2u + (-3.0 * x4 - 12.0 * x2 + 16.0) * eu;
        const double den = 8.0 * (1.0 + eu) * (1.0 + eu);
        return num / den;
    }
    const double eu = std::exp(x2 / 4.0);
    const double num = -12.0 * x2 + 8.0 * eu * eu + (-3.0 * x4 - 12.0 * x2 + 16.0) * eu + 8.0;
    const double den = 8.0 * (eu + 1.0) * (eu + 1.0);
    return num / den;
}

double f4(double x) {
    require_nonnegative_x(x);
    const double x2 = x * x;
    if (x2 > kFactoredFormThreshold) {
        const double eu = std::exp(-x2 / 4.0);
        const double num = (-x2 / 2.0 + 1.0) * eu + 1.0;
        const double den = 1.0 + eu;
        return (num / den) * (num / den);
    }
    const double eu = std::exp(x2 / 4.0);
    const double num = -x2 / 2.0 + eu + 1.0;
    const double den = eu + 1.0;
    return (num / den) * (num / den);
}

std::string to_string(Formula f) {
    switch (f) {
        case Formula::unified: return "unified";
        case Formula::path_limit: return "path_limit";
        case Formula::oscillator_limit: return "oscillator_limit";
        case Formula::oscillator_large_omegaT: return "oscillator_large_omegaT";
        case Formula::relativistic_corrected: return "relativistic_corrected";
    }
    return "unknown";
}

ClosedFormResult entanglement_unified(const DimensionlessGroups& g) {
    g.validate();
    const double xi = g.xi;
    const double wt = g.omegaT;
    const double bracket = 0.25 * xi * xi * xi * xi +
                           xi * xi * (1.0 + 0.25 * wt * wt) +
                           f0(xi) + f2(xi) * wt * wt / 3.0 +
                           f4(xi) * wt * wt * wt * wt / 9.0;
    ClosedFormResult r;
    r.formula = Formula::unified;
    r.value = 2.0 * g.phi * wt * g.epsilon * g.epsilon * std::sqrt(bracket);
    return r;
}

ClosedFormResult entanglement_path_limit(const DimensionlessGroups& g) {
    g.validate();
    const double ex = g.epsilon * g.xi;  // beta/d
    ClosedFormResult r;
    r.formula = Formula::path_limit;
    r.value = g.phi * g.omegaT * ex * ex;
    return r;
}

namespace {

double oscillator_amplification(double wt) {
    return std::sqrt(1.0 + wt * wt / 3.0 + wt * wt * wt * wt / 9.0);
}

}  // namespace

ClosedFormResult entanglement_oscillator_limit(const DimensionlessGroups& g) {
    g.validate();
    ClosedFormResult r;
    r.formula = Formula::oscillator_limit;
    r.value = 2.0 * g.phi * g.omegaT * g.epsilon * g.epsilon * oscillator_amplification(g.omegaT);
    return r;
}

ClosedFormResult entanglement_oscillator_large_omegaT(const DimensionlessGroups& g) {
    g.validate();
    const double ewt = g.epsilon * g.omegaT;
    ClosedFormResult r;
    r.formula = Formula::oscillator_large_omegaT;
    r.value = (2.0 / 3.0) * g.phi * g.omegaT * ewt * ewt;
    return r;
}

ClosedFormResult relativistic_correction(const DimensionlessGroups& g) {
    g.validate();
    if (g.xi != 0.0)
        throw unsupported_regime(
            "relativistic correction is only available for the single-Gaussian "
            "case (xi = 0)");
    const double wt = g.omegaT;
    const double base_general = entanglement_oscillator_limit(g).value;
    const double delta_general = -0.5 * g.Omega * g.Omega *
                                 2.0 * g.phi * wt * g.epsilon * g.epsilon *
                                 (wt * wt / 3.0 - 1.0) / oscillator_amplification(wt);
    // d/(c T) = Omega / omegaT in dimensionless units.
    const double d_over_cT = g.Omega / wt;
    const double delta_large = -1.5 * d_over_cT * d_over_cT *
                               entanglement_oscillator_large_omegaT(g).value;
    ClosedFormResult r;
    r.formula = Formula::relativistic_corrected;
    r.value = base_general + delta_general;
    r.correction = delta_general;
    r.correction_large_omegaT = delta_large;
    return r;
}

}  // namespace gme
