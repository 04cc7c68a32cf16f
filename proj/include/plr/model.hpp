#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "plr/photometry.hpp"

namespace plr {

// Physiological pupil range; the open interval keeps atanh((D-4.9)/3) finite.
inline constexpr double kMinPupilMm = 1.9;
inline constexpr double kMaxPupilMm = 7.9;
// Luminance range the equilibrium fit is calibrated on.
inline constexpr double kMinLuminanceB = 1e-5;
inline constexpr double kMaxLuminanceB = 1e5;
// Retinal flux below which the pupil does not respond.
inline constexpr double kThresholdFluxLm = 4.8118e-10;
// Fit constants of the muscular-balance equation; kLn10 is the published rounding of ln(10).
inline constexpr double kFitOffset = 5.2;
inline constexpr double kFitSlope = 0.45;
inline constexpr double kLn10 = 2.3026;

inline void check_pupil_domain(double diameter_mm, const char* who) {
    if (!(diameter_mm > kMinPupilMm && diameter_mm < kMaxPupilMm))
        throw std::domain_error(std::string(who) + ": diameter outside (1.9, 7.9) mm");
}

inline void check_luminance_domain(double blondels, const char* who) {
    if (!(blondels >= kMinLuminanceB && blondels <= kMaxLuminanceB))
        throw std::domain_error(std::string(who) + ": luminance outside [1e-5, 1e5] B");
}

// Moon-Spencer equilibrium pupil diameter under adapting luminance.
inline double moon_spencer_diameter(Luminance l) {
    check_luminance_domain(l.blondels, "moon_spencer_diameter");
    return 4.9 - 3.0 * std::tanh(0.4 * (std::log10(l.blondels) - 0.5));
}

inline Luminance invert_moon_spencer(double diameter_mm) {
    check_pupil_domain(diameter_mm, "invert_moon_spencer");
    return {std::pow(10.0, 0.5 + std::atanh((4.9 - diameter_mm) / 3.0) / 0.4)};
}

// Latency between a retinal stimulus and the onset of iridal movement.
// R is the stimulus flicker frequency in Hz.
inline double latency_ms(FootLamberts l, double frequency_hz) {
    if (!(l.value > 0.0))
        throw std::domain_error("latency_ms: luminance must be positive");
    if (!(frequency_hz >= 0.0))
        throw std::domain_error("latency_ms: frequency must be non-negative");
    const double ln_l = std::log(l.value);
    return 253.0 - 14.0 * ln_l + 70.0 * frequency_hz - 29.0 * frequency_hz * ln_l;
}

// M(D): net muscular activity holding the pupil at diameter D.
inline double muscular_activity(double diameter_mm) {
    check_pupil_domain(diameter_mm, "muscular_activity");
    return std::atanh((diameter_mm - 4.9) / 3.0);
}

// dM/dD, analytic.
inline double muscular_activity_slope(double diameter_mm) {
    check_pupil_domain(diameter_mm, "muscular_activity_slope");
    const double d = diameter_mm - 4.9;
    return 3.0 / (9.0 - d * d);
}

// imbalance(D) = 2.3026 M(D) - [5.2 - 0.45 ln(phi(D)/phibar)]; strictly increasing in D,
// so its root is the equilibrium diameter.
inline double equilibrium_raw_diameter(Luminance l) {
    check_luminance_domain(l.blondels, "equilibrium_raw_diameter");
    const Illuminance illum = blondels_to_illuminance(l);
    const auto imbalance = [illum](double d) {
        const double drive = kFitOffset - kFitSlope * std::log(retinal_flux(illum, d).lumens / kThresholdFluxLm);
        return kLn10 * muscular_activity(d) - drive;
    };
    double lo = kMinPupilMm + 1e-9;
    double hi = kMaxPupilMm - 1e-9;
    if (!(imbalance(lo) < 0.0 && imbalance(hi) > 0.0))
        throw std::logic_error("equilibrium_raw_diameter: no sign change in bracket");
    for (int i = 0; i < 60; ++i) {  // final width 6*2^-60, far below the 1e-6 mm target
        const double mid = 0.5 * (lo + hi);
        (imbalance(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Envelope isocurves bounding individual variability; degree-5 fits, coefficients
// highest power first, kept verbatim from the published curves.
inline constexpr std::array<double, 6> kIsocurveTopCoeffs{-0.013, 0.322, -3.096, 13.655, -25.347, 18.179};
inline constexpr std::array<double, 6> kIsocurveBottomCoeffs{-5.442, 1.387, -1.343, 6.219, -1.317, 1.219};

// Horner evaluation, highest degree first.
inline double horner(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (const double c : coeffs) acc = acc * x + c;
    return acc;
}

inline double isocurve_top(double diameter_mm) {
    check_pupil_domain(diameter_mm, "isocurve_top");
    return horner(kIsocurveTopCoeffs, diameter_mm);
}

inline double isocurve_bottom(double diameter_mm) {
    check_pupil_domain(diameter_mm, "isocurve_bottom");
    return horner(kIsocurveBottomCoeffs, diameter_mm);
}

// Places a subject between the envelope curves: r_index 0 = bottom, 1 = top.
inline double apply_individuality(double raw_diameter_mm, double r_index) {
    if (!(r_index >= 0.0 && r_index <= 1.0))
        throw std::domain_error("apply_individuality: r_index outside [0, 1]");
    const double bottom = isocurve_bottom(raw_diameter_mm);
    const double top = isocurve_top(raw_diameter_mm);
    return bottom + (top - bottom) * r_index;
}

struct EquilibriumSample {
    double luminance_blondels = 0.0;
    double diameter_mm = 0.0;  // observed settled diameter under that luminance
};

// Recovers a subject's r_index as the mean of per-sample envelope positions.
inline double estimate_r_index(std::span<const EquilibriumSample> samples) {
    if (samples.empty())
        throw std::invalid_argument("estimate_r_index: no samples");
    double sum = 0.0;
    for (const auto& s : samples) {
        const double raw = equilibrium_raw_diameter({s.luminance_blondels});
        const double bottom = isocurve_bottom(raw);
        const double top = isocurve_top(raw);
        if (std::fabs(top - bottom) < 1e-9)
            throw std::runtime_error("estimate_r_index: degenerate envelope");
        sum += std::clamp((s.diameter_mm - bottom) / (top - bottom), 0.0, 1.0);
    }
    return sum / static_cast<double>(samples.size());
}

}  // namespace plr
