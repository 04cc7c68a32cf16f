#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plr {

// Value types per unit so quantities cannot be mixed up silently.
struct Luminance {
    double blondels = 0.0;
};
struct FootLamberts {
    double value = 0.0;
};
struct Illuminance {
    double lumens_per_mm2 = 0.0;
};
struct LuminousFlux {
    double lumens = 0.0;
};

// A 1-blondel Lambertian screen delivers 1e-6 lm/mm^2 at the eye.
inline constexpr double kLumensPerMm2PerBlondel = 1e-6;
// From 1 fL = 3.426 cd/m^2 and 1 blondel = (1/pi) cd/m^2.
inline constexpr double kBlondelsPerFootLambert = 10.764;
// 1 lux = 1 lm/m^2.
inline constexpr double kLumensPerMm2PerLux = 1e-6;

inline Illuminance blondels_to_illuminance(Luminance l) {
    if (!(l.blondels > 0.0))
        throw std::domain_error("blondels_to_illuminance: luminance must be positive");
    return {l.blondels * kLumensPerMm2PerBlondel};
}

inline FootLamberts blondels_to_foot_lamberts(Luminance l) {
    if (!(l.blondels > 0.0))
        throw std::domain_error("blondels_to_foot_lamberts: luminance must be positive");
    return {l.blondels / kBlondelsPerFootLambert};
}

inline Luminance foot_lamberts_to_blondels(FootLamberts l) {
    if (!(l.value > 0.0))
        throw std::domain_error("foot_lamberts_to_blondels: luminance must be positive");
    return {l.value * kBlondelsPerFootLambert};
}

inline Illuminance lux_to_illuminance(double lux) {
    if (!(lux >= 0.0))
        throw std::domain_error("lux_to_illuminance: illuminance must be non-negative");
    return {lux * kLumensPerMm2PerLux};
}

// Flux through the pupil aperture: illuminance times disc area.
inline LuminousFlux retinal_flux(Illuminance i, double pupil_diameter_mm) {
    if (!(pupil_diameter_mm >= 0.0))
        throw std::domain_error("retinal_flux: pupil diameter must be non-negative");
    const double r = pupil_diameter_mm / 2.0;
    return {i.lumens_per_mm2 * std::numbers::pi * r * r};
}

}  // namespace plr
