#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "plr/flux_history.hpp"
#include "plr/hippus.hpp"
#include "plr/model.hpp"
#include "plr/photometry.hpp"
#include "plr/schedule.hpp"

namespace plr {

struct SubjectProfile {
    double r_index = 0.5;                // position between the envelope isocurves
    double velocity_constant = 600.0;    // S: larger = slower iris
    double stimulus_frequency_hz = 0.4;  // R in the latency formula

    void validate() const {
        if (!(r_index >= 0.0 && r_index <= 1.0))
            throw std::domain_error("SubjectProfile: r_index outside [0, 1]");
        if (!(velocity_constant > 0.0))
            throw std::domain_error("SubjectProfile: velocity constant must be positive");
        if (!(stimulus_frequency_hz >= 0.0))
            throw std::domain_error("SubjectProfile: stimulus frequency must be non-negative");
    }
};

struct TraceRow {
    double time_ms = 0.0;
    double luminance_blondels = 0.0;  // effective value, hippus included
    double flux_lumens = 0.0;
    double diameter_raw_mm = 0.0;
    double diameter_final_mm = 0.0;
};

struct SimTrace {
    std::vector<TraceRow> rows;
    // Frames where hippus pushed luminance out of [1e-5, 1e5] B and it was clamped.
    std::size_t clamped_luminance_samples = 0;
};

// Delay-differential pupil dynamics, explicit first-order stepping at the frame rate.
// The subject starts adapted: history is primed so the first scheduled luminance
// appears to have held forever, and the trace opens with that equilibrium at t=0.
// Constriction consumes the full frame step; dilation runs three times slower.
inline SimTrace simulate(const LightSchedule& schedule, const SubjectProfile& profile,
                         double frame_interval_ms, double duration_ms,
                         const HippusGenerator* hippus = nullptr) {
    if (schedule.empty())
        throw std::invalid_argument("simulate: empty schedule");
    profile.validate();
    if (!(frame_interval_ms > 0.0))
        throw std::invalid_argument("simulate: frame interval must be positive");
    if (!(duration_ms > 0.0))
        throw std::invalid_argument("simulate: duration must be positive");

    constexpr double kClampLo = kMinPupilMm + 1e-3;  // keeps atanh well clear of its poles
    constexpr double kClampHi = kMaxPupilMm - 1e-3;

    SimTrace trace;
    const double first_lum = schedule.luminance_at(0.0);
    double diameter = equilibrium_raw_diameter({first_lum});

    FluxHistory history;
    const double flux0 = retinal_flux(blondels_to_illuminance({first_lum}), diameter).lumens;
    history.record(0.0, flux0);
    trace.rows.push_back({0.0, first_lum, flux0, diameter,
                          apply_individuality(diameter, profile.r_index)});

    const auto frames =
        static_cast<std::size_t>(duration_ms / frame_interval_ms * (1.0 + 1e-12));
    trace.rows.reserve(frames + 1);
    for (std::size_t k = 1; k <= frames; ++k) {
        // Frame times by multiplication, not accumulation, so runs are reproducible.
        const double t_prev = static_cast<double>(k - 1) * frame_interval_ms;
        const double t_cur = static_cast<double>(k) * frame_interval_ms;

        double lum = schedule.luminance_at(t_cur);
        if (hippus != nullptr) {
            lum += hippus->perturbation_blondels(t_cur);
            const double clamped = std::clamp(lum, kMinLuminanceB, kMaxLuminanceB);
            if (clamped != lum) ++trace.clamped_luminance_samples;
            lum = clamped;
        }

        const double tau =
            latency_ms(blondels_to_foot_lamberts({lum}), profile.stimulus_frequency_hz);
        const double delayed_flux = history.flux_at(t_cur - tau);

        const double drive =
            kFitOffset - kFitSlope * std::log(delayed_flux / history.threshold_flux());
        const double rate = (drive - kLn10 * muscular_activity(diameter)) /
                            (kLn10 * muscular_activity_slope(diameter));
        const double dt = (t_cur - t_prev) /
                          (rate < 0.0 ? profile.velocity_constant : 3.0 * profile.velocity_constant);
        diameter = std::clamp(diameter + dt * rate, kClampLo, kClampHi);

        const double flux = retinal_flux(blondels_to_illuminance({lum}), diameter).lumens;
        history.record(t_cur, flux);
        trace.rows.push_back({t_cur, lum, flux, diameter,
                              apply_individuality(diameter, profile.r_index)});
    }
    return trace;
}

}  // namespace plr
