#pragma once

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "plr/image.hpp"
#include "plr/iris_geometry.hpp"
#include "plr/iris_mesh.hpp"
#include "plr/measure.hpp"
#include "plr/model.hpp"
#include "plr/photometry.hpp"
#include "plr/simulation.hpp"
#include "plr/trace_io.hpp"

namespace plr {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string strf(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

inline double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// The settled-diameter curve must track the adaptation reference within 2% across
// the full ten-decade luminance range, and the sweep must be fast.
inline CriterionResult check_equilibrium_fidelity() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    double worst_log = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double lg = -5.0 + 0.1 * i;
        const Luminance lum{std::pow(10.0, lg)};
        const double reference = moon_spencer_diameter(lum);
        const double rel = std::fabs(equilibrium_raw_diameter(lum) - reference) / reference;
        if (rel > worst) {
            worst = rel;
            worst_log = lg;
        }
    }
    const double secs = detail::elapsed_s(start);
    const bool ok = worst < 0.02 && secs < 1.0;
    return {"equilibrium-fidelity", ok,
            detail::strf("max |eq-ref|/ref = %.4f%% at log10(L) = %.1f (limit 2%%), 101 points in %.1f ms",
                         worst * 100.0, worst_log, secs * 1000.0)};
}

inline CriterionResult check_threshold_constant() {
    const double flux = retinal_flux(blondels_to_illuminance({1e-5}), 7.8272).lumens;
    const double err = std::fabs(flux - kThresholdFluxLm);
    return {"threshold-constant", err <= 1e-13,
            detail::strf("flux(7.8272 mm at 1e-5 B) = %.10e lm, |err| = %.2e (limit 1e-13)", flux, err)};
}

// Formula anchors plus the behavioural part: after a step, the diameter must hold
// still for the latency period (one frame of slack) and then move monotonically.
inline CriterionResult check_latency() {
    const bool anchor_a = latency_ms({1.0}, 0.0) == 253.0;
    const bool anchor_b = std::fabs(latency_ms({1.0}, 0.4) - 281.0) <= 1e-9;

    const double fi = 33.3;
    const double step_time = 150.0 * fi;
    const double dim = std::pow(10.0, -0.5);
    const double bright = std::pow(10.0, 1.1);
    const LightSchedule schedule({{0.0, dim}, {step_time, bright}});
    const SubjectProfile profile{1.0, 600.0, 0.4};
    const SimTrace trace = simulate(schedule, profile, fi, 8000.0);

    const double tau = latency_ms(blondels_to_foot_lamberts({bright}), profile.stimulus_frequency_hz);
    const double expected_onset = step_time + tau;

    double onset = -1.0;
    std::size_t onset_idx = 0;
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
        if (std::fabs(trace.rows[k].diameter_raw_mm - trace.rows[k - 1].diameter_raw_mm) > 1e-4) {
            onset = trace.rows[k].time_ms;
            onset_idx = k;
            break;
        }
    }
    bool monotone = onset > 0.0;
    for (std::size_t k = onset_idx; monotone && k + 1 < std::min(onset_idx + 10, trace.rows.size()); ++k)
        monotone = trace.rows[k + 1].diameter_raw_mm < trace.rows[k].diameter_raw_mm;

    const bool ok = anchor_a && anchor_b && onset > 0.0 &&
                    std::fabs(onset - expected_onset) <= fi + 1e-9 && monotone;
    return {"latency", ok,
            detail::strf("253/281 ms anchors %s; movement onset %.1f ms vs step+tau %.1f ms (slack %.1f)",
                         anchor_a && anchor_b ? "exact" : "WRONG", onset, expected_onset, fi)};
}

inline CriterionResult check_convergence() {
    const auto start = std::chrono::steady_clock::now();
    const SubjectProfile profile{1.0, 600.0, 0.4};
    const SimTrace trace = simulate(LightSchedule({{0.0, 10.0}}), profile, 33.3, 60000.0);
    const double secs = detail::elapsed_s(start);

    const double target = equilibrium_raw_diameter({10.0});
    std::size_t first_within = trace.rows.size();
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        if (std::fabs(trace.rows[k].diameter_raw_mm - target) <= 0.05) {
            first_within = k;
            break;
        }
    }
    bool stays = first_within < trace.rows.size();
    for (std::size_t k = first_within; stays && k < trace.rows.size(); ++k)
        stays = std::fabs(trace.rows[k].diameter_raw_mm - target) <= 0.05;

    const double final_err = std::fabs(trace.rows.back().diameter_raw_mm - target);
    const bool ok = stays && final_err <= 0.05 && secs < 1.0;
    return {"convergence", ok,
            detail::strf("final |D - eq| = %.2e mm after 60 s (limit 0.05), settled and held, wall %.0f ms",
                         final_err, secs * 1000.0)};
}

// Same corridor traversed both ways; dilation must take about three times longer.
inline CriterionResult check_asymmetry() {
    const double fi = 33.3;
    const double t_up = 900.0 * fi;
    const double t_down = 2100.0 * fi;
    const double dim = std::pow(10.0, -0.5);
    const double bright = std::pow(10.0, 1.1);
    const SubjectProfile profile{1.0, 600.0, 0.4};
    const SimTrace trace =
        simulate(LightSchedule({{0.0, dim}, {t_up, bright}, {t_down, dim}}), profile, fi, 130000.0);

    const double d_dim = equilibrium_raw_diameter({dim});
    const double d_bright = equilibrium_raw_diameter({bright});
    const double lo = d_bright + 0.1 * (d_dim - d_bright);
    const double hi = d_bright + 0.9 * (d_dim - d_bright);

    double c_enter = -1.0, c_exit = -1.0, d_enter = -1.0, d_exit = -1.0;
    for (const auto& row : trace.rows) {
        if (row.time_ms >= t_up && row.time_ms < t_down) {
            if (c_enter < 0.0 && row.diameter_raw_mm <= hi) c_enter = row.time_ms;
            if (c_exit < 0.0 && row.diameter_raw_mm <= lo) c_exit = row.time_ms;
        } else if (row.time_ms >= t_down) {
            if (d_enter < 0.0 && row.diameter_raw_mm >= lo) d_enter = row.time_ms;
            if (d_exit < 0.0 && row.diameter_raw_mm >= hi) d_exit = row.time_ms;
        }
    }
    const bool traversed = c_enter >= 0 && c_exit >= 0 && d_enter >= 0 && d_exit >= 0;
    const double ratio = traversed ? (d_exit - d_enter) / (c_exit - c_enter) : 0.0;
    const bool ok = traversed && ratio >= 2.5 && ratio <= 3.5;
    return {"dilation-asymmetry", ok,
            detail::strf("10-90%% traversal: constriction %.0f ms, dilation %.0f ms, ratio %.3f (need 2.5-3.5)",
                         traversed ? c_exit - c_enter : -1.0, traversed ? d_exit - d_enter : -1.0, ratio)};
}

inline CriterionResult check_variability_roundtrip() {
    const double on = std::pow(10.0, 1.1);
    const double off = std::pow(10.0, -0.5);
    double worst = 0.0;
    for (const double target : {0.03, 0.4, 0.54, 0.9, 0.92, 1.0}) {
        const EquilibriumSample samples[] = {
            {on, apply_individuality(equilibrium_raw_diameter({on}), target)},
            {off, apply_individuality(equilibrium_raw_diameter({off}), target)},
        };
        worst = std::max(worst, std::fabs(estimate_r_index(samples) - target));
    }
    return {"variability-roundtrip", worst <= 1e-6,
            detail::strf("max |estimated - planted| = %.2e over 6 indices (limit 1e-6)", worst)};
}

inline CriterionResult check_hippus() {
    const HippusGenerator gen(42);
    const double bound = std::pow(10.0, HippusGenerator::kLogAmplitudeBound);

    double max_abs = 0.0;
    for (int t_ms = 0; t_ms <= 300000; ++t_ms)
        max_abs = std::max(max_abs, std::fabs(gen.perturbation_blondels(t_ms)));

    const double fi = 33.3;
    const SubjectProfile profile{1.0, 600.0, 0.4};
    const SimTrace trace =
        simulate(LightSchedule({{0.0, std::pow(10.0, 0.5)}}), profile, fi, 120000.0, &gen);
    double d_min = kMaxPupilMm, d_max = kMinPupilMm;
    for (const auto& row : trace.rows) {
        if (row.time_ms < 20000.0) continue;  // adaptation transient
        d_min = std::min(d_min, row.diameter_raw_mm);
        d_max = std::max(d_max, row.diameter_raw_mm);
    }
    const double amplitude = (d_max - d_min) / 2.0;

    // Spectral peak of the raw perturbation series, rectangular window.
    const int n = static_cast<int>(120000.0 / fi);
    std::vector<double> samples(n);
    for (int k = 0; k < n; ++k) samples[k] = gen.perturbation_blondels(k * fi);
    double peak_freq = 0.0, peak_mag = -1.0;
    for (double f = 0.005; f <= 1.0; f += 0.0025) {
        double re = 0.0, im = 0.0;
        for (int k = 0; k < n; ++k) {
            const double w = 2.0 * std::numbers::pi * f * (k * fi / 1000.0);
            re += samples[k] * std::cos(w);
            im -= samples[k] * std::sin(w);
        }
        const double mag = re * re + im * im;
        if (mag > peak_mag) {
            peak_mag = mag;
            peak_freq = f;
        }
    }

    const bool ok = max_abs <= bound && amplitude >= 0.05 && amplitude <= 0.5 &&
                    peak_freq >= HippusGenerator::kBandLowHz && peak_freq <= HippusGenerator::kBandHighHz;
    return {"hippus", ok,
            detail::strf("max|perturbation| = %.3f B (bound %.4f), diameter amplitude %.3f mm (need 0.05-0.5), spectral peak %.4f Hz (band 0.05-0.3)",
                         max_abs, bound, amplitude, peak_freq)};
}

inline CriterionResult check_deformation_invariance() {
    std::mt19937_64 rng(1234);
    const auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double radius = 5.0 + 2.0 * u01();
        const double offset_mag = 0.2 * radius * u01();
        const double offset_ang = 2.0 * std::numbers::pi * u01();
        const Vec2 pupil_center{offset_mag * std::cos(offset_ang), offset_mag * std::sin(offset_ang)};
        const double d_from = 1.95 + 5.9 * u01();
        const double d_to = 1.95 + 5.9 * u01();
        const IrisGeometry g_from{{0.0, 0.0}, radius, pupil_center, d_from};
        const IrisGeometry g_to{{0.0, 0.0}, radius, pupil_center, d_to};

        const double theta = 2.0 * std::numbers::pi * u01();
        const Vec2 u{std::cos(theta), std::sin(theta)};
        const double rho = u01();
        const double inner = d_from / 2.0;
        const double outer = ray_iris_distance(g_from, u);
        const Vec2 p = pupil_center + (inner + rho * (outer - inner)) * u;

        const double rho_before = radial_ratio(p, g_from);
        const double rho_after = radial_ratio(map_point(p, g_from, g_to), g_to);
        worst = std::max(worst, std::fabs(rho_after - rho_before));
    }

    const IrisGeometry base{{0.0, 0.0}, 6.0, {0.0, 0.0}, 4.0};
    IrisTexture texture;
    texture.image = ImageRGB8(8, 8);
    texture.reference = IrisGeometry{{0.0, 0.0}, 6.0, {0.0, 0.0}, 3.0};
    const IrisMesh mesh = build_mesh(base, texture);
    bool bitwise = true;
    for (const double d : {2.0, 4.9, 7.8}) {
        const IrisMesh deformed = deform_mesh(mesh, base, d);
        bitwise = bitwise &&
                  std::memcmp(deformed.texcoords.data(), mesh.texcoords.data(),
                              mesh.texcoords.size() * sizeof(Vec2)) == 0 &&
                  std::memcmp(deformed.positions.data() + IrisMesh::kSpokes,
                              mesh.positions.data() + IrisMesh::kSpokes,
                              IrisMesh::kSpokes * sizeof(Vec2)) == 0;
    }

    const bool ok = worst <= 1e-9 && bitwise;
    return {"deformation-invariance", ok,
            detail::strf("max |rho drift| = %.2e over 10000 cases (limit 1e-9); texcoords bitwise %s",
                         worst, bitwise ? "stable" : "CHANGED")};
}

inline CriterionResult check_measurement() {
    const auto disc_frame = [](int size, double disc_radius) {
        ImageGray8 frame(size, size, 200);
        const double c = size / 2.0;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const double dx = x + 0.5 - c;
                const double dy = y + 0.5 - c;
                if (dx * dx + dy * dy <= disc_radius * disc_radius) frame.at(x, y) = 10;
            }
        return frame;
    };
    const double d50 = measure_pupil(disc_frame(256, 50.0), {0, 0, 256, 256}, 128, 300.0);
    const double d100 = measure_pupil(disc_frame(512, 100.0), {0, 0, 512, 512}, 128, 300.0);
    const bool discs_ok = std::fabs(d50 - 4.0) <= 0.08 && std::fabs(d100 - 8.0) <= 0.16;

    const SubjectProfile profile{1.0, 600.0, 0.4};
    const SimTrace trace = simulate(LightSchedule({{0.0, 10.0}}), profile, 33.3, 30000.0);
    std::mt19937_64 rng(99);
    const auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    MeasuredSeries noisy;
    for (const auto& row : trace.rows)
        noisy.samples.push_back({row.time_ms, row.diameter_final_mm + 0.1 * (2.0 * u01() - 1.0)});
    const double err = trace_error(trace, noisy);
    const bool noise_ok = err >= 0.03 && err <= 0.07;

    return {"measurement", discs_ok && noise_ok,
            detail::strf("disc recovery %.3f / %.3f mm (want 4/8 within 2%%); noisy trace_error %.4f mm (want 0.05 +/- 0.02)",
                         d50, d100, err)};
}

inline std::vector<CriterionResult> run_acceptance_suite() {
    return {
        check_equilibrium_fidelity(),
        check_threshold_constant(),
        check_latency(),
        check_convergence(),
        check_asymmetry(),
        check_variability_roundtrip(),
        check_hippus(),
        check_deformation_invariance(),
        check_measurement(),
    };
}

// One line per criterion; returns true when everything passed.
inline bool report_acceptance(std::ostream& out, const std::vector<CriterionResult>& results) {
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << "\n";
        all = all && r.passed;
    }
    return all;
}

}  // namespace plr
