#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace plr {

// Band-limited luminance jitter: a seeded bank of sinusoids. Sinusoids rather than
// filtered noise keep the band edges exact and make replay need only the seed.
class HippusGenerator {
public:
    static constexpr double kBandLowHz = 0.05;
    static constexpr double kBandHighHz = 0.3;
    static constexpr double kLogAmplitudeBound = 0.3;  // bound = 10^0.3 blondels
    static constexpr int kOscillators = 8;

    explicit HippusGenerator(std::uint64_t seed) : seed_(seed) {
        std::mt19937_64 rng(seed);
        // Top 53 bits -> [0,1). std::uniform_real_distribution is not portable
        // across standard libraries; this mapping is.
        const auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double total = 0.0;
        for (int i = 0; i < kOscillators; ++i) {
            freq_hz_[i] = kBandLowHz + (kBandHighHz - kBandLowHz) * u01();
            phase_[i] = 2.0 * std::numbers::pi * u01();
            amp_[i] = 0.1 + 0.9 * u01();  // relative weight, rescaled below
            total += amp_[i];
        }
        // Sum of amplitudes equals the bound, so |perturbation| <= 10^0.3 always.
        const double bound = std::pow(10.0, kLogAmplitudeBound);
        for (double& a : amp_) a *= bound / total;
    }

    // Luminance offset in blondels; deterministic in (seed, time).
    double perturbation_blondels(double time_ms) const {
        const double t_s = time_ms / 1000.0;
        double sum = 0.0;
        for (int i = 0; i < kOscillators; ++i)
            sum += amp_[i] * std::sin(2.0 * std::numbers::pi * freq_hz_[i] * t_s + phase_[i]);
        return sum;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::array<double, kOscillators> freq_hz_{};
    std::array<double, kOscillators> phase_{};
    std::array<double, kOscillators> amp_{};
};

}  // namespace plr
