#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "plr/model.hpp"

namespace plr {

// Time-ordered record of retinal flux, the source for delayed lookups.
// Queries before the first sample clamp to it: the earliest sample stands in for
// "this flux has held forever".
class FluxHistory {
public:
    explicit FluxHistory(double threshold_flux_lm = kThresholdFluxLm)
        : threshold_(threshold_flux_lm) {
        if (!(threshold_ > 0.0))
            throw std::invalid_argument("FluxHistory: threshold flux must be positive");
    }

    void record(double time_ms, double flux_lm) {
        if (!times_.empty() && !(time_ms > times_.back()))
            throw std::invalid_argument("FluxHistory: sample times must be strictly increasing");
        if (!(flux_lm > 0.0))
            throw std::invalid_argument("FluxHistory: flux must be positive");
        times_.push_back(time_ms);
        fluxes_.push_back(flux_lm);
    }

    // Flux in effect at the query time: last sample with time <= time_ms.
    double flux_at(double time_ms) const {
        if (times_.empty())
            throw std::logic_error("FluxHistory: no samples");
        const auto it = std::upper_bound(times_.begin(), times_.end(), time_ms);
        if (it == times_.begin())
            return fluxes_.front();
        return fluxes_[static_cast<std::size_t>(it - times_.begin()) - 1];
    }

    double threshold_flux() const { return threshold_; }
    std::size_t size() const { return times_.size(); }

private:
    double threshold_;
    std::vector<double> times_;
    std::vector<double> fluxes_;
};

}  // namespace plr
