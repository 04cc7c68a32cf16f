#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "plr/model.hpp"

namespace plr {

struct SchedulePoint {
    double time_ms = 0.0;  // segment start
    double luminance_blondels = 0.0;
};

// Piecewise-constant stimulus: each point opens a segment that holds until the next.
// An empty schedule is representable (files may be header-only) but cannot drive a
// simulation.
class LightSchedule {
public:
    LightSchedule() = default;

    explicit LightSchedule(std::vector<SchedulePoint> points) : points_(std::move(points)) {
        if (points_.empty()) return;
        if (points_.front().time_ms != 0.0)
            throw std::invalid_argument("LightSchedule: first segment must start at t=0");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (i > 0 && !(points_[i].time_ms > points_[i - 1].time_ms))
                throw std::invalid_argument("LightSchedule: start times must be strictly increasing");
            if (!(points_[i].luminance_blondels >= kMinLuminanceB &&
                  points_[i].luminance_blondels <= kMaxLuminanceB))
                throw std::invalid_argument("LightSchedule: luminance outside [1e-5, 1e5] B");
        }
    }

    bool empty() const { return points_.empty(); }
    const std::vector<SchedulePoint>& points() const { return points_; }

    // Luminance of the segment containing time_ms.
    double luminance_at(double time_ms) const {
        if (points_.empty())
            throw std::logic_error("LightSchedule: empty schedule");
        double lum = points_.front().luminance_blondels;
        for (const auto& p : points_) {
            if (p.time_ms <= time_ms)
                lum = p.luminance_blondels;
            else
                break;
        }
        return lum;
    }

private:
    std::vector<SchedulePoint> points_;
};

}  // namespace plr
