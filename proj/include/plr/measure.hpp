#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "plr/errors.hpp"
#include "plr/image.hpp"

namespace plr {

// Typical adult iris diameter; anchors the pixel-to-millimetre scale.
inline constexpr double kTypicalIrisDiameterMm = 12.0;

struct RectPx {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

// Pupil diameter from one frame: count dark pixels in the roi, take the
// circle-equivalent diameter, scale by the known iris size in pixels.
inline double measure_pupil(const ImageGray8& frame, RectPx roi, int dark_threshold,
                            double iris_px_diameter) {
    if (roi.x < 0 || roi.y < 0 || roi.width <= 0 || roi.height <= 0 ||
        roi.x + roi.width > frame.width || roi.y + roi.height > frame.height)
        throw std::invalid_argument("measure_pupil: roi outside frame");
    if (dark_threshold < 0 || dark_threshold > 255)
        throw std::invalid_argument("measure_pupil: threshold outside 0..255");
    if (!(iris_px_diameter > 0.0))
        throw std::invalid_argument("measure_pupil: iris pixel diameter must be positive");

    std::size_t area = 0;
    for (int y = roi.y; y < roi.y + roi.height; ++y)
        for (int x = roi.x; x < roi.x + roi.width; ++x)
            if (frame.at(x, y) < dark_threshold) ++area;
    if (area == 0)
        throw MeasurementError("measure_pupil: no pupil found");

    const double d_px = 2.0 * std::sqrt(static_cast<double>(area) / std::numbers::pi);
    return d_px * kTypicalIrisDiameterMm / iris_px_diameter;
}

}  // namespace plr
