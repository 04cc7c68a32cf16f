#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plr/measure.hpp"

using namespace plr;
using Catch::Approx;

namespace {

// Disc of dark pixels on a bright field, hit-tested at pixel centres.
ImageGray8 disc_frame(int size, double radius_px, std::uint8_t bg = 200, std::uint8_t fg = 10) {
    ImageGray8 img(size, size, bg);
    const double c = size / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dx = x + 0.5 - c;
            const double dy = y + 0.5 - c;
            if (dx * dx + dy * dy <= radius_px * radius_px) img.at(x, y) = fg;
        }
    return img;
}

}  // namespace

TEST_CASE("disc diameter recovery") {
    const ImageGray8 small = disc_frame(256, 50.0);
    const double d1 = measure_pupil(small, {0, 0, 256, 256}, 128, 300.0);
    REQUIRE(d1 == Approx(4.0).margin(0.08));  // 2% of 4 mm

    const ImageGray8 large = disc_frame(512, 100.0);
    const double d2 = measure_pupil(large, {0, 0, 512, 512}, 128, 300.0);
    REQUIRE(d2 == Approx(8.0).margin(0.16));
}

TEST_CASE("diameter is monotone in disc radius") {
    double prev = 0.0;
    for (const double r : {20.0, 35.0, 50.0, 65.0, 80.0}) {
        const double d = measure_pupil(disc_frame(256, r), {0, 0, 256, 256}, 128, 300.0);
        REQUIRE(d > prev);
        prev = d;
    }
}

TEST_CASE("scale follows the iris pixel diameter") {
    const ImageGray8 frame = disc_frame(256, 50.0);
    const double at300 = measure_pupil(frame, {0, 0, 256, 256}, 128, 300.0);
    const double at600 = measure_pupil(frame, {0, 0, 256, 256}, 128, 600.0);
    REQUIRE(at600 == Approx(at300 / 2.0).epsilon(1e-12));
}

TEST_CASE("roi restricts the count") {
    const ImageGray8 frame = disc_frame(256, 50.0);
    const double full = measure_pupil(frame, {0, 0, 256, 256}, 128, 300.0);
    // bounding box of the disc: same pixels, same answer
    const double boxed = measure_pupil(frame, {77, 77, 102, 102}, 128, 300.0);
    REQUIRE(boxed == full);
    // half the disc: area halves, diameter shrinks by sqrt(2)
    const double half = measure_pupil(frame, {128, 0, 128, 256}, 128, 300.0);
    REQUIRE(half == Approx(full / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("threshold is strict") {
    ImageGray8 frame(8, 8, 128);
    frame.at(3, 3) = 127;
    // 127 < 128 counts; the 128 background does not
    const double d = measure_pupil(frame, {0, 0, 8, 8}, 128, 300.0);
    REQUIRE(d == Approx(2.0 * std::sqrt(1.0 / std::numbers::pi) * 12.0 / 300.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 8, 8}, 127, 300.0), MeasurementError);
}

TEST_CASE("no dark pixels raises a measurement error") {
    const ImageGray8 bright(64, 64, 255);
    REQUIRE_THROWS_AS(measure_pupil(bright, {0, 0, 64, 64}, 128, 300.0), MeasurementError);
}

TEST_CASE("argument validation") {
    const ImageGray8 frame = disc_frame(64, 10.0);
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 65, 64}, 128, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {-1, 0, 64, 64}, 128, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 0, 64}, 128, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {32, 32, 64, 64}, 128, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 64, 64}, 256, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 64, 64}, -1, 300.0), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_pupil(frame, {0, 0, 64, 64}, 128, 0.0), std::invalid_argument);
}
