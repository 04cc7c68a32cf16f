#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "plr/image.hpp"
#include "plr/iris_mesh.hpp"

namespace plr {

namespace detail {

// Bilinear fetch with clamp-to-edge addressing; u,v in [0,1], texel centres at +0.5.
inline void sample_bilinear(const ImageRGB8& tex, double u, double v, double rgb[3]) {
    const double tx = u * tex.width - 0.5;
    const double ty = v * tex.height - 0.5;
    const double fx = std::floor(tx);
    const double fy = std::floor(ty);
    const double ax = tx - fx;
    const double ay = ty - fy;
    const int x0 = std::clamp(static_cast<int>(fx), 0, tex.width - 1);
    const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, tex.width - 1);
    const int y0 = std::clamp(static_cast<int>(fy), 0, tex.height - 1);
    const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, tex.height - 1);
    const std::uint8_t* p00 = tex.at(x0, y0);
    const std::uint8_t* p10 = tex.at(x1, y0);
    const std::uint8_t* p01 = tex.at(x0, y1);
    const std::uint8_t* p11 = tex.at(x1, y1);
    for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + ax * (p10[c] - p00[c]);
        const double bot = p01[c] + ax * (p11[c] - p01[c]);
        rgb[c] = top + ay * (bot - top);
    }
}

}  // namespace detail

// Rasterizes the textured ring over a black background; the uncovered pupil disc
// stays black, which also stands in for the unlit pupil (no corneal highlight).
// Viewport: millimetre origin at the image centre, y up, pixel centres at +0.5.
inline ImageRGB8 render_frame(const IrisMesh& mesh, const IrisTexture& texture,
                              int width_px, int height_px, double mm_per_px) {
    if (width_px <= 0 || height_px <= 0)
        throw std::invalid_argument("render_frame: image dimensions must be positive");
    if (!(mm_per_px > 0.0))
        throw std::invalid_argument("render_frame: scale must be positive");
    if (texture.image.width <= 0 || texture.image.height <= 0)
        throw std::invalid_argument("render_frame: empty texture");

    ImageRGB8 out(width_px, height_px);
    const auto to_px = [&](Vec2 p) -> Vec2 {
        return {0.5 * width_px + p.x / mm_per_px, 0.5 * height_px - p.y / mm_per_px};
    };

    for (const auto& tri : mesh.triangles) {
        const Vec2 a = to_px(mesh.positions[tri[0]]);
        const Vec2 b = to_px(mesh.positions[tri[1]]);
        const Vec2 c = to_px(mesh.positions[tri[2]]);
        double area = cross(b - a, c - a);
        if (area == 0.0) continue;
        // Orient edge functions so "inside" is non-negative regardless of winding.
        const double flip = area < 0.0 ? -1.0 : 1.0;
        area *= flip;

        const int x_lo = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
        const int x_hi = std::min(width_px - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
        const int y_lo = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
        const int y_hi = std::min(height_px - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));

        const Vec2 ta = mesh.texcoords[tri[0]];
        const Vec2 tb = mesh.texcoords[tri[1]];
        const Vec2 tc = mesh.texcoords[tri[2]];
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                const Vec2 s{x + 0.5, y + 0.5};
                const double w0 = flip * cross(c - b, s - b);
                const double w1 = flip * cross(a - c, s - c);
                const double w2 = flip * cross(b - a, s - a);
                if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
                const double l0 = w0 / area;
                const double l1 = w1 / area;
                const double l2 = w2 / area;
                const double u = l0 * ta.x + l1 * tb.x + l2 * tc.x;
                const double v = l0 * ta.y + l1 * tb.y + l2 * tc.y;
                double rgb[3];
                detail::sample_bilinear(texture.image, u, v, rgb);
                std::uint8_t* px = out.at(x, y);
                for (int ch = 0; ch < 3; ++ch)
                    px[ch] = static_cast<std::uint8_t>(std::clamp(rgb[ch] + 0.5, 0.0, 255.0));
            }
        }
    }
    return out;
}

}  // namespace plr
