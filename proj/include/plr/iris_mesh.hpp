#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "plr/image.hpp"
#include "plr/iris_geometry.hpp"

namespace plr {

// An iris photograph plus the circles it was taken with. Texture coordinates are
// derived from this reference geometry once, at mesh build time.
struct IrisTexture {
    ImageRGB8 image;
    IrisGeometry reference;
};

// Two concentric rings of 72 spokes, one every 5 degrees. positions[i] is the inner
// (pupil border) vertex of spoke i, positions[i + kSpokes] the outer (iris border) one.
struct IrisMesh {
    static constexpr int kSpokes = 72;
    std::vector<Vec2> positions;
    std::vector<Vec2> texcoords;  // immutable after build
    std::vector<std::array<int, 3>> triangles;
};

namespace detail {

inline Vec2 spoke_direction(int i) {
    const double theta = 2.0 * std::numbers::pi * i / IrisMesh::kSpokes;
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace detail

// The iris circle sits inscribed in the unit texture square; v runs down the image
// rows so photographs render upright.
inline Vec2 texture_uv(const IrisGeometry& reference, Vec2 q) {
    const double span = 2.0 * reference.iris_radius_mm;
    return {0.5 + (q.x - reference.iris_center.x) / span,
            0.5 - (q.y - reference.iris_center.y) / span};
}

inline IrisMesh build_mesh(const IrisGeometry& g, const IrisTexture& texture) {
    g.validate();
    texture.reference.validate();

    IrisMesh mesh;
    mesh.positions.resize(2 * IrisMesh::kSpokes);
    mesh.texcoords.resize(2 * IrisMesh::kSpokes);
    mesh.triangles.reserve(2 * IrisMesh::kSpokes);

    const IrisGeometry& ref = texture.reference;
    for (int i = 0; i < IrisMesh::kSpokes; ++i) {
        const Vec2 u = detail::spoke_direction(i);
        mesh.positions[i] = g.pupil_center + (g.pupil_diameter_mm / 2.0) * u;
        mesh.positions[i + IrisMesh::kSpokes] = g.pupil_center + ray_iris_distance(g, u) * u;
        mesh.texcoords[i] = texture_uv(ref, ref.pupil_center + (ref.pupil_diameter_mm / 2.0) * u);
        mesh.texcoords[i + IrisMesh::kSpokes] =
            texture_uv(ref, ref.pupil_center + ray_iris_distance(ref, u) * u);
    }
    for (int i = 0; i < IrisMesh::kSpokes; ++i) {
        const int j = (i + 1) % IrisMesh::kSpokes;
        mesh.triangles.push_back({i, i + IrisMesh::kSpokes, j});
        mesh.triangles.push_back({i + IrisMesh::kSpokes, j + IrisMesh::kSpokes, j});
    }
    return mesh;
}

// Repositions the inner ring for a new pupil diameter. Outer ring and texture
// coordinates are carried over untouched: the pattern slides along the spokes.
inline IrisMesh deform_mesh(const IrisMesh& mesh, const IrisGeometry& g, double new_diameter_mm) {
    check_pupil_domain(new_diameter_mm, "deform_mesh");
    g.validate();
    IrisMesh out = mesh;
    for (int i = 0; i < IrisMesh::kSpokes; ++i)
        out.positions[i] = g.pupil_center + (new_diameter_mm / 2.0) * detail::spoke_direction(i);
    return out;
}

}  // namespace plr
