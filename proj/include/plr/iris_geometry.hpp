#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plr/model.hpp"

namespace plr {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Pupil and iris circles in eye-plane millimetres. The pupil may sit off-centre,
// but no more than 20% of the iris radius, and must stay strictly inside the iris.
struct IrisGeometry {
    Vec2 iris_center{0.0, 0.0};
    double iris_radius_mm = 6.0;
    Vec2 pupil_center{0.0, 0.0};
    double pupil_diameter_mm = 4.9;

    void validate() const {
        if (!(iris_radius_mm > 0.0))
            throw std::domain_error("IrisGeometry: iris radius must be positive");
        check_pupil_domain(pupil_diameter_mm, "IrisGeometry");
        const double offset = norm(pupil_center - iris_center);
        if (offset > 0.2 * iris_radius_mm)
            throw std::domain_error("IrisGeometry: pupil offset exceeds 20% of iris radius");
        if (!(offset + pupil_diameter_mm / 2.0 < iris_radius_mm))
            throw std::domain_error("IrisGeometry: pupil circle not strictly inside iris");
    }
};

// Distance from pupil_center to the iris circle along unit direction u.
// Positive root of |pupil_center + t*u - iris_center| = R; exists because the
// pupil centre is inside the circle.
inline double ray_iris_distance(const IrisGeometry& g, Vec2 u) {
    const Vec2 d = g.pupil_center - g.iris_center;
    const double b = dot(d, u);
    const double c = dot(d, d) - g.iris_radius_mm * g.iris_radius_mm;
    return -b + std::sqrt(b * b - c);
}

// rho: fraction of the pupil-to-iris gap covered by p along its ray from pupil_center.
// 0 on the pupil border, 1 on the iris border; invariant under pupil dilation.
inline double radial_ratio(Vec2 p, const IrisGeometry& g) {
    g.validate();
    const Vec2 rel = p - g.pupil_center;
    const double r = norm(rel);
    if (r < 1e-12)
        throw std::domain_error("radial_ratio: ray undefined at pupil center");
    const Vec2 u = (1.0 / r) * rel;
    const double inner = g.pupil_diameter_mm / 2.0;
    const double outer = ray_iris_distance(g, u);
    if (r < inner - 1e-9 || r > outer + 1e-9)
        throw std::domain_error("radial_ratio: point outside the iris ring");
    return std::clamp((r - inner) / (outer - inner), 0.0, 1.0);
}

// Transports p to the same (rho, theta) position under a different pupil diameter.
// Both geometries must share the iris circle and pupil centre.
inline Vec2 map_point(Vec2 p, const IrisGeometry& g_from, const IrisGeometry& g_to) {
    if (norm(g_from.iris_center - g_to.iris_center) > 1e-12 ||
        std::fabs(g_from.iris_radius_mm - g_to.iris_radius_mm) > 1e-12 ||
        norm(g_from.pupil_center - g_to.pupil_center) > 1e-12)
        throw std::invalid_argument("map_point: geometries must share iris circle and pupil center");
    const double rho = radial_ratio(p, g_from);
    g_to.validate();
    const Vec2 rel = p - g_from.pupil_center;
    const Vec2 u = (1.0 / norm(rel)) * rel;
    const double inner = g_to.pupil_diameter_mm / 2.0;
    const double outer = ray_iris_distance(g_to, u);
    return g_to.pupil_center + (inner + rho * (outer - inner)) * u;
}

}  // namespace plr
