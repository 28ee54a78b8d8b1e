#include "painleve/sphere.hpp"

#include <cmath>

namespace painleve {

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
    if (p.is_infinity() && q.is_infinity()) return 0.0;
    if (p.is_infinity()) return chordal_distance(q, p);
    const double np = std::norm(p.value());
    if (q.is_infinity()) return 1.0 / std::sqrt(1.0 + np);
    const double nq = std::norm(q.value());
    return std::abs(p.value() - q.value()) / (std::sqrt(1.0 + np) * std::sqrt(1.0 + nq));
}

std::array<double, 3> sphere_lift(const SpherePoint& p) {
    if (p.is_infinity()) return {0.0, 0.0, 1.0};
    const cplx z = p.value();
    const double d = 1.0 + std::norm(z);
    return {z.real() / d, z.imag() / d, std::norm(z) / d};
}

SpherePoint sphere_unlift(const std::array<double, 3>& x) {
    if (x[2] >= 1.0 - 1e-15) return SpherePoint::infinity();
    return SpherePoint::finite(cplx(x[0], x[1]) / (1.0 - x[2]));
}

SpherePoint chordal_mean(std::span<const SpherePoint> points) {
    if (points.empty()) return SpherePoint::finite(0.0);
    std::array<double, 3> m{0.0, 0.0, 0.0};
    for (const auto& p : points) {
        const auto x = sphere_lift(p);
        m[0] += x[0];
        m[1] += x[1];
        m[2] += x[2];
    }
    const double n = static_cast<double>(points.size());
    m = {m[0] / n, m[1] / n, m[2] / n};
    // Project onto the sphere of radius 1/2 about (0,0,1/2).
    std::array<double, 3> r{m[0], m[1], m[2] - 0.5};
    const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (len < 1e-12) return points.front();
    return sphere_unlift({0.5 * r[0] / len, 0.5 * r[1] / len, 0.5 + 0.5 * r[2] / len});
}

} // namespace painleve
