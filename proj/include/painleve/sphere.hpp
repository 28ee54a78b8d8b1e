#ifndef PAINLEVE_SPHERE_HPP
#define PAINLEVE_SPHERE_HPP

#include <array>
#include <complex>
#include <span>

namespace painleve {

using cplx = std::complex<double>;

/// A point of the Riemann sphere P^1: either a finite complex value or
/// the distinguished point at infinity.
class SpherePoint {
public:
    static SpherePoint finite(cplx value) { return SpherePoint(value, false); }
    static SpherePoint infinity() { return SpherePoint(cplx{}, true); }

    bool is_infinity() const { return infinite_; }
    /// Finite value; only meaningful when !is_infinity().
    cplx value() const { return value_; }

private:
    SpherePoint(cplx v, bool inf) : value_(v), infinite_(inf) {}
    cplx value_;
    bool infinite_;
};

/// Chordal distance on P^1, normalized to range [0,1]:
/// |p-q| / (sqrt(1+|p|^2) sqrt(1+|q|^2)), with the usual limits at infinity.
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Embedding of P^1 as the sphere of diameter 1 through 0 and (0,0,1);
/// chordal_distance equals the ambient Euclidean distance of the lifts.
std::array<double, 3> sphere_lift(const SpherePoint& p);
SpherePoint sphere_unlift(const std::array<double, 3>& x);

/// Frechet mean for the chordal metric: average the lifts, project back
/// onto the sphere. Intended for tight clusters (the verdict tail); for a
/// degenerate spread the first point is returned.
SpherePoint chordal_mean(std::span<const SpherePoint> points);

} // namespace painleve

#endif
