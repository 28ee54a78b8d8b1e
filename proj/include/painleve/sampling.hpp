#ifndef PAINLEVE_SAMPLING_HPP
#define PAINLEVE_SAMPLING_HPP

#include <complex>
#include <functional>

#include "painleve/errors.hpp"

namespace painleve {

using cplx = std::complex<double>;

/// Closed bidisc {|u - center_u| <= radius_u} x {|v - center_v| <= radius_v}.
/// By convention radius_u is the paper's b (dependent variable) and
/// radius_v is a (independent variable).
struct Bidisc {
    cplx center_u;
    cplx center_v;
    double radius_u; // b
    double radius_v; // a

    Bidisc(cplx cu, cplx cv, double ru, double rv)
        : center_u(cu), center_v(cv), radius_u(ru), radius_v(rv) {
        if (!(ru > 0.0) || !(rv > 0.0))
            throw Error("Bidisc: radii must be strictly positive");
    }
};

/// Max of |f| over an n x n grid on the distinguished boundary torus,
/// multiplied by the safety factor (>= 1). The grid is walked row by row in
/// serpentine order (consecutive sample points are adjacent on the torus),
/// so stateful evaluators that transport branches between calls stay local.
/// Evaluation failures are rethrown as SampleError naming the sample point.
double torus_max_sample(const std::function<cplx(cplx, cplx)>& f, const Bidisc& bidisc,
                        int n_samples = 64, double safety = 1.25);

} // namespace painleve

#endif
