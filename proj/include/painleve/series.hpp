#ifndef PAINLEVE_SERIES_HPP
#define PAINLEVE_SERIES_HPP

#include <complex>
#include <vector>

#include "painleve/errors.hpp"

namespace painleve {

using cplx = std::complex<double>;

/// Truncated univariate power series at a complex center, with an advisory
/// validity radius. Coefficients run from degree 0 upward and are never empty.
class TaylorSeries {
public:
    TaylorSeries(cplx center, std::vector<cplx> coeffs, double validity_radius = 0.0)
        : center_(center), coeffs_(std::move(coeffs)), validity_radius_(validity_radius) {
        if (coeffs_.empty()) throw Error("TaylorSeries: empty coefficient list");
        if (!(validity_radius_ >= 0.0)) throw Error("TaylorSeries: negative validity radius");
    }

    static TaylorSeries constant(cplx center, cplx value, int order = 0);

    cplx center() const { return center_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    double validity_radius() const { return validity_radius_; }
    void set_validity_radius(double r) {
        if (!(r >= 0.0)) throw Error("TaylorSeries: negative validity radius");
        validity_radius_ = r;
    }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }

    /// Horner evaluation in (z - center); at the center this is exactly coeffs[0].
    cplx eval(cplx z) const;
    cplx eval_derivative(cplx z) const;

    TaylorSeries derivative() const;
    TaylorSeries truncated(int order) const;

private:
    cplx center_;
    std::vector<cplx> coeffs_;
    double validity_radius_;
};

TaylorSeries series_add(const TaylorSeries& s, const TaylorSeries& t);
TaylorSeries series_sub(const TaylorSeries& s, const TaylorSeries& t);
TaylorSeries series_scale(const TaylorSeries& s, cplx factor);

/// Cauchy product truncated to the smaller input order; validity radius is
/// the min of the inputs. Centers must match.
TaylorSeries series_mul(const TaylorSeries& s, const TaylorSeries& t);

/// Term-wise antiderivative, one degree up, with the given constant term.
TaylorSeries series_integrate(const TaylorSeries& s, cplx constant);

/// Reciprocal series to the given order; requires a nonzero constant term.
TaylorSeries series_invert(const TaylorSeries& s, int order, double tol = 1e-14);

TaylorSeries series_pow(const TaylorSeries& s, int exponent);

/// k-th root s with s^k = q to the truncation order and s(center) =
/// root_at_center, computed by the order-by-order recursion from
/// k q s' = q' s. The seed must satisfy root_at_center^k = q(center).
TaylorSeries series_kth_root(const TaylorSeries& q, int k, cplx root_at_center,
                             double seed_rel_tol = 1e-8);

} // namespace painleve

#endif
