#ifndef PAINLEVE_POLY_HPP
#define PAINLEVE_POLY_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "painleve/errors.hpp"
#include "painleve/series.hpp"

namespace painleve {

using cplx = std::complex<double>;

/// Bivariate polynomial over C in (u, v), stored as a trimmed coefficient
/// grid c[i][j] for u^i v^j. The zero polynomial is representable and flagged.
class BivariatePoly {
public:
    BivariatePoly() : du_(0), dv_(0), c_(1, cplx{}) {}
    static BivariatePoly constant(cplx c);
    static BivariatePoly var_u();
    static BivariatePoly var_v();
    static BivariatePoly from_grid(std::vector<std::vector<cplx>> grid);

    bool is_zero() const { return zero_; }
    bool is_constant() const { return du_ == 0 && dv_ == 0; }
    int deg_u() const { return du_; }
    int deg_v() const { return dv_; }
    cplx coeff(int i, int j) const;
    double max_abs_coeff() const;

    /// Horner evaluation in u of coefficients Horner-evaluated in v.
    cplx eval(cplx u, cplx v) const;
    /// Same Horner scheme with the u argument a series in (z - z0) and v the
    /// identity series at z0; used for radicand series in expression evaluation.
    TaylorSeries eval_series(const TaylorSeries& u_series, cplx z0, int order) const;

    BivariatePoly deriv_u() const;
    BivariatePoly deriv_v() const;

    /// Coefficients of the univariate restriction P(., nu), degree 0..deg_u,
    /// not trimmed.
    std::vector<cplx> restrict_v(cplx nu) const;

    /// Scaled so the lexicographically leading coefficient is 1.
    BivariatePoly normalized() const;
    /// True when this and other agree up to a nonzero scalar multiple.
    bool proportional_to(const BivariatePoly& other, double rel_tol = 1e-12) const;

    std::string to_string(const char* var_u = "w", const char* var_v = "z") const;

    friend BivariatePoly operator+(const BivariatePoly& p, const BivariatePoly& q);
    friend BivariatePoly operator-(const BivariatePoly& p, const BivariatePoly& q);
    friend BivariatePoly operator*(const BivariatePoly& p, const BivariatePoly& q);
    BivariatePoly scaled(cplx factor) const;
    BivariatePoly pow(int exponent) const;

private:
    int du_, dv_;
    std::vector<cplx> c_; // row-major: c_[i * (dv_+1) + j]
    bool zero_ = true;
    void trim();
    cplx& at(int i, int j) { return c_[static_cast<std::size_t>(i) * (dv_ + 1) + j]; }
    cplx at(int i, int j) const { return c_[static_cast<std::size_t>(i) * (dv_ + 1) + j]; }
};

struct RootOptions {
    int max_iterations = 200;
    std::uint64_t seed = 12345;
    double convergence_tol = 1e-13;
    int polish_steps = 5;
    double cluster_tol = 1e-6;
};

/// All roots of a univariate polynomial (coefficients degree 0..n) by Aberth
/// simultaneous iteration with a Durand-Kerner fallback and Newton polishing.
std::vector<cplx> univariate_roots(std::span<const cplx> coeffs, const RootOptions& opts = {});

/// The fiber W_nu of one component: roots of P(., nu) with multiplicities,
/// plus the count of leading u-coefficients that vanished at nu.
struct Fiber {
    struct Root {
        cplx value;
        int multiplicity;
    };
    cplx v_value;
    std::vector<Root> roots;
    int degree_drop = 0;
};

/// True iff the complex line v = nu lies in {P = 0}, i.e. every u-coefficient
/// polynomial in v vanishes at nu within a tolerance scaled by the
/// coefficient magnitudes of P.
bool line_contained(const BivariatePoly& P, cplx nu, double rel_tol = 1e-10);

/// Computes W_nu for the component P. Throws LineContainedError when the
/// restriction is identically zero and RootFindingError on iteration failure.
Fiber fiber_roots(const BivariatePoly& P, cplx nu, const RootOptions& opts = {});

struct ProximityOptions {
    double ceiling = 8.0;
    double gradient_floor = 1e-8;
    RootOptions roots;
};

/// Estimated distance from (w, z) to the union of the components' zero sets:
/// per component the min of the u-fiber distance and the first-order Newton
/// estimate |P|/||grad P||, then the min over components, capped at the
/// ceiling. Degenerate components contribute 0.
double proximity_estimate(std::span<const BivariatePoly> components, cplx w, cplx z,
                          const ProximityOptions& opts = {});

} // namespace painleve

#endif
