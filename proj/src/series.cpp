#include "painleve/series.hpp"

#include <algorithm>
#include <cmath>

namespace painleve {

namespace {

void require_same_center(const TaylorSeries& s, const TaylorSeries& t, const char* op) {
    if (s.center() != t.center())
        throw Error(std::string(op) + ": mismatched centers");
}

double min_radius(const TaylorSeries& s, const TaylorSeries& t) {
    return std::min(s.validity_radius(), t.validity_radius());
}

} // namespace

TaylorSeries TaylorSeries::constant(cplx center, cplx value, int order) {
    std::vector<cplx> c(static_cast<std::size_t>(std::max(order, 0)) + 1, cplx{});
    c[0] = value;
    return TaylorSeries(center, std::move(c));
}

cplx TaylorSeries::eval(cplx z) const {
    const cplx h = z - center_;
    cplx acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
        acc = acc * h + *it;
    return acc;
}

cplx TaylorSeries::eval_derivative(cplx z) const {
    if (coeffs_.size() == 1) return cplx{};
    const cplx h = z - center_;
    const int n = order();
    cplx acc = static_cast<double>(n) * coeffs_[static_cast<std::size_t>(n)];
    for (int k = n - 1; k >= 1; --k)
        acc = acc * h + static_cast<double>(k) * coeffs_[static_cast<std::size_t>(k)];
    return acc;
}

TaylorSeries TaylorSeries::derivative() const {
    if (coeffs_.size() == 1)
        return TaylorSeries(center_, {cplx{}}, validity_radius_);
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return TaylorSeries(center_, std::move(d), validity_radius_);
}

TaylorSeries TaylorSeries::truncated(int order) const {
    if (order < 0) throw Error("TaylorSeries::truncated: negative order");
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx{});
    const std::size_t n = std::min(c.size(), coeffs_.size());
    std::copy_n(coeffs_.begin(), n, c.begin());
    return TaylorSeries(center_, std::move(c), validity_radius_);
}

TaylorSeries series_add(const TaylorSeries& s, const TaylorSeries& t) {
    require_same_center(s, t, "series_add");
    const int n = std::min(s.order(), t.order());
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        c[static_cast<std::size_t>(k)] =
            s.coeffs()[static_cast<std::size_t>(k)] + t.coeffs()[static_cast<std::size_t>(k)];
    return TaylorSeries(s.center(), std::move(c), min_radius(s, t));
}

TaylorSeries series_sub(const TaylorSeries& s, const TaylorSeries& t) {
    require_same_center(s, t, "series_sub");
    const int n = std::min(s.order(), t.order());
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        c[static_cast<std::size_t>(k)] =
            s.coeffs()[static_cast<std::size_t>(k)] - t.coeffs()[static_cast<std::size_t>(k)];
    return TaylorSeries(s.center(), std::move(c), min_radius(s, t));
}

TaylorSeries series_scale(const TaylorSeries& s, cplx factor) {
    std::vector<cplx> c = s.coeffs();
    for (auto& x : c) x *= factor;
    return TaylorSeries(s.center(), std::move(c), s.validity_radius());
}

TaylorSeries series_mul(const TaylorSeries& s, const TaylorSeries& t) {
    require_same_center(s, t, "series_mul");
    const int n = std::min(s.order(), t.order());
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx{});
    for (int i = 0; i <= n; ++i) {
        const cplx si = s.coeffs()[static_cast<std::size_t>(i)];
        if (si == cplx{}) continue;
        for (int j = 0; i + j <= n; ++j)
            c[static_cast<std::size_t>(i + j)] += si * t.coeffs()[static_cast<std::size_t>(j)];
    }
    return TaylorSeries(s.center(), std::move(c), min_radius(s, t));
}

TaylorSeries series_integrate(const TaylorSeries& s, cplx constant) {
    std::vector<cplx> c(s.coeffs().size() + 1);
    c[0] = constant;
    for (std::size_t k = 0; k < s.coeffs().size(); ++k)
        c[k + 1] = s.coeffs()[k] / static_cast<double>(k + 1);
    return TaylorSeries(s.center(), std::move(c), s.validity_radius());
}

TaylorSeries series_invert(const TaylorSeries& s, int order, double tol) {
    if (order < 0) throw Error("series_invert: negative order");
    const cplx s0 = s.coeffs()[0];
    if (std::abs(s0) < tol)
        throw PoleError("series_invert: vanishing constant term");
    std::vector<cplx> b(static_cast<std::size_t>(order) + 1, cplx{});
    b[0] = 1.0 / s0;
    for (int n = 1; n <= order; ++n) {
        cplx acc{};
        for (int j = 1; j <= n; ++j) {
            const cplx sj = j <= s.order() ? s.coeffs()[static_cast<std::size_t>(j)] : cplx{};
            acc += sj * b[static_cast<std::size_t>(n - j)];
        }
        b[static_cast<std::size_t>(n)] = -acc / s0;
    }
    return TaylorSeries(s.center(), std::move(b), s.validity_radius());
}

TaylorSeries series_pow(const TaylorSeries& s, int exponent) {
    if (exponent < 0) throw Error("series_pow: negative exponent");
    TaylorSeries acc = TaylorSeries::constant(s.center(), 1.0, s.order());
    acc.set_validity_radius(s.validity_radius());
    TaylorSeries base = s;
    int e = exponent;
    while (e > 0) {
        if (e & 1) acc = series_mul(acc, base);
        base = series_mul(base, base);
        e >>= 1;
    }
    return acc;
}

TaylorSeries series_kth_root(const TaylorSeries& q, int k, cplx root_at_center,
                             double seed_rel_tol) {
    if (k < 1) throw Error("series_kth_root: k must be positive");
    const cplx q0 = q.coeffs()[0];
    if (std::abs(q0) < 1e-300)
        throw BranchPointError("series_kth_root: vanishing constant term (branch point at center)");
    cplx seed_pow = 1.0;
    for (int j = 0; j < k; ++j) seed_pow *= root_at_center;
    if (std::abs(seed_pow - q0) > seed_rel_tol * (1.0 + std::abs(q0)))
        throw SheetError("series_kth_root: root_at_center inconsistent with constant term");

    // Order-by-order recursion from k q s' = q' s.
    const int n = q.order();
    const auto& qc = q.coeffs();
    std::vector<cplx> s(static_cast<std::size_t>(n) + 1, cplx{});
    s[0] = root_at_center;
    const double kd = static_cast<double>(k);
    for (int m = 0; m < n; ++m) {
        cplx rhs{};
        for (int i = 0; i <= m; ++i) {
            const cplx qi1 = qc[static_cast<std::size_t>(i + 1)];
            rhs += static_cast<double>(i + 1) * qi1 * s[static_cast<std::size_t>(m - i)];
        }
        cplx lhs_known{};
        for (int i = 1; i <= m; ++i) {
            const int j = m - i;
            lhs_known += kd * qc[static_cast<std::size_t>(i)] * static_cast<double>(j + 1) *
                         s[static_cast<std::size_t>(j + 1)];
        }
        s[static_cast<std::size_t>(m + 1)] =
            (rhs - lhs_known) / (kd * q0 * static_cast<double>(m + 1));
    }
    TaylorSeries root(q.center(), std::move(s), q.validity_radius());
    // Two Newton passes on s^k - q in series arithmetic clean up the rounding
    // the recurrence accumulates at high orders.
    for (int pass = 0; pass < 2; ++pass) {
        const TaylorSeries s_km1 = series_pow(root, k - 1);
        const TaylorSeries err = series_sub(series_mul(s_km1, root), q);
        const TaylorSeries corr =
            series_mul(err, series_invert(series_scale(s_km1, kd), n));
        root = series_sub(root, corr);
    }
    return root;
}

} // namespace painleve
