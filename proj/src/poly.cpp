#include "painleve/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace painleve {

namespace {

bool coeff_nonzero(cplx c) { return c != cplx{}; }

std::string format_real(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string format_coeff(cplx c) {
    if (c.imag() == 0.0) return format_real(c.real());
    if (c.real() == 0.0) return format_real(c.imag()) + "i";
    std::string s = format_real(c.real());
    s += c.imag() < 0 ? "-" : "+";
    s += format_real(std::abs(c.imag())) + "i";
    return "(" + s + ")";
}

} // namespace

BivariatePoly BivariatePoly::constant(cplx c) {
    BivariatePoly p;
    p.c_[0] = c;
    p.zero_ = (c == cplx{});
    return p;
}

BivariatePoly BivariatePoly::var_u() {
    BivariatePoly p;
    p.du_ = 1;
    p.dv_ = 0;
    p.c_ = {cplx{}, cplx{1.0, 0.0}};
    p.zero_ = false;
    return p;
}

BivariatePoly BivariatePoly::var_v() {
    BivariatePoly p;
    p.du_ = 0;
    p.dv_ = 1;
    p.c_ = {cplx{}, cplx{1.0, 0.0}};
    p.zero_ = false;
    return p;
}

BivariatePoly BivariatePoly::from_grid(std::vector<std::vector<cplx>> grid) {
    BivariatePoly p;
    if (grid.empty()) return p;
    std::size_t cols = 0;
    for (const auto& row : grid) cols = std::max(cols, row.size());
    if (cols == 0) return p;
    p.du_ = static_cast<int>(grid.size()) - 1;
    p.dv_ = static_cast<int>(cols) - 1;
    p.c_.assign(grid.size() * cols, cplx{});
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid[i].size(); ++j)
            p.c_[i * cols + j] = grid[i][j];
    p.trim();
    return p;
}

void BivariatePoly::trim() {
    int max_i = -1, max_j = -1;
    for (int i = 0; i <= du_; ++i)
        for (int j = 0; j <= dv_; ++j)
            if (coeff_nonzero(at(i, j))) {
                max_i = std::max(max_i, i);
                max_j = std::max(max_j, j);
            }
    if (max_i < 0) {
        du_ = dv_ = 0;
        c_.assign(1, cplx{});
        zero_ = true;
        return;
    }
    std::vector<cplx> nc(static_cast<std::size_t>(max_i + 1) * (max_j + 1));
    for (int i = 0; i <= max_i; ++i)
        for (int j = 0; j <= max_j; ++j)
            nc[static_cast<std::size_t>(i) * (max_j + 1) + j] = at(i, j);
    c_ = std::move(nc);
    du_ = max_i;
    dv_ = max_j;
    zero_ = false;
}

cplx BivariatePoly::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i > du_ || j > dv_) return cplx{};
    return at(i, j);
}

double BivariatePoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
}

cplx BivariatePoly::eval(cplx u, cplx v) const {
    cplx acc{};
    for (int i = du_; i >= 0; --i) {
        cplx row{};
        for (int j = dv_; j >= 0; --j) row = row * v + at(i, j);
        acc = acc * u + row;
    }
    return acc;
}

TaylorSeries BivariatePoly::eval_series(const TaylorSeries& u_series, cplx z0, int order) const {
    const TaylorSeries u = u_series.truncated(order);
    // v as a series in (z - z0): constant term z0, linear coefficient 1.
    std::vector<cplx> vc(static_cast<std::size_t>(order) + 1, cplx{});
    vc[0] = z0;
    if (order >= 1) vc[1] = 1.0;
    const TaylorSeries v(z0, std::move(vc), u.validity_radius());

    TaylorSeries acc = TaylorSeries::constant(z0, 0.0, order);
    for (int i = du_; i >= 0; --i) {
        TaylorSeries row = TaylorSeries::constant(z0, 0.0, order);
        for (int j = dv_; j >= 0; --j) {
            row = series_mul(row, v);
            row = series_add(row, TaylorSeries::constant(z0, at(i, j), order));
        }
        acc = series_add(series_mul(acc, u), row);
    }
    acc.set_validity_radius(u_series.validity_radius());
    return acc;
}

BivariatePoly BivariatePoly::deriv_u() const {
    if (du_ == 0) return BivariatePoly();
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(du_));
    for (int i = 1; i <= du_; ++i) {
        g[static_cast<std::size_t>(i - 1)].resize(static_cast<std::size_t>(dv_) + 1);
        for (int j = 0; j <= dv_; ++j)
            g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] =
                static_cast<double>(i) * at(i, j);
    }
    return from_grid(std::move(g));
}

BivariatePoly BivariatePoly::deriv_v() const {
    if (dv_ == 0) return BivariatePoly();
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(du_) + 1);
    for (int i = 0; i <= du_; ++i) {
        g[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(dv_));
        for (int j = 1; j <= dv_; ++j)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] =
                static_cast<double>(j) * at(i, j);
    }
    return from_grid(std::move(g));
}

std::vector<cplx> BivariatePoly::restrict_v(cplx nu) const {
    std::vector<cplx> r(static_cast<std::size_t>(du_) + 1);
    for (int i = 0; i <= du_; ++i) {
        cplx acc{};
        for (int j = dv_; j >= 0; --j) acc = acc * nu + at(i, j);
        r[static_cast<std::size_t>(i)] = acc;
    }
    return r;
}

BivariatePoly BivariatePoly::normalized() const {
    if (zero_) return *this;
    cplx lead{};
    for (int i = du_; i >= 0 && lead == cplx{}; --i)
        for (int j = dv_; j >= 0; --j)
            if (coeff_nonzero(at(i, j))) {
                lead = at(i, j);
                break;
            }
    return scaled(1.0 / lead);
}

bool BivariatePoly::proportional_to(const BivariatePoly& other, double rel_tol) const {
    if (zero_ || other.zero_) return zero_ && other.zero_;
    if (du_ != other.du_ || dv_ != other.dv_) return false;
    const BivariatePoly a = normalized();
    const BivariatePoly b = other.normalized();
    const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    for (int i = 0; i <= du_; ++i)
        for (int j = 0; j <= dv_; ++j)
            if (std::abs(a.at(i, j) - b.at(i, j)) > rel_tol * (1.0 + scale)) return false;
    return true;
}

std::string BivariatePoly::to_string(const char* var_u, const char* var_v) const {
    if (zero_) return "0";
    std::string out;
    for (int i = du_; i >= 0; --i)
        for (int j = dv_; j >= 0; --j) {
            const cplx c = at(i, j);
            if (!coeff_nonzero(c)) continue;
            std::string term;
            const bool has_var = i > 0 || j > 0;
            if (!has_var || c != cplx{1.0, 0.0}) {
                term += format_coeff(c);
                if (has_var) term += "*";
            }
            if (i > 0) {
                term += var_u;
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (j > 0) {
                if (i > 0) term += "*";
                term += var_v;
                if (j > 1) term += "^" + std::to_string(j);
            }
            if (!out.empty()) out += " + ";
            out += term;
        }
    return out;
}

BivariatePoly operator+(const BivariatePoly& p, const BivariatePoly& q) {
    const int du = std::max(p.du_, q.du_), dv = std::max(p.dv_, q.dv_);
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(du) + 1,
                                     std::vector<cplx>(static_cast<std::size_t>(dv) + 1));
    for (int i = 0; i <= du; ++i)
        for (int j = 0; j <= dv; ++j)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                p.coeff(i, j) + q.coeff(i, j);
    return BivariatePoly::from_grid(std::move(g));
}

BivariatePoly operator-(const BivariatePoly& p, const BivariatePoly& q) {
    return p + q.scaled(-1.0);
}

BivariatePoly operator*(const BivariatePoly& p, const BivariatePoly& q) {
    if (p.zero_ || q.zero_) return BivariatePoly();
    const int du = p.du_ + q.du_, dv = p.dv_ + q.dv_;
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(du) + 1,
                                     std::vector<cplx>(static_cast<std::size_t>(dv) + 1));
    for (int i = 0; i <= p.du_; ++i)
        for (int j = 0; j <= p.dv_; ++j) {
            const cplx c = p.at(i, j);
            if (!coeff_nonzero(c)) continue;
            for (int k = 0; k <= q.du_; ++k)
                for (int l = 0; l <= q.dv_; ++l)
                    g[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(j + l)] +=
                        c * q.at(k, l);
        }
    return BivariatePoly::from_grid(std::move(g));
}

BivariatePoly BivariatePoly::scaled(cplx factor) const {
    if (factor == cplx{}) return BivariatePoly();
    BivariatePoly p = *this;
    for (auto& c : p.c_) c *= factor;
    return p;
}

BivariatePoly BivariatePoly::pow(int exponent) const {
    if (exponent < 0) throw Error("BivariatePoly::pow: negative exponent");
    BivariatePoly acc = constant(1.0);
    BivariatePoly base = *this;
    int e = exponent;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Univariate root finding

namespace {

cplx horner(std::span<const cplx> c, cplx x) {
    cplx acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx horner_deriv(std::span<const cplx> c, cplx x) {
    cplx acc{};
    const int n = static_cast<int>(c.size()) - 1;
    for (int k = n; k >= 1; --k) acc = acc * x + static_cast<double>(k) * c[static_cast<std::size_t>(k)];
    return acc;
}

bool aberth_pass(std::span<const cplx> c, std::vector<cplx>& x, int budget, double tol) {
    const std::size_t n = x.size();
    for (int it = 0; it < budget; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx p = horner(c, x[i]);
            const cplx dp = horner_deriv(c, x[i]);
            if (p == cplx{}) continue;
            cplx newton = (dp == cplx{}) ? cplx{0.0, 0.0} : p / dp;
            if (dp == cplx{}) {
                x[i] += cplx(1e-6, 1e-6); // nudge off a critical point
                worst = 1.0;
                continue;
            }
            cplx sum{};
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx d = x[i] - x[j];
                if (std::abs(d) < 1e-300) d = cplx(1e-300, 0.0);
                sum += 1.0 / d;
            }
            const cplx denom = 1.0 - newton * sum;
            const cplx delta = (std::abs(denom) < 1e-300) ? newton : newton / denom;
            x[i] -= delta;
            worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(x[i])));
        }
        if (worst < tol) return true;
    }
    return false;
}

bool durand_kerner_pass(std::span<const cplx> c, std::vector<cplx>& x, int budget, double tol) {
    const std::size_t n = x.size();
    // Monic normalization for the DK update.
    std::vector<cplx> m(c.begin(), c.end());
    const cplx lead = m.back();
    for (auto& a : m) a /= lead;
    for (int it = 0; it < budget; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx d = x[i] - x[j];
                if (std::abs(d) < 1e-300) d = cplx(1e-300, 0.0);
                denom *= d;
            }
            const cplx delta = horner(m, x[i]) / denom;
            x[i] -= delta;
            worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(x[i])));
        }
        if (worst < tol) return true;
    }
    return false;
}

} // namespace

std::vector<cplx> univariate_roots(std::span<const cplx> coeffs, const RootOptions& opts) {
    if (coeffs.empty() || coeffs.back() == cplx{})
        throw Error("univariate_roots: untrimmed or empty coefficient list");
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n == 0) return {};
    if (n == 1) return {-coeffs[0] / coeffs[1]};

    // Random circular initialization of radius 1 + max coefficient ratio.
    double ratio = 0.0;
    for (int k = 0; k < n; ++k)
        ratio = std::max(ratio, std::abs(coeffs[static_cast<std::size_t>(k)] / coeffs.back()));
    const double radius = 1.0 + ratio;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::vector<cplx> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double theta =
            2.0 * std::numbers::pi * (static_cast<double>(i) + jitter(rng)) / static_cast<double>(n);
        x[static_cast<std::size_t>(i)] = radius * std::polar(1.0, theta);
    }

    bool ok = aberth_pass(coeffs, x, opts.max_iterations, opts.convergence_tol);
    if (!ok) ok = durand_kerner_pass(coeffs, x, opts.max_iterations, opts.convergence_tol);
    if (!ok) throw RootFindingError("univariate_roots: iteration budget exhausted");

    for (auto& r : x)
        for (int s = 0; s < opts.polish_steps; ++s) {
            const cplx dp = horner_deriv(coeffs, r);
            if (std::abs(dp) < 1e-300) break;
            r -= horner(coeffs, r) / dp;
        }
    return x;
}

// ---------------------------------------------------------------------------

bool line_contained(const BivariatePoly& P, cplx nu, double rel_tol) {
    if (P.is_zero()) return true;
    const auto r = P.restrict_v(nu);
    const double vmag = std::max(1.0, std::abs(nu));
    const double tol = rel_tol * (1.0 + P.max_abs_coeff()) * std::pow(vmag, P.deg_v());
    for (const auto& c : r)
        if (std::abs(c) > tol) return false;
    return true;
}

Fiber fiber_roots(const BivariatePoly& P, cplx nu, const RootOptions& opts) {
    if (line_contained(P, nu))
        throw LineContainedError("fiber_roots: restriction identically zero (line v = nu lies in the component)");
    auto coeffs = P.restrict_v(nu);
    const double vmag = std::max(1.0, std::abs(nu));
    const double tol = 1e-10 * (1.0 + P.max_abs_coeff()) * std::pow(vmag, P.deg_v());
    int drop = 0;
    while (coeffs.size() > 1 && std::abs(coeffs.back()) <= tol) {
        coeffs.pop_back();
        ++drop;
    }
    Fiber fiber;
    fiber.v_value = nu;
    fiber.degree_drop = drop;
    if (coeffs.size() == 1) return fiber; // nonzero constant restriction: empty fiber

    auto roots = univariate_roots(coeffs, opts);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    double scale = 0.0;
    for (const auto& r : roots) scale = std::max(scale, std::abs(r));
    const double cluster = opts.cluster_tol * (1.0 + scale);
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t j = i + 1;
        cplx sum = roots[i];
        while (j < roots.size() && std::abs(roots[j] - roots[j - 1]) <= cluster) {
            sum += roots[j];
            ++j;
        }
        fiber.roots.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return fiber;
}

double proximity_estimate(std::span<const BivariatePoly> components, cplx w, cplx z,
                          const ProximityOptions& opts) {
    double best = opts.ceiling;
    for (const auto& P : components) {
        double d = -1.0;
        if (P.is_zero()) {
            d = 0.0;
        } else {
            // u-fiber distance when the fiber over z is well-defined; an empty
            // fiber (constant nonzero restriction) gives no constraint from
            // this component along the line v = z.
            bool fiber_ok = false;
            if (!line_contained(P, z) && P.deg_u() > 0) {
                try {
                    const Fiber f = fiber_roots(P, z, opts.roots);
                    fiber_ok = true;
                    if (f.roots.empty()) {
                        d = opts.ceiling;
                    } else {
                        for (const auto& r : f.roots) {
                            const double du = std::abs(w - r.value);
                            d = (d < 0.0) ? du : std::min(d, du);
                        }
                    }
                } catch (const NumericalError&) {
                    fiber_ok = false;
                }
            }
            if (!fiber_ok) {
                // First-order Newton estimate as the fallback.
                const cplx g_u = P.deriv_u().eval(w, z);
                const cplx g_v = P.deriv_v().eval(w, z);
                const double grad = std::hypot(std::abs(g_u), std::abs(g_v));
                if (grad > opts.gradient_floor)
                    d = std::abs(P.eval(w, z)) / grad;
            }
            if (d < 0.0) d = 0.0; // degenerate: no usable estimate
        }
        best = std::min(best, d);
    }
    return std::min(best, opts.ceiling);
}

} // namespace painleve
