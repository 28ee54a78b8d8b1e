#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "painleve/series.hpp"
#include "testutil.hpp"

using namespace painleve;

namespace {

TaylorSeries geometric(cplx center, int order) {
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx{1.0, 0.0});
    return TaylorSeries(center, std::move(c), 1.0);
}

double max_coeff_err(const TaylorSeries& a, const std::vector<cplx>& expected) {
    double m = 0.0;
    for (std::size_t k = 0; k < expected.size() && k < a.coeffs().size(); ++k)
        m = std::max(m, std::abs(a.coeffs()[k] - expected[k]));
    return m;
}

} // namespace

TEST_CASE("series construction invariants") {
    CHECK_THROWS_AS(TaylorSeries(0.0, {}), Error);
    CHECK_THROWS_AS(TaylorSeries(0.0, {cplx{1.0, 0.0}}, -1.0), Error);
    const TaylorSeries s(cplx{2.0, 1.0}, {cplx{3.0, -1.0}, cplx{1.0, 0.0}}, 0.5);
    // evaluation at the center returns the constant term exactly
    CHECK(s.eval(cplx{2.0, 1.0}) == cplx{3.0, -1.0});
}

TEST_CASE("series_mul basics") {
    const TaylorSeries one_plus(0.0, {1.0, 1.0, 0.0}, 2.0);
    const TaylorSeries one_minus(0.0, {1.0, -1.0, 0.0}, 1.0);
    const TaylorSeries p = series_mul(one_plus, one_minus);
    CHECK(p.coeffs()[0] == cplx{1.0, 0.0});
    CHECK(p.coeffs()[1] == cplx{0.0, 0.0});
    CHECK(p.coeffs()[2] == cplx{-1.0, 0.0});
    CHECK(p.validity_radius() == 1.0);

    const TaylorSeries s(0.0, {2.0, 3.0, 4.0}, 5.0);
    const TaylorSeries one = TaylorSeries::constant(0.0, 1.0, 2);
    const TaylorSeries id = series_mul(s, one);
    for (int k = 0; k <= 2; ++k)
        CHECK(id.coeffs()[static_cast<std::size_t>(k)] ==
              s.coeffs()[static_cast<std::size_t>(k)]);

    CHECK_THROWS_AS(series_mul(s, TaylorSeries::constant(1.0, 1.0, 2)), Error);
}

TEST_CASE("geometric squared gives (k+1) coefficients") {
    const int order = 12;
    const TaylorSeries g = geometric(0.0, order);
    const TaylorSeries p = series_mul(g, g);
    const auto oracle = test::convolve(g.coeffs(), g.coeffs(), g.coeffs().size());
    for (int k = 0; k <= order; ++k) {
        CHECK(p.coeffs()[static_cast<std::size_t>(k)] == cplx{static_cast<double>(k + 1), 0.0});
        CHECK(p.coeffs()[static_cast<std::size_t>(k)] == oracle[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("series_mul agrees with the convolution oracle") {
    auto rng = test::make_rng();
    for (int rep = 0; rep < 40; ++rep) {
        const TaylorSeries a = test::random_series(rng, cplx{0.5, -0.25}, 14);
        const TaylorSeries b = test::random_series(rng, cplx{0.5, -0.25}, 14);
        const TaylorSeries p = series_mul(a, b);
        const auto oracle = test::convolve(a.coeffs(), b.coeffs(), p.coeffs().size());
        CHECK(max_coeff_err(p, oracle) < 1e-12);
    }
    // exact small-integer case
    const TaylorSeries a(0.0, {2.0, -3.0, 5.0}, 1.0);
    const TaylorSeries b(0.0, {7.0, 1.0, -2.0}, 1.0);
    const TaylorSeries p = series_mul(a, b);
    const auto oracle = test::convolve(a.coeffs(), b.coeffs(), p.coeffs().size());
    for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(p.coeffs()[k] == oracle[k]);
}

TEST_CASE("series_integrate") {
    const TaylorSeries one = TaylorSeries::constant(0.0, 1.0, 0);
    const TaylorSeries z = series_integrate(one, 0.0);
    CHECK(z.coeffs() == std::vector<cplx>{cplx{}, cplx{1.0, 0.0}});

    // exp is its own integral plus 1
    const int order = 10;
    std::vector<cplx> exp_c(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        exp_c[static_cast<std::size_t>(k)] = 1.0 / fact;
        fact *= k + 1.0;
    }
    const TaylorSeries e(0.0, exp_c, 1.0);
    const TaylorSeries ie = series_integrate(e, 1.0);
    for (int k = 0; k <= order; ++k)
        CHECK(std::abs(ie.coeffs()[static_cast<std::size_t>(k)] -
                       exp_c[static_cast<std::size_t>(k)]) < 1e-15);

    const TaylorSeries two_z(0.0, {0.0, 2.0}, 1.0);
    const cplx w0{5.0, -2.0};
    const TaylorSeries q = series_integrate(two_z, w0);
    CHECK(q.coeffs()[0] == w0);
    CHECK(q.coeffs()[1] == cplx{});
    CHECK(q.coeffs()[2] == cplx{1.0, 0.0});
}

TEST_CASE("series_kth_root binomial branches") {
    const TaylorSeries q(0.0, {1.0, 1.0, 0.0, 0.0}, 1.0);
    const TaylorSeries s = series_kth_root(q, 2, 1.0);
    CHECK(std::abs(s.coeffs()[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(s.coeffs()[1] - cplx{0.5, 0.0}) < 1e-15);
    CHECK(std::abs(s.coeffs()[2] - cplx{-0.125, 0.0}) < 1e-15);
    CHECK(std::abs(s.coeffs()[3] - cplx{0.0625, 0.0}) < 1e-15);

    const TaylorSeries opposite = series_kth_root(q, 2, -1.0);
    for (std::size_t k = 0; k < s.coeffs().size(); ++k)
        CHECK(std::abs(opposite.coeffs()[k] + s.coeffs()[k]) < 1e-15);
}

TEST_CASE("series_kth_root multiply-back oracle") {
    const TaylorSeries q(0.0, {4.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 1.0);
    const TaylorSeries s = series_kth_root(q, 2, 2.0);
    const TaylorSeries back = series_mul(s, s);
    CHECK(max_coeff_err(back, q.coeffs()) < 1e-12);
}

TEST_CASE("series_kth_root property: random radicands") {
    auto rng = test::make_rng(7);
    // Radicands with zeros outside the unit disc (decaying higher
    // coefficients), so the root series stays at unit scale and the absolute
    // bound on s^k - q is meaningful.
    for (int rep = 0; rep < 60; ++rep) {
        const int k = 2 + static_cast<int>(rng() % 5);      // 2..6
        const int order = 8 + static_cast<int>(rng() % 23); // 8..30
        std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
        double decay = 1.0;
        for (auto& x : c) {
            x = test::random_cplx(rng) * decay;
            decay *= 0.4;
        }
        if (std::abs(c[0]) < 0.5) c[0] += cplx{1.0, 0.5};
        const TaylorSeries q(0.0, c, 1.0);
        const cplx root = std::pow(c[0], 1.0 / k);
        const TaylorSeries s = series_kth_root(q, k, root);
        const TaylorSeries back = series_pow(s, k);
        CHECK(max_coeff_err(back, q.coeffs()) < 1e-10);
    }
    // Flat unit-scale coefficients at moderate order.
    for (int rep = 0; rep < 30; ++rep) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const int order = 4 + static_cast<int>(rng() % 7); // 4..10
        TaylorSeries q = test::random_series(rng, 0.0, order);
        auto c = q.coeffs();
        if (std::abs(c[0]) < 0.5) c[0] += cplx{1.0, 0.5};
        q = TaylorSeries(0.0, c, 1.0);
        const cplx root = std::pow(c[0], 1.0 / k);
        const TaylorSeries s = series_kth_root(q, k, root);
        const TaylorSeries back = series_pow(s, k);
        CHECK(max_coeff_err(back, q.coeffs()) < 1e-10);
    }
}

TEST_CASE("series_kth_root rejects bad seeds and branch points") {
    const TaylorSeries q0(0.0, {0.0, 1.0}, 1.0);
    CHECK_THROWS_AS(series_kth_root(q0, 2, 0.0), BranchPointError);
    const TaylorSeries q(0.0, {1.0, 1.0}, 1.0);
    CHECK_THROWS_AS(series_kth_root(q, 2, cplx{0.5, 0.5}), SheetError);
}

TEST_CASE("series_invert") {
    const TaylorSeries g = geometric(0.0, 8); // 1/(1-z)
    const TaylorSeries inv = series_invert(g, 8);
    CHECK(std::abs(inv.coeffs()[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(inv.coeffs()[1] + cplx{1.0, 0.0}) < 1e-15);
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(inv.coeffs()[static_cast<std::size_t>(k)]) < 1e-15);
    CHECK_THROWS_AS(series_invert(TaylorSeries(0.0, {0.0, 1.0}, 1.0), 4), PoleError);
}

TEST_CASE("derivative and evaluation") {
    const TaylorSeries s(1.0, {2.0, 3.0, 4.0}, 1.0); // 2 + 3h + 4h^2, h = z-1
    const TaylorSeries d = s.derivative();
    CHECK(d.coeffs() == std::vector<cplx>{cplx{3.0, 0.0}, cplx{8.0, 0.0}});
    CHECK(std::abs(s.eval(1.5) - cplx{2.0 + 1.5 + 1.0, 0.0}) < 1e-15);
    CHECK(std::abs(s.eval_derivative(1.5) - cplx{3.0 + 4.0, 0.0}) < 1e-15);
}
