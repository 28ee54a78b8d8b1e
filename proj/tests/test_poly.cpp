#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "painleve/poly.hpp"
#include "testutil.hpp"

using namespace painleve;

namespace {

const BivariatePoly U = BivariatePoly::var_u();
const BivariatePoly V = BivariatePoly::var_v();

BivariatePoly three_v_plus_u2() { return V.scaled(3.0) + U * U; }

} // namespace

TEST_CASE("poly_eval basics") {
    const BivariatePoly p = U * U + V.scaled(3.0);
    CHECK(p.eval(1.0, 1.0) == cplx{4.0, 0.0});
    CHECK(BivariatePoly().eval(cplx{3.0, -2.0}, 2.0) == cplx{});
    CHECK((U * V).eval(2.0, 3.0) == cplx{6.0, 0.0});
}

TEST_CASE("grid construction trims and flags zero") {
    const BivariatePoly z = BivariatePoly::from_grid({{0.0, 0.0}, {0.0, 0.0}});
    CHECK(z.is_zero());
    const BivariatePoly p = BivariatePoly::from_grid({{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
    CHECK(p.deg_u() == 0);
    CHECK(p.deg_v() == 0);
    CHECK(p.is_constant());
}

TEST_CASE("fiber_roots closed forms") {
    RootOptions opts;
    auto contains_root = [](const Fiber& f, cplx expected) {
        for (const auto& r : f.roots)
            if (std::abs(r.value - expected) < 1e-12) return true;
        return false;
    };
    const Fiber f1 = fiber_roots(three_v_plus_u2(), 1.0, opts);
    REQUIRE(f1.roots.size() == 2);
    const double s3 = std::sqrt(3.0);
    CHECK(contains_root(f1, cplx{0.0, s3}));
    CHECK(contains_root(f1, cplx{0.0, -s3}));

    const Fiber f2 = fiber_roots(U * U - V, 4.0, opts);
    REQUIRE(f2.roots.size() == 2);
    CHECK(contains_root(f2, cplx{2.0, 0.0}));
    CHECK(contains_root(f2, cplx{-2.0, 0.0}));

    CHECK_THROWS_AS(fiber_roots(U * V, 0.0, opts), LineContainedError);
}

TEST_CASE("line_contained") {
    CHECK(line_contained(U * V, 0.0));
    CHECK_FALSE(line_contained(three_v_plus_u2(), 0.0));
    CHECK_FALSE(line_contained(three_v_plus_u2(), cplx{2.0, -1.0}));
    CHECK(line_contained((V - BivariatePoly::constant(1.0)) * (U * U), 1.0));
    CHECK(line_contained(BivariatePoly(), 12.0)); // zero polynomial contains everything
}

TEST_CASE("degree drop is reported") {
    // P = v u^2 + u: at v=0 the leading coefficient vanishes.
    const BivariatePoly P = V * U * U + U;
    const Fiber f = fiber_roots(P, 0.0);
    CHECK(f.degree_drop == 1);
    REQUIRE(f.roots.size() == 1);
    CHECK(std::abs(f.roots[0].value) < 1e-12);
}

TEST_CASE("proximity_estimate closed forms") {
    ProximityOptions opts;
    const BivariatePoly comps1[] = {U};
    CHECK(proximity_estimate(comps1, cplx{0.5, 0.0}, cplx{7.0, 0.0}, opts) ==
          doctest::Approx(0.5).epsilon(1e-12));

    const BivariatePoly comps2[] = {U * U - V};
    CHECK(proximity_estimate(comps2, 1.0, 1.0, opts) < 1e-12);

    const BivariatePoly comps3[] = {three_v_plus_u2()};
    CHECK(proximity_estimate(comps3, 0.0, 1.0, opts) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    // v-line component: Newton fallback measures the v-distance
    const BivariatePoly comps4[] = {V - BivariatePoly::constant(2.0)};
    CHECK(proximity_estimate(comps4, 100.0, cplx{2.0, 0.5}, opts) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // empty component list: the ceiling
    CHECK(proximity_estimate({}, 0.0, 0.0, opts) == opts.ceiling);
}

TEST_CASE("random fibers: residual and count") {
    auto rng = test::make_rng(21);
    RootOptions opts;
    int checked = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const BivariatePoly P = test::random_poly(rng, 1 + static_cast<int>(rng() % 5),
                                                  static_cast<int>(rng() % 4));
        const cplx nu = test::random_cplx(rng, 2.0);
        if (line_contained(P, nu)) continue;
        const auto coeffs = P.restrict_v(nu);
        Fiber f;
        try {
            f = fiber_roots(P, nu, opts);
        } catch (const RootFindingError&) {
            continue; // budget exhaustion is reported, not hidden
        }
        const double scale = 1.0 + P.max_abs_coeff();
        int count = 0;
        for (const auto& r : f.roots) {
            count += r.multiplicity;
            cplx val{};
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) val = val * r.value + *it;
            CHECK(std::abs(val) <= 1e-9 * scale);
        }
        const int trimmed_degree = P.deg_u() - f.degree_drop;
        CHECK(count == trimmed_degree);
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("line_contained and fiber_roots never disagree") {
    auto rng = test::make_rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        BivariatePoly P = test::random_poly(rng, 2, 2);
        cplx nu = test::random_cplx(rng, 2.0);
        if (rep % 3 == 0) {
            // craft a contained line: P = (v - nu) * Q
            P = (V - BivariatePoly::constant(nu)) * test::random_poly(rng, 2, 1);
        }
        const bool contained = line_contained(P, nu);
        bool threw = false;
        try {
            fiber_roots(P, nu);
        } catch (const LineContainedError&) {
            threw = true;
        } catch (const RootFindingError&) {
            continue;
        }
        CHECK(contained == threw);
    }
}

TEST_CASE("proximity is zero exactly on computed fiber points, positive off the curve") {
    auto rng = test::make_rng(29);
    ProximityOptions popts;
    for (int rep = 0; rep < 20; ++rep) {
        const BivariatePoly P = test::random_poly(rng, 2, 2);
        const cplx nu = test::random_cplx(rng, 1.5);
        if (line_contained(P, nu)) continue;
        Fiber f;
        try {
            f = fiber_roots(P, nu);
        } catch (const RootFindingError&) {
            continue;
        }
        const BivariatePoly comps[] = {P};
        for (const auto& r : f.roots)
            CHECK(proximity_estimate(comps, r.value, nu, popts) == 0.0);

        const cplx off = test::random_cplx(rng, 2.0);
        const double pval = std::abs(P.eval(off, nu));
        const cplx gu = P.deriv_u().eval(off, nu), gv = P.deriv_v().eval(off, nu);
        if (pval > 1e-6 && std::hypot(std::abs(gu), std::abs(gv)) > popts.gradient_floor)
            CHECK(proximity_estimate(comps, off, nu, popts) > 0.0);
    }
}

TEST_CASE("normalization and proportionality") {
    const BivariatePoly two_w = U.scaled(2.0);
    CHECK(two_w.normalized().coeff(1, 0) == cplx{1.0, 0.0});
    CHECK(two_w.proportional_to(U));
    CHECK_FALSE(two_w.proportional_to(V));
    CHECK((U * U * V).proportional_to((U * U * V).scaled(cplx{0.0, -3.0})));
}

TEST_CASE("to_string is readable") {
    CHECK(three_v_plus_u2().to_string() == "w^2 + 3*z");
    CHECK(U.to_string() == "w");
    CHECK(BivariatePoly().to_string() == "0");
}

TEST_CASE("derivatives") {
    const BivariatePoly P = U * U * V + U.scaled(5.0); // u^2 v + 5u
    const BivariatePoly Pu = P.deriv_u();              // 2uv + 5
    const BivariatePoly Pv = P.deriv_v();              // u^2
    CHECK(Pu.eval(2.0, 3.0) == cplx{17.0, 0.0});
    CHECK(Pv.eval(2.0, 3.0) == cplx{4.0, 0.0});
}
