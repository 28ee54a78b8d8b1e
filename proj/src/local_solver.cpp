#include "painleve/local_solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace painleve {

namespace {

/// Evaluator over bidisc sample points that transports the branch state
/// incrementally from point to point (the serpentine grid keeps consecutive
/// samples adjacent, so most transports need no subdivision).
class TransportedEvaluator {
public:
    TransportedEvaluator(const ExpressionAST& ast, BranchState state, cplx w, cplx z,
                         EvalOptions opts)
        : ast_(ast), state_(std::move(state)), w_(w), z_(z), opts_(opts) {}

    cplx operator()(cplx u, cplx v) {
        const cplx w0 = w_, z0 = z_;
        update_branches_path(
            ast_, state_,
            [&](double t) {
                return std::pair<cplx, cplx>{w0 + t * (u - w0), z0 + t * (v - z0)};
            },
            opts_);
        w_ = u;
        z_ = v;
        return eval_at(ast_, u, v, state_, opts_);
    }

private:
    const ExpressionAST& ast_;
    BranchState state_;
    cplx w_, z_;
    EvalOptions opts_;
};

} // namespace

LocalBounds estimate_bounds(const ExpressionAST& ast, const BranchState& state, cplx w0, cplx z0,
                            double a, double b, const BoundsOptions& opts) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("estimate_bounds: radii must be positive");
    TransportedEvaluator eval(ast, state, w0, z0, opts.eval);
    auto f = [&eval](cplx u, cplx v) { return eval(u, v); };
    LocalBounds bounds;
    bounds.a = a;
    bounds.b = b;
    bounds.M_hat = torus_max_sample(f, Bidisc(w0, z0, b, a), opts.n_samples, opts.safety);
    const double M2 =
        torus_max_sample(f, Bidisc(w0, z0, 2.0 * b, 2.0 * a), opts.n_samples, opts.safety);
    bounds.T_hat = 4.0 * M2;
    bounds.K_hat = M2 / b;
    return bounds;
}

double guaranteed_radius(const LocalBounds& bounds, double safety_r) {
    if (!(bounds.a > 0.0) || !(bounds.b > 0.0))
        throw Error("guaranteed_radius: invalid bounds");
    const double inf = std::numeric_limits<double>::infinity();
    const double cap_m = bounds.M_hat > 0.0 ? bounds.b / bounds.M_hat : inf;
    const double cap_k = bounds.K_hat > 0.0 ? 1.0 / bounds.K_hat : inf;
    return safety_r * std::min({bounds.a, cap_m, cap_k});
}

double sigma_radius(double a, double b, double T) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("sigma_radius: radii must be positive");
    if (T < 0.0) throw Error("sigma_radius: negative T");
    if (T == 0.0) return a;
    return a * (1.0 - std::exp(-b / (2.0 * a * T)));
}

LocalSolution solve_local(const ExpressionAST& ast, const BranchState& state, cplx w0, cplx z0,
                          const LocalBounds& bounds, int order, const SolveOptions& opts) {
    if (order < 1) throw Error("solve_local: order must be >= 1");
    const double r = guaranteed_radius(bounds, opts.safety_r);
    if (!(r > 0.0)) throw Error("solve_local: guaranteed radius is not positive");

    TaylorSeries w = TaylorSeries::constant(z0, w0, order);
    for (int it = 0; it <= order; ++it) {
        const TaylorSeries f = eval_series(ast, w, z0, state, order, opts.eval);
        w = series_integrate(f, w0).truncated(order);
    }
    w.set_validity_radius(r);

    // Residual on the half-radius circle; F is evaluated pointwise with the
    // branch state transported from the center to each sample.
    double residual = 0.0;
    const double rho = 0.5 * r;
    for (int s = 0; s < opts.residual_samples; ++s) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(s) / opts.residual_samples;
        const cplx zs = z0 + rho * std::polar(1.0, theta);
        const cplx ws = w.eval(zs);
        BranchState st = state;
        update_branches_path(
            ast, st,
            [&](double t) {
                return std::pair<cplx, cplx>{w0 + t * (ws - w0), z0 + t * (zs - z0)};
            },
            opts.eval);
        const cplx fs = eval_at(ast, ws, zs, st, opts.eval);
        residual = std::max(residual, std::abs(w.eval_derivative(zs) - fs));
    }
    // Absolute tolerance at desk scale; the (1 + M_hat) factor keeps the
    // check meaningful when |F| is far above the double-precision noise
    // floor (e.g. near blow-up).
    if (residual > opts.residual_tol * (1.0 + bounds.M_hat))
        throw ResidualError("solve_local: residual " + std::to_string(residual) +
                                " above tolerance (order too low or bounds violated)",
                            residual);
    return LocalSolution{std::move(w), r, residual};
}

} // namespace painleve
