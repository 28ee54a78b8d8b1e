#ifndef PAINLEVE_LOCAL_SOLVER_HPP
#define PAINLEVE_LOCAL_SOLVER_HPP

#include <complex>

#include "painleve/expression.hpp"
#include "painleve/sampling.hpp"
#include "painleve/series.hpp"

namespace painleve {

/// Sampled bounds for one local existence step on the bidisc of radii
/// (b, a) about (w0, z0): M_hat bounds |F|, K_hat bounds |dF/dw|, T_hat
/// bounds the weighted coefficient sum entering the sigma radius.
struct LocalBounds {
    double a = 0.0; // z-radius
    double b = 0.0; // w-radius
    double M_hat = 0.0;
    double K_hat = 0.0;
    double T_hat = 0.0;
};

struct BoundsOptions {
    double safety = 1.25;
    int n_samples = 64;
    EvalOptions eval;
};

/// Boundary-sampled bounds: M_hat is the safety-scaled torus max of |F| on
/// radii (b, a); the same max M2 on the doubled radii (2b, 2a) gives
/// T_hat = 4 M2 (coefficient-sum bound via |c_kl| <= M2 / ((2b)^k (2a)^l))
/// and K_hat = M2 / b (Cauchy estimate for dF/dw). The closed doubled bidisc
/// must stay clear of the singular set; evaluation failures propagate as
/// SampleError.
LocalBounds estimate_bounds(const ExpressionAST& ast, const BranchState& state, cplx w0, cplx z0,
                            double a, double b, const BoundsOptions& opts = {});

/// The existence radius r = safety_r * min(a, b/M, 1/K), with b/0 and 1/0
/// read as +infinity. safety_r keeps the strict inequality of the
/// underlying theorem.
double guaranteed_radius(const LocalBounds& bounds, double safety_r = 0.8);

/// Uniform lower bound sigma = a (1 - exp(-b / (2 a T))) for the radius of
/// convergence of the local solutions appearing in the chained-disc
/// argument.
double sigma_radius(double a, double b, double T);

/// Local solution element: the solution series about its center, the radius
/// on which the existence step guarantees it, and the sampled residual
/// |w'(z) - F(w(z), z)| on the half-radius circle.
struct LocalSolution {
    TaylorSeries series;
    double guaranteed_radius = 0.0;
    double residual = 0.0;
};

struct SolveOptions {
    double safety_r = 0.8;
    double residual_tol = 1e-8;
    int residual_samples = 8;
    EvalOptions eval;
};

/// Picard iteration on truncated series: w <- w0 + integral of F(w(z), z).
/// Runs order+1 iterations (each fixes one more coefficient). The residual
/// is checked against residual_tol scaled by (1 + M_hat); failure throws
/// ResidualError.
LocalSolution solve_local(const ExpressionAST& ast, const BranchState& state, cplx w0, cplx z0,
                          const LocalBounds& bounds, int order, const SolveOptions& opts = {});

} // namespace painleve

#endif
