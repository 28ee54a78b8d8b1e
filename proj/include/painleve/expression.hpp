#ifndef PAINLEVE_EXPRESSION_HPP
#define PAINLEVE_EXPRESSION_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/errors.hpp"
#include "painleve/poly.hpp"
#include "painleve/series.hpp"

namespace painleve {

using cplx = std::complex<double>;

enum class NodeKind { Constant, VarW, VarZ, Add, Sub, Mul, Div, Pow, Rad };

struct Node {
    NodeKind kind;
    cplx value{};      // Constant
    int left = -1;     // first child
    int right = -1;    // second child (Div: denominator)
    int exponent = 0;  // Pow
    int rad_index = -1; // Rad: slot in the AST's radical table
};

/// One radical node rad(k, q): its index k, the radicand as a bivariate
/// polynomial (used for all evaluation), and the syntactic power base whose
/// zero set generates the branch-locus component.
struct Radical {
    int node = -1;
    int k = 0;
    BivariatePoly radicand;
    BivariatePoly component;
};

/// The multi-valued right-hand side F as a finite expression tree over w and
/// z with radical nodes over bivariate polynomials. Immutable after parsing;
/// all mutable sheet data lives in BranchState.
class ExpressionAST {
public:
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    const std::vector<Radical>& radicals() const { return radicals_; }
    /// Distinct components of the singular set A (radicand branch loci and
    /// denominator zero loci), normalized, deduplicated up to scalar
    /// multiples, constants removed.
    const std::vector<BivariatePoly>& singular_components() const { return singular_; }
    const std::string& source() const { return source_; }

private:
    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<Radical> radicals_;
    std::vector<BivariatePoly> singular_;
    std::string source_;
    friend ExpressionAST parse_expression(std::string_view);
};

/// Grammar: complex literals (decimal, optional i suffix), variables w and z,
/// + - * / ^ (integer exponents), rad(k, expr) with k >= 2, parentheses.
/// Radicands and denominators must reduce to bivariate polynomials
/// (denominators may also be products of polynomials and radicals).
ExpressionAST parse_expression(std::string_view text);

/// Current sheet value for each radical node, valid at one base point.
struct BranchState {
    std::vector<cplx> sheets;
    bool empty() const { return sheets.empty(); }
};

struct EvalOptions {
    double pole_tol = 1e-12;        // |denominator| below this is a pole of F
    double continuity_floor = 1e-10; // |radicand| below this blocks sheet transport
    double seed_rel_tol = 1e-8;      // |sheet^k - q| consistency tolerance
};

/// Principal-positive-real convention: each rad(k, q) receives the k-th root
/// of q(w, z) with argument in (-pi/k, pi/k], the branch that is positive on
/// the positive real axis.
BranchState init_branches(const ExpressionAST& ast, cplx w, cplx z,
                          const EvalOptions& opts = {});

/// Explicit sheet values, one per radical node in parse order; each must
/// satisfy sheet^k = q(w, z) within the consistency tolerance.
BranchState init_branches_explicit(const ExpressionAST& ast, cplx w, cplx z,
                                   std::span<const cplx> sheets,
                                   const EvalOptions& opts = {});

/// One continuity update of every sheet along the straight segment from
/// (prev_w, prev_z) to (w, z): the new sheet is the k-th root of the new
/// radicand value nearest in ratio-argument to the old sheet. The caller's
/// step control must keep the segment short enough that the radicand's
/// argument change stays under pi.
void update_branches(const ExpressionAST& ast, BranchState& state, cplx prev_w, cplx prev_z,
                     cplx w, cplx z, const EvalOptions& opts = {});

/// Adaptive transport along a path tau in [0,1] |-> (w, z): segments are
/// bisected until every radicand's relative change per segment is small.
void update_branches_path(const ExpressionAST& ast, BranchState& state,
                          const std::function<std::pair<cplx, cplx>(double)>& path,
                          const EvalOptions& opts = {});

/// Bottom-up evaluation at (w, z) with the given sheet values (no update).
cplx eval_at(const ExpressionAST& ast, cplx w, cplx z, const BranchState& state,
             const EvalOptions& opts = {});

/// Continuity update followed by evaluation; returns the value and the
/// updated state.
std::pair<cplx, BranchState> eval_with_branches(const ExpressionAST& ast, cplx w, cplx z,
                                                const BranchState& state, cplx prev_w,
                                                cplx prev_z, const EvalOptions& opts = {});

/// F composed with a candidate solution series, bottom-up: polynomial nodes
/// by series arithmetic, division by series inversion, rad(k, .) by
/// series_kth_root seeded with the branch state's sheet value.
TaylorSeries eval_series(const ExpressionAST& ast, const TaylorSeries& w_series, cplx z0,
                         const BranchState& state, int order, const EvalOptions& opts = {});

/// The components of A = N u p(M) for this expression.
inline const std::vector<BivariatePoly>& singular_set(const ExpressionAST& ast) {
    return ast.singular_components();
}

bool branch_state_consistent(const ExpressionAST& ast, const BranchState& state, cplx w, cplx z,
                             double rel_tol = 1e-8);

} // namespace painleve

#endif
