#ifndef PAINLEVE_CONTINUATION_HPP
#define PAINLEVE_CONTINUATION_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "painleve/expression.hpp"
#include "painleve/local_solver.hpp"
#include "painleve/poly.hpp"
#include "painleve/sphere.hpp"

namespace painleve {

/// Polygonal arc in the z-plane with chord-length parameterization over
/// [0, 1]. Consecutive vertices must be distinct.
class Arc {
public:
    explicit Arc(std::vector<cplx> vertices);
    const std::vector<cplx>& vertices() const { return vertices_; }
    double total_length() const { return lengths_.back(); }
    cplx point_at(double t) const;
    cplx point_at_length(double s) const;
    /// Cumulative lengths of the first k segments, k = 0..n-1.
    const std::vector<double>& cumulative_lengths() const { return lengths_; }
    Arc reversed() const;
    bool is_closed(double tol = 1e-12) const;

private:
    std::vector<cplx> vertices_;
    std::vector<double> lengths_;
};

enum class EventKind { SingularApproach, Blowup, StepUnderflow, ResidualFailure, BudgetExhausted };

const char* event_kind_name(EventKind kind);

struct Event {
    double t;
    EventKind kind;
    std::string payload;
};

enum class TraceStatus { Completed, Stopped };

/// One expansion point of the continuation: the local solution there, the
/// bounds it was built from, and the branch sheet snapshot.
struct StepRecord {
    double t;
    cplx z;
    cplx w;
    LocalSolution local;
    LocalBounds bounds;
    double sigma;
    double proximity;
    std::vector<cplx> sheets;
};

/// Ordered record of the continuation along an arc. `final_t/z/w/sheets`
/// hold the last point reached (strictly past the last expansion center
/// whenever an advance happened).
struct ContinuationTrace {
    std::vector<StepRecord> steps;
    std::vector<Event> events;
    TraceStatus status = TraceStatus::Stopped;
    std::optional<EventKind> stop_event;
    double final_t = 0.0;
    cplx final_z{};
    cplx final_w{};
    std::vector<cplx> final_sheets;

    /// Dense output: evaluates the most recent local series whose guaranteed
    /// disc contains z.
    std::optional<cplx> value_at_point(cplx z) const;
};

struct ContinuationOptions {
    int order = 24;
    double safety = 1.25;          // bound-sampling safety factor
    double safety_r = 0.8;         // strictness factor on the existence radius
    int bounds_samples = 32;       // torus grid for the final bounds of a step
    int ladder_samples = 12;       // torus grid while scanning bidisc scales
    int ladder_levels = 14;        // geometric bidisc scales tried per step
    double residual_tol = 1e-8;
    double proximity_floor = 1e-4; // stop distance to the singular set
    double proximity_ceiling = 8.0;
    double min_step = 1e-9;
    double r_max = 1e6;            // blow-up threshold on |w|
    double verdict_tol = 1e-3;     // chordal tolerance of the limit verdict
    int j_max = 40;                // geometric endpoint samples
    int tail_window = 8;
    double gluing_tol = 1e-7;
    long max_steps = 200000;
    double step_fraction = 0.5;    // advance at most this fraction of r
    std::uint64_t seed = 12345;
    EvalOptions eval;
    std::optional<std::vector<cplx>> initial_sheets; // overrides the branch convention
};

struct HypothesisReport {
    struct Violation {
        cplx nu;
        std::size_t component;
        std::string component_text;
    };
    std::vector<Violation> violations;
    std::size_t samples_checked = 0;
    bool passed() const { return violations.empty(); }
};

/// Checks that no sampled complex line v = nu along the arc (vertices and
/// segment midpoints) lies inside a component of the singular set.
HypothesisReport check_hypotheses(const ExpressionAST& ast, const Arc& arc);

/// Analytic continuation of the Cauchy problem w' = F(w, z), w(z0) = w0
/// along the arc: adaptive expansion steps sized by the guaranteed radius,
/// sheet transport along each chord, and event detection.
ContinuationTrace continue_along(const ExpressionAST& ast, cplx w0, cplx z0, const Arc& arc,
                                 const ContinuationOptions& opts = {});

struct LimitVerdict {
    enum class Kind { Finite, Infinity, Undetermined };
    Kind kind = Kind::Undetermined;
    cplx value{};          // meaningful for Finite
    double tail_diameter = 0.0;
    int samples_used = 0;
    std::string diagnostic;
};

/// Verdict over the tail of a sample sequence: Finite/Infinity when the
/// chordal diameter of the last `tail_window` samples is under the
/// tolerance (Infinity when every tail modulus exceeds 1/tol), else
/// Undetermined. Undetermined never disproves the theorem; it signals a
/// hypothesis violation or numerical failure.
LimitVerdict verdict_from_samples(const std::vector<SpherePoint>& samples,
                                  const ContinuationOptions& opts = {});

/// Endpoint limit of the continued solution on the Riemann sphere: resumes
/// the continuation toward t = 1 with geometric target times
/// t_j = 1 - 2^-j (1 - t_last) (the proximity-floor stop is lifted; only
/// step underflow and blow-up remain), then applies verdict_from_samples to
/// the recorded values.
LimitVerdict endpoint_limit(const ContinuationTrace& trace, const ExpressionAST& ast,
                            const Arc& arc, const ContinuationOptions& opts = {});

/// Boundary extension: a fresh local solve at a trace point whose
/// guaranteed disc reaches z_inf; returns the continuation's value there
/// and the local element. Fails when no disc reaches z_inf or the candidate
/// value sits under the proximity floor.
std::pair<cplx, LocalSolution> extend_to_boundary(const ContinuationTrace& trace, cplx z_inf,
                                                  const ExpressionAST& ast,
                                                  const ContinuationOptions& opts = {});

struct MonodromyReport {
    struct Entry {
        int k;
        cplx multiplier;
        bool is_root_of_unity;
        int power; // multiplier = exp(2 pi i power / k) when is_root_of_unity
    };
    std::vector<Entry> entries;
};

/// Transports the branch state around a closed loop (w held fixed, no ODE
/// solve) and reports the sheet multiplier of every radical node.
MonodromyReport monodromy_loop(const ExpressionAST& ast, cplx w0, cplx z0, const Arc& loop_arc,
                               const ContinuationOptions& opts = {});

} // namespace painleve

#endif
