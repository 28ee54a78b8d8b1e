#include "painleve/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

namespace painleve {

// ---------------------------------------------------------------------------
// Arc

Arc::Arc(std::vector<cplx> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw Error("Arc: at least two vertices are required");
    lengths_.resize(vertices_.size());
    lengths_[0] = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        const double seg = std::abs(vertices_[i] - vertices_[i - 1]);
        if (!(seg > 0.0)) throw Error("Arc: consecutive vertices must be distinct");
        lengths_[i] = lengths_[i - 1] + seg;
    }
}

cplx Arc::point_at_length(double s) const {
    s = std::clamp(s, 0.0, total_length());
    auto it = std::upper_bound(lengths_.begin(), lengths_.end(), s);
    std::size_t seg = static_cast<std::size_t>(std::distance(lengths_.begin(), it));
    if (seg == 0) seg = 1;
    if (seg >= lengths_.size()) seg = lengths_.size() - 1;
    const double s0 = lengths_[seg - 1];
    const double len = lengths_[seg] - lengths_[seg - 1];
    const double frac = (s - s0) / len;
    return vertices_[seg - 1] + frac * (vertices_[seg] - vertices_[seg - 1]);
}

cplx Arc::point_at(double t) const { return point_at_length(t * total_length()); }

Arc Arc::reversed() const {
    std::vector<cplx> v(vertices_.rbegin(), vertices_.rend());
    return Arc(std::move(v));
}

bool Arc::is_closed(double tol) const {
    double scale = 0.0;
    for (const auto& v : vertices_) scale = std::max(scale, std::abs(v));
    return std::abs(vertices_.front() - vertices_.back()) <= tol * (1.0 + scale);
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
    case EventKind::SingularApproach: return "SingularApproach";
    case EventKind::Blowup: return "Blowup";
    case EventKind::StepUnderflow: return "StepUnderflow";
    case EventKind::ResidualFailure: return "ResidualFailure";
    case EventKind::BudgetExhausted: return "BudgetExhausted";
    }
    return "Unknown";
}

std::optional<cplx> ContinuationTrace::value_at_point(cplx z) const {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        if (std::abs(z - it->z) <= it->local.guaranteed_radius)
            return it->local.series.eval(z);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hypothesis checks

HypothesisReport check_hypotheses(const ExpressionAST& ast, const Arc& arc) {
    HypothesisReport report;
    std::vector<cplx> samples;
    const auto& v = arc.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        samples.push_back(v[i]);
        if (i + 1 < v.size()) samples.push_back(0.5 * (v[i] + v[i + 1]));
    }
    report.samples_checked = samples.size();
    const auto& components = singular_set(ast);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (const cplx nu : samples)
            if (line_contained(components[c], nu))
                report.violations.push_back({nu, c, components[c].to_string()});
    return report;
}

// ---------------------------------------------------------------------------
// Stepper: shared machinery of continue_along, endpoint_limit and
// extend_to_boundary.

namespace {

struct ExpandResult {
    LocalBounds bounds;
    LocalSolution sol;
    double sigma = 0.0;
    double r = 0.0;
};

class Stepper {
public:
    Stepper(const ExpressionAST& ast, const ContinuationOptions& opts)
        : ast_(ast), opts_(opts) {
        popts_.ceiling = opts.proximity_ceiling;
        popts_.roots.seed = opts.seed;
        coarse_ = BoundsOptions{opts.safety, opts.ladder_samples, opts.eval};
        fine_ = BoundsOptions{opts.safety, opts.bounds_samples, opts.eval};
        solve_ = SolveOptions{opts.safety_r, opts.residual_tol, 8, opts.eval};
    }

    cplx w{};
    cplx z{};
    double t = 0.0;
    BranchState state;

    double proximity() const { return proximity_at(w, z); }
    /// The ceiling scales with the solution so bidisc scales can track |w|
    /// when the singular set is far (movable-pole flows grow without bound).
    double proximity_at(cplx pw, cplx pz) const {
        ProximityOptions popts = popts_;
        popts.ceiling = popts_.ceiling * (1.0 + std::abs(pw));
        return proximity_estimate(singular_set(ast_), pw, pz, popts);
    }

    /// Bidisc scale selection and local solve at the current point. The
    /// square bidisc scale s is scanned geometrically down from half the
    /// proximity estimate (the doubled bidisc must stay clear of the
    /// singular set); the scale maximizing the guaranteed radius wins.
    std::variant<ExpandResult, Event> expand(double prox) {
        const double cap = prox; // already capped by the scaled ceiling
        if (!(cap > 0.0))
            return Event{t, EventKind::SingularApproach, "proximity estimate is zero"};
        double best_r = -1.0, best_s = 0.0;
        double s = 0.5 * cap;
        int declines = 0;
        const double clear = prox / (2.0 * std::sqrt(2.0)); // doubled-bidisc diagonal bound
        for (int lvl = 0; lvl < opts_.ladder_levels; ++lvl, s *= 0.5) {
            if (s >= clear) continue;
            if (s < opts_.min_step) break;
            try {
                const LocalBounds bc = estimate_bounds(ast_, state, w, z, s, s, coarse_);
                const double rc = guaranteed_radius(bc, opts_.safety_r);
                if (rc > best_r) {
                    best_r = rc;
                    best_s = s;
                    declines = 0;
                } else if (++declines >= 2) {
                    break;
                }
            } catch (const NumericalError&) {
                continue;
            }
        }
        if (best_r < 0.0)
            return Event{t, EventKind::SingularApproach,
                         "bound estimation failed at every bidisc scale"};
        if (best_r < opts_.min_step)
            return Event{t, EventKind::StepUnderflow,
                         "guaranteed radius " + std::to_string(best_r) + " below minimum step"};

        std::string last_error;
        bool residual_failed = false;
        double sf = best_s;
        for (int attempt = 0; attempt < 3; ++attempt, sf *= 0.5) {
            LocalBounds bounds;
            try {
                bounds = estimate_bounds(ast_, state, w, z, sf, sf, fine_);
            } catch (const NumericalError& e) {
                last_error = e.what();
                continue;
            }
            const double r = guaranteed_radius(bounds, opts_.safety_r);
            if (r < opts_.min_step)
                return Event{t, EventKind::StepUnderflow,
                             "guaranteed radius " + std::to_string(r) + " below minimum step"};
            try {
                LocalSolution sol = solve_local(ast_, state, w, z, bounds, opts_.order, solve_);
                const double sigma = sigma_radius(sf, sf, bounds.T_hat);
                return ExpandResult{bounds, std::move(sol), sigma, r};
            } catch (const ResidualError& e) {
                residual_failed = true;
                last_error = e.what();
            } catch (const NumericalError& e) {
                last_error = e.what();
            }
        }
        if (residual_failed)
            return Event{t, EventKind::ResidualFailure, last_error};
        return Event{t, EventKind::SingularApproach, last_error};
    }

    /// Moves to z_new along the straight chord, transporting the sheets
    /// along the solution curve tau -> (series(z(tau)), z(tau)).
    std::optional<Event> advance(const LocalSolution& sol, cplx z_new, double t_new) {
        const cplx z_old = z, w_old = w;
        const cplx w_new = sol.series.eval(z_new);
        try {
            update_branches_path(
                ast_, state,
                [&](double tau) {
                    const cplx zz = z_old + tau * (z_new - z_old);
                    return std::pair<cplx, cplx>{tau == 0.0 ? w_old : sol.series.eval(zz), zz};
                },
                opts_.eval);
        } catch (const NumericalError& e) {
            return Event{t, EventKind::SingularApproach, e.what()};
        }
        w = w_new;
        z = z_new;
        t = t_new;
        return std::nullopt;
    }

private:
    const ExpressionAST& ast_;
    const ContinuationOptions& opts_;
    ProximityOptions popts_;
    BoundsOptions coarse_, fine_;
    SolveOptions solve_;
};

BranchState make_initial_state(const ExpressionAST& ast, cplx w0, cplx z0,
                               const ContinuationOptions& opts) {
    if (opts.initial_sheets)
        return init_branches_explicit(ast, w0, z0, *opts.initial_sheets, opts.eval);
    return init_branches(ast, w0, z0, opts.eval);
}

/// Smallest vertex breakpoint strictly past s, or the total length.
double next_break(const Arc& arc, double s) {
    const auto& L = arc.cumulative_lengths();
    const double eps = 1e-15 * arc.total_length();
    for (const double l : L)
        if (l > s + eps) return l;
    return arc.total_length();
}

} // namespace

// ---------------------------------------------------------------------------

ContinuationTrace continue_along(const ExpressionAST& ast, cplx w0, cplx z0, const Arc& arc,
                                 const ContinuationOptions& opts) {
    {
        double scale = std::max(std::abs(z0), std::abs(arc.vertices().front()));
        if (std::abs(arc.vertices().front() - z0) > 1e-12 * (1.0 + scale))
            throw Error("continue_along: arc must start at z0");
    }
    const HypothesisReport hyp = check_hypotheses(ast, arc);
    if (!hyp.passed()) {
        std::ostringstream os;
        os << "hypothesis violation: the complex line v = (" << hyp.violations[0].nu.real() << ","
           << hyp.violations[0].nu.imag() << ") lies in the singular component "
           << hyp.violations[0].component_text;
        throw HypothesisError(os.str());
    }

    Stepper st(ast, opts);
    st.w = w0;
    st.z = z0;
    st.t = 0.0;
    st.state = make_initial_state(ast, w0, z0, opts);

    ContinuationTrace trace;
    trace.final_t = 0.0;
    trace.final_z = z0;
    trace.final_w = w0;
    trace.final_sheets = st.state.sheets;

    const double L = arc.total_length();
    double s_cur = 0.0;

    auto stop = [&](EventKind kind, std::string payload) {
        trace.events.push_back({st.t, kind, std::move(payload)});
        trace.status = TraceStatus::Stopped;
        trace.stop_event = kind;
        trace.final_t = st.t;
        trace.final_z = st.z;
        trace.final_w = st.w;
        trace.final_sheets = st.state.sheets;
    };

    long n = 0;
    for (; n < opts.max_steps; ++n) {
        const double prox = st.proximity();
        if (prox < opts.proximity_floor) {
            stop(EventKind::SingularApproach,
                 "proximity " + std::to_string(prox) + " under the floor");
            return trace;
        }
        auto res = st.expand(prox);
        if (std::holds_alternative<Event>(res)) {
            const Event& e = std::get<Event>(res);
            stop(e.kind, e.payload);
            return trace;
        }
        ExpandResult ex = std::get<ExpandResult>(std::move(res));

        if (!trace.steps.empty()) {
            const StepRecord& prev = trace.steps.back();
            const cplx mid = 0.5 * (prev.z + st.z);
            const double mismatch =
                std::abs(prev.local.series.eval(mid) - ex.sol.series.eval(mid));
            if (mismatch > opts.gluing_tol * (1.0 + std::abs(st.w))) {
                stop(EventKind::ResidualFailure,
                     "gluing mismatch " + std::to_string(mismatch) + " at the overlap midpoint");
                return trace;
            }
        }

        trace.steps.push_back(
            {st.t, st.z, st.w, ex.sol, ex.bounds, ex.sigma, prox, st.state.sheets});

        const double chord_cap = opts.step_fraction * ex.r;
        const double s_target = std::min(s_cur + chord_cap, next_break(arc, s_cur));
        const double t_new = s_target / L;
        const cplx z_new = arc.point_at_length(s_target);

        const cplx w_new = ex.sol.series.eval(z_new);
        if (std::abs(w_new) > opts.r_max) {
            st.t = t_new;
            st.z = z_new;
            st.w = w_new;
            stop(EventKind::Blowup, "|w| = " + std::to_string(std::abs(w_new)) +
                                        " above the blow-up threshold");
            return trace;
        }
        if (auto ev = st.advance(ex.sol, z_new, t_new)) {
            stop(ev->kind, ev->payload);
            return trace;
        }
        s_cur = s_target;
        trace.final_t = st.t;
        trace.final_z = st.z;
        trace.final_w = st.w;
        trace.final_sheets = st.state.sheets;

        if (s_cur >= L * (1.0 - 1e-15)) {
            trace.status = TraceStatus::Completed;
            trace.final_t = 1.0;
            return trace;
        }
    }
    stop(EventKind::BudgetExhausted, "step budget exhausted after " + std::to_string(n) + " steps");
    return trace;
}

// ---------------------------------------------------------------------------

LimitVerdict verdict_from_samples(const std::vector<SpherePoint>& samples,
                                  const ContinuationOptions& opts) {
    if (samples.size() < 4)
        throw TraceError("verdict_from_samples: fewer than 4 samples available");
    const std::size_t window =
        std::min<std::size_t>(static_cast<std::size_t>(opts.tail_window), samples.size());
    const std::vector<SpherePoint> tail(samples.end() - static_cast<std::ptrdiff_t>(window),
                                        samples.end());

    LimitVerdict verdict;
    verdict.samples_used = static_cast<int>(window);
    double diameter = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i)
        for (std::size_t j = i + 1; j < tail.size(); ++j)
            diameter = std::max(diameter, chordal_distance(tail[i], tail[j]));
    verdict.tail_diameter = diameter;

    if (diameter >= opts.verdict_tol) {
        verdict.kind = LimitVerdict::Kind::Undetermined;
        std::ostringstream os;
        os << "tail chordal diameter " << diameter << " exceeds the verdict tolerance "
           << opts.verdict_tol << " (no convergence detected within the sample budget)";
        verdict.diagnostic = os.str();
        return verdict;
    }
    const double big = 1.0 / opts.verdict_tol;
    bool all_big = true;
    for (const auto& p : tail)
        if (!p.is_infinity() && std::abs(p.value()) <= big) {
            all_big = false;
            break;
        }
    if (all_big) {
        verdict.kind = LimitVerdict::Kind::Infinity;
        return verdict;
    }
    const SpherePoint mean = chordal_mean(tail);
    if (mean.is_infinity()) {
        verdict.kind = LimitVerdict::Kind::Infinity;
        return verdict;
    }
    verdict.kind = LimitVerdict::Kind::Finite;
    verdict.value = mean.value();
    return verdict;
}

LimitVerdict endpoint_limit(const ContinuationTrace& trace, const ExpressionAST& ast,
                            const Arc& arc, const ContinuationOptions& opts) {
    std::vector<SpherePoint> samples;
    for (const auto& s : trace.steps) samples.push_back(SpherePoint::finite(s.w));
    if (trace.steps.empty() || trace.final_t > trace.steps.back().t)
        samples.push_back(SpherePoint::finite(trace.final_w));

    if (trace.status == TraceStatus::Completed) {
        // The arc was exhausted: the limit is read off the trace's own dense
        // output on a geometric tail toward t = 1.
        if (!trace.steps.empty()) {
            const double gap = 1.0 - trace.steps.back().t;
            for (int j = 1; j <= opts.j_max; ++j) {
                const double tj = 1.0 - std::ldexp(gap, -j);
                const auto v = trace.value_at_point(arc.point_at(tj));
                if (!v) break;
                samples.push_back(SpherePoint::finite(*v));
            }
        }
        return verdict_from_samples(samples, opts);
    }

    // Resume the continuation toward t = 1 with geometric target times. The
    // proximity-floor stop is lifted; step underflow and blow-up still end
    // the dive.
    Stepper st(ast, opts);
    st.w = trace.final_w;
    st.z = trace.final_z;
    st.t = trace.final_t;
    st.state.sheets = trace.final_sheets;

    const double gap = 1.0 - st.t;
    const double L = arc.total_length();
    if (gap > 0.0) {
        double s_cur = st.t * L;
        long budget = opts.max_steps;
        bool dead = false;
        for (int j = 1; j <= opts.j_max && !dead; ++j) {
            const double sj = (1.0 - std::ldexp(gap, -j)) * L;
            while (s_cur < sj * (1.0 - 1e-15)) {
                if (--budget < 0 || std::abs(st.w) > opts.r_max) {
                    dead = true;
                    break;
                }
                const double prox = st.proximity();
                if (!(prox > 0.0)) {
                    dead = true;
                    break;
                }
                auto res = st.expand(prox);
                if (std::holds_alternative<Event>(res)) {
                    dead = true;
                    break;
                }
                const ExpandResult& ex = std::get<ExpandResult>(res);
                const double s_target =
                    std::min({s_cur + opts.step_fraction * ex.r, next_break(arc, s_cur), sj});
                if (st.advance(ex.sol, arc.point_at_length(s_target), s_target / L)) {
                    dead = true;
                    break;
                }
                s_cur = s_target;
            }
            if (!dead) samples.push_back(SpherePoint::finite(st.w));
        }
    }
    return verdict_from_samples(samples, opts);
}

// ---------------------------------------------------------------------------

std::pair<cplx, LocalSolution> extend_to_boundary(const ContinuationTrace& trace, cplx z_inf,
                                                  const ExpressionAST& ast,
                                                  const ContinuationOptions& opts) {
    if (trace.steps.empty() && trace.final_sheets.empty() && trace.final_z == cplx{})
        throw TraceError("extend_to_boundary: empty trace");

    struct Candidate {
        cplx w, z;
        std::vector<cplx> sheets;
    };
    std::vector<Candidate> candidates;
    candidates.push_back({trace.final_w, trace.final_z, trace.final_sheets});
    for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it)
        candidates.push_back({it->w, it->z, it->sheets});

    Stepper st(ast, opts);
    int tried = 0;
    for (const auto& cand : candidates) {
        if (++tried > 64) break;
        st.w = cand.w;
        st.z = cand.z;
        st.state.sheets = cand.sheets;
        const double prox = st.proximity();
        if (prox < opts.proximity_floor) continue;
        auto res = st.expand(prox);
        if (std::holds_alternative<Event>(res)) continue;
        ExpandResult ex = std::get<ExpandResult>(std::move(res));
        if (std::abs(z_inf - cand.z) >= ex.r) continue;
        const cplx w_inf = ex.sol.series.eval(z_inf);
        // The theorem requires F holomorphic at the limit candidate.
        if (st.proximity_at(w_inf, z_inf) < opts.proximity_floor)
            throw BoundaryError("extend_to_boundary: limit candidate too close to the singular set");
        return {w_inf, std::move(ex.sol)};
    }
    throw BoundaryError("extend_to_boundary: z_inf lies outside every attainable guaranteed disc");
}

// ---------------------------------------------------------------------------

MonodromyReport monodromy_loop(const ExpressionAST& ast, cplx w0, cplx z0, const Arc& loop_arc,
                               const ContinuationOptions& opts) {
    if (!loop_arc.is_closed()) throw Error("monodromy_loop: arc is not closed");
    {
        const double scale = std::max(std::abs(z0), std::abs(loop_arc.vertices().front()));
        if (std::abs(loop_arc.vertices().front() - z0) > 1e-12 * (1.0 + scale))
            throw Error("monodromy_loop: loop must start at z0");
    }
    const BranchState start = make_initial_state(ast, w0, z0, opts);
    BranchState state = start;
    const auto& v = loop_arc.vertices();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const cplx za = v[i], zb = v[i + 1];
        update_branches_path(
            ast, state,
            [&](double tau) { return std::pair<cplx, cplx>{w0, za + tau * (zb - za)}; },
            opts.eval);
    }

    MonodromyReport report;
    for (std::size_t i = 0; i < ast.radicals().size(); ++i) {
        const int k = ast.radicals()[i].k;
        const cplx mult = state.sheets[i] / start.sheets[i];
        cplx mk{1.0, 0.0};
        for (int j = 0; j < k; ++j) mk *= mult;
        const bool unity = std::abs(mk - 1.0) <= 1e-6;
        int power = 0;
        if (unity) {
            const double kd = static_cast<double>(k);
            long p = std::lround(std::arg(mult) * kd / (2.0 * std::numbers::pi));
            power = static_cast<int>(((p % k) + k) % k);
        }
        report.entries.push_back({k, mult, unity, power});
    }
    return report;
}

} // namespace painleve
