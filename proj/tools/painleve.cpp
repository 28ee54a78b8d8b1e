// Command-line front end: numerical continuation of complex Cauchy problems
// with finitely multiple-valued right-hand sides, and endpoint-limit verdicts
// on the Riemann sphere.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "painleve/config.hpp"
#include "painleve/continuation.hpp"
#include "painleve/expression.hpp"

namespace {

using namespace painleve;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitHypothesis = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliArgs {
    std::string config_path;
    std::string out_dir = ".";
    bool emit_plot_data = false;
    bool dump = false;
    int order_override = -1;
    long long seed_override = -1;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw ConfigError(message);
}

ProblemConfig load(const CliArgs& args) {
    ProblemConfig cfg = load_config(args.config_path);
    if (args.order_override > 0) cfg.options.order = args.order_override;
    if (args.seed_override >= 0) cfg.options.seed = static_cast<std::uint64_t>(args.seed_override);
    return cfg;
}

Arc make_arc(const ProblemConfig& cfg) {
    require(cfg.arc.size() >= 2, "config field 'arc' needs at least two vertices");
    require(cfg.z0.has_value(), "config field 'initial.z' is required");
    Arc arc(cfg.arc);
    const double scale = std::max(std::abs(*cfg.z0), std::abs(cfg.arc.front()));
    require(std::abs(cfg.arc.front() - *cfg.z0) <= 1e-12 * (1.0 + scale),
            "arc must start at initial.z");
    return arc;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write output file '" + path.string() + "'");
    out << content;
}

std::string trace_csv(const ContinuationTrace& trace) {
    std::string csv = "t,re_z,im_z,re_w,im_w,radius,event\n";
    auto row = [&](double t, cplx z, cplx w, double radius, const std::string& event) {
        csv += fmt(t) + "," + fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(w.real()) + "," +
               fmt(w.imag()) + "," + fmt(radius) + "," + event + "\n";
    };
    for (const auto& s : trace.steps) row(s.t, s.z, s.w, s.local.guaranteed_radius, "");
    const bool final_past_steps =
        trace.steps.empty() || trace.final_t > trace.steps.back().t;
    if (final_past_steps)
        row(trace.final_t, trace.final_z, trace.final_w, 0.0,
            trace.stop_event ? event_kind_name(*trace.stop_event) : "");
    else if (trace.stop_event && !trace.steps.empty())
        csv += "# stopped: " + std::string(event_kind_name(*trace.stop_event)) + "\n";
    return csv;
}

void emit_plot_data(const fs::path& out_dir, const ExpressionAST& ast,
                    const ContinuationTrace& trace, const ContinuationOptions& opts) {
    const auto& components = singular_set(ast);
    RootOptions ropts;
    ropts.seed = opts.seed;
    for (std::size_t c = 0; c < components.size(); ++c) {
        std::string csv = "t,re_z,im_z,root_index,re_u,im_u\n";
        for (const auto& s : trace.steps) {
            if (line_contained(components[c], s.z)) continue;
            Fiber f;
            try {
                f = fiber_roots(components[c], s.z, ropts);
            } catch (const NumericalError&) {
                continue;
            }
            int idx = 0;
            for (const auto& r : f.roots)
                csv += fmt(s.t) + "," + fmt(s.z.real()) + "," + fmt(s.z.imag()) + "," +
                       std::to_string(idx++) + "," + fmt(r.value.real()) + "," +
                       fmt(r.value.imag()) + "\n";
        }
        write_file(out_dir / ("fiber_locus_" + std::to_string(c) + ".csv"), csv);
    }
}

ordered_json trace_summary(const ContinuationTrace& trace) {
    ordered_json j;
    j["status"] = trace.status == TraceStatus::Completed ? "completed" : "stopped";
    j["stop_event"] =
        trace.stop_event ? ordered_json(event_kind_name(*trace.stop_event)) : ordered_json(nullptr);
    j["steps"] = trace.steps.size();
    j["final_t"] = trace.final_t;
    j["final_z"] = format_complex(trace.final_z);
    j["final_w"] = format_complex(trace.final_w);
    return j;
}

int subcommand_exit(const ContinuationTrace& trace) {
    if (trace.stop_event && *trace.stop_event == EventKind::ResidualFailure)
        return kExitNumerical;
    return kExitOk;
}

int cmd_solve(const CliArgs& args, const ProblemConfig& cfg) {
    require(cfg.w0.has_value(), "config field 'initial.w' is required");
    const ExpressionAST ast = parse_expression(cfg.rhs);
    const Arc arc = make_arc(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const ContinuationTrace trace = continue_along(ast, *cfg.w0, *cfg.z0, arc, cfg.options);
    const auto wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "trace.csv", trace_csv(trace));
    if (args.emit_plot_data) emit_plot_data(args.out_dir, ast, trace, cfg.options);

    ordered_json j = trace_summary(trace);
    j["wall_ms"] = wall;
    std::cout << j.dump(2) << "\n";
    return subcommand_exit(trace);
}

int cmd_limit(const CliArgs& args, const ProblemConfig& cfg) {
    require(cfg.w0.has_value(), "config field 'initial.w' is required");
    const ExpressionAST ast = parse_expression(cfg.rhs);
    const Arc arc = make_arc(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const ContinuationTrace trace = continue_along(ast, *cfg.w0, *cfg.z0, arc, cfg.options);
    const LimitVerdict verdict = endpoint_limit(trace, ast, arc, cfg.options);
    const auto wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "trace.csv", trace_csv(trace));
    if (args.emit_plot_data) emit_plot_data(args.out_dir, ast, trace, cfg.options);

    ordered_json j;
    switch (verdict.kind) {
    case LimitVerdict::Kind::Finite: j["verdict"] = "finite"; break;
    case LimitVerdict::Kind::Infinity: j["verdict"] = "infinity"; break;
    case LimitVerdict::Kind::Undetermined: j["verdict"] = "undetermined"; break;
    }
    j["value"] = verdict.kind == LimitVerdict::Kind::Finite
                     ? ordered_json(format_complex(verdict.value))
                     : ordered_json(nullptr);
    j["tail_diameter"] = verdict.tail_diameter;
    j["samples_used"] = verdict.samples_used;
    if (!verdict.diagnostic.empty()) j["diagnostic"] = verdict.diagnostic;
    j["trace"] = trace_summary(trace);
    j["wall_ms"] = wall;
    const std::string summary = j.dump(2) + "\n";
    write_file(fs::path(args.out_dir) / "summary.json", summary);
    std::cout << summary;
    return subcommand_exit(trace);
}

int cmd_fiber(const CliArgs&, const ProblemConfig& cfg) {
    require(cfg.nu.has_value(), "config field 'nu' is required for the fiber subcommand");
    const ExpressionAST ast = parse_expression(cfg.rhs);
    RootOptions ropts;
    ropts.seed = cfg.options.seed;
    ordered_json j;
    j["nu"] = format_complex(*cfg.nu);
    ordered_json comps = ordered_json::array();
    for (const auto& P : singular_set(ast)) {
        ordered_json e;
        e["component"] = P.to_string();
        if (line_contained(P, *cfg.nu)) {
            e["line_contained"] = true;
        } else {
            e["line_contained"] = false;
            const Fiber f = fiber_roots(P, *cfg.nu, ropts);
            e["degree_drop"] = f.degree_drop;
            ordered_json roots = ordered_json::array();
            for (const auto& r : f.roots) {
                ordered_json rj;
                rj["value"] = format_complex(r.value);
                rj["multiplicity"] = r.multiplicity;
                roots.push_back(rj);
            }
            e["roots"] = roots;
        }
        comps.push_back(e);
    }
    j["components"] = comps;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_check_line(const CliArgs&, const ProblemConfig& cfg) {
    const ExpressionAST ast = parse_expression(cfg.rhs);
    ordered_json j;
    ordered_json checks = ordered_json::array();
    bool violated = false;

    if (!cfg.arc.empty()) {
        const Arc arc = Arc(cfg.arc);
        const HypothesisReport report = check_hypotheses(ast, arc);
        j["samples_checked"] = report.samples_checked;
        for (const auto& v : report.violations) {
            ordered_json e;
            e["nu"] = format_complex(v.nu);
            e["component"] = v.component_text;
            checks.push_back(e);
        }
        violated = !report.passed();
    }
    if (cfg.nu) {
        for (const auto& P : singular_set(ast))
            if (line_contained(P, *cfg.nu)) {
                ordered_json e;
                e["nu"] = format_complex(*cfg.nu);
                e["component"] = P.to_string();
                checks.push_back(e);
                violated = true;
            }
    }
    require(!cfg.arc.empty() || cfg.nu.has_value(),
            "check-line needs an 'arc' or a 'nu' in the config");
    j["violations"] = checks;
    j["passed"] = !violated;
    std::cout << j.dump(2) << "\n";
    return violated ? kExitHypothesis : kExitOk;
}

int cmd_monodromy(const CliArgs&, const ProblemConfig& cfg) {
    require(cfg.w0.has_value(), "config field 'initial.w' is required");
    require(cfg.loop.size() >= 3, "config field 'loop' needs a closed vertex list");
    const ExpressionAST ast = parse_expression(cfg.rhs);
    const Arc loop(cfg.loop);
    require(loop.is_closed(), "config field 'loop' must be closed (first vertex = last)");
    const cplx z0 = cfg.z0 ? *cfg.z0 : cfg.loop.front();
    const MonodromyReport report = monodromy_loop(ast, *cfg.w0, z0, loop, cfg.options);
    ordered_json j;
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        ordered_json ej;
        ej["k"] = e.k;
        ej["multiplier"] = format_complex(e.multiplier);
        ej["is_root_of_unity"] = e.is_root_of_unity;
        if (e.is_root_of_unity) ej["power"] = e.power;
        entries.push_back(ej);
    }
    j["radicals"] = entries;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_bounds(const CliArgs&, const ProblemConfig& cfg) {
    require(cfg.w0.has_value(), "config field 'initial.w' is required");
    require(cfg.z0.has_value(), "config field 'initial.z' is required");
    const ExpressionAST ast = parse_expression(cfg.rhs);
    const cplx w0 = *cfg.w0, z0 = *cfg.z0;
    const ContinuationOptions& o = cfg.options;

    BranchState state = o.initial_sheets
                            ? init_branches_explicit(ast, w0, z0, *o.initial_sheets, o.eval)
                            : init_branches(ast, w0, z0, o.eval);
    ProximityOptions popts;
    popts.ceiling = o.proximity_ceiling;
    popts.roots.seed = o.seed;
    const double prox = proximity_estimate(singular_set(ast), w0, z0, popts);
    require(prox > 0.0, "initial point lies on the singular set");
    const double s = 0.25 * std::min(prox, o.proximity_ceiling);
    BoundsOptions bopts{o.safety, o.bounds_samples, o.eval};
    const LocalBounds bounds = estimate_bounds(ast, state, w0, z0, s, s, bopts);
    ordered_json j;
    j["proximity"] = prox;
    j["a"] = bounds.a;
    j["b"] = bounds.b;
    j["M_hat"] = bounds.M_hat;
    j["K_hat"] = bounds.K_hat;
    j["T_hat"] = bounds.T_hat;
    j["r"] = guaranteed_radius(bounds, o.safety_r);
    j["sigma"] = sigma_radius(bounds.a, bounds.b, bounds.T_hat);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"painleve: analytic continuation of complex Cauchy problems with "
                 "multiple-valued right-hand sides, with endpoint limits on the Riemann sphere"};
    app.require_subcommand(1);

    CliArgs args;
    std::string subcommand;
    for (const char* name : {"solve", "limit", "fiber", "check-line", "monodromy", "bounds"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "problem config file (JSON)")->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_flag("--emit-plot-data", args.emit_plot_data,
                      "also write fiber loci of the singular components along the trace");
        sub->add_option("--order", args.order_override, "series truncation order override");
        sub->add_option("--seed", args.seed_override, "root-finder seed override");
        sub->add_flag("--dump-config", args.dump, "print the normalized config and exit");
        sub->callback([&subcommand, name]() { subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitOk;
    }

    try {
        const ProblemConfig cfg = load(args);
        if (args.dump) {
            // Validate the expression before echoing the normalized config.
            parse_expression(cfg.rhs);
            std::cout << dump_config(cfg);
            return kExitOk;
        }
        if (subcommand == "solve") return cmd_solve(args, cfg);
        if (subcommand == "limit") return cmd_limit(args, cfg);
        if (subcommand == "fiber") return cmd_fiber(args, cfg);
        if (subcommand == "check-line") return cmd_check_line(args, cfg);
        if (subcommand == "monodromy") return cmd_monodromy(args, cfg);
        if (subcommand == "bounds") return cmd_bounds(args, cfg);
        std::cerr << "unknown subcommand\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const HypothesisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
