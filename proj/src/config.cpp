#include "painleve/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace painleve {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_real_part(const std::string& text, std::size_t& pos) {
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw ConfigError("invalid complex literal '" + text + "'");
    pos += static_cast<std::size_t>(end - start);
    return v;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    // trim a redundant long form like 0.5 -> keep shortest round-trip
    double parsed;
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
        std::sscanf(shorter, "%lf", &parsed);
        if (parsed == x) return shorter;
    }
    return buf;
}

} // namespace

cplx parse_complex(const std::string& text) {
    std::string s;
    for (const char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty complex literal");

    std::size_t pos = 0;
    double re = 0.0, im = 0.0;
    bool have_re = false, have_im = false;

    while (pos < s.size()) {
        double value;
        if (s.compare(pos, 2, "+i") == 0 || (pos == 0 && s[pos] == 'i')) {
            value = 1.0;
            pos += (s[pos] == '+') ? 1 : 0;
        } else if (s.compare(pos, 2, "-i") == 0) {
            value = -1.0;
            pos += 1;
        } else {
            value = parse_real_part(s, pos);
        }
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            if (have_im) throw ConfigError("invalid complex literal '" + text + "'");
            im = value;
            have_im = true;
        } else {
            if (have_re) throw ConfigError("invalid complex literal '" + text + "'");
            re = value;
            have_re = true;
        }
    }
    if (!have_re && !have_im) throw ConfigError("invalid complex literal '" + text + "'");
    return {re, im};
}

std::string format_complex(cplx value) {
    const double re = value.real();
    const double im = value.imag() == 0.0 ? 0.0 : value.imag(); // normalize -0
    if (im == 0.0) return format_double(re);
    std::string s;
    if (re != 0.0) {
        s = format_double(re);
        if (im > 0.0 || std::isnan(im)) s += "+";
    }
    s += format_double(im) + "i";
    return s;
}

namespace {

std::vector<cplx> parse_complex_list(const ordered_json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("config field '" + key + "' must be an array");
    std::vector<cplx> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw ConfigError("config field '" + key + "' must hold strings");
        out.push_back(parse_complex(e.get<std::string>()));
    }
    return out;
}

void apply_options(const ordered_json& j, ContinuationOptions& o) {
    for (const auto& [key, value] : j.items()) {
        if (key == "order") o.order = value.get<int>();
        else if (key == "seed") o.seed = value.get<std::uint64_t>();
        else if (key == "safety") o.safety = value.get<double>();
        else if (key == "safety_r") o.safety_r = value.get<double>();
        else if (key == "bounds_samples") o.bounds_samples = value.get<int>();
        else if (key == "ladder_samples") o.ladder_samples = value.get<int>();
        else if (key == "ladder_levels") o.ladder_levels = value.get<int>();
        else if (key == "residual_tol") o.residual_tol = value.get<double>();
        else if (key == "proximity_floor") o.proximity_floor = value.get<double>();
        else if (key == "proximity_ceiling") o.proximity_ceiling = value.get<double>();
        else if (key == "min_step") o.min_step = value.get<double>();
        else if (key == "r_max") o.r_max = value.get<double>();
        else if (key == "verdict_tol") o.verdict_tol = value.get<double>();
        else if (key == "j_max") o.j_max = value.get<int>();
        else if (key == "tail_window") o.tail_window = value.get<int>();
        else if (key == "gluing_tol") o.gluing_tol = value.get<double>();
        else if (key == "max_steps") o.max_steps = value.get<long>();
        else if (key == "step_fraction") o.step_fraction = value.get<double>();
        else if (key == "pole_tol") o.eval.pole_tol = value.get<double>();
        else if (key == "continuity_floor") o.eval.continuity_floor = value.get<double>();
        else throw ConfigError("unknown option '" + key + "'");
    }
    if (o.order < 1) throw ConfigError("option 'order' must be >= 1");
    for (const auto& [name, v] :
         std::initializer_list<std::pair<const char*, double>>{
             {"safety", o.safety - 1.0}, {"safety_r", o.safety_r}, {"residual_tol", o.residual_tol},
             {"proximity_floor", o.proximity_floor}, {"proximity_ceiling", o.proximity_ceiling},
             {"min_step", o.min_step}, {"r_max", o.r_max}, {"verdict_tol", o.verdict_tol},
             {"gluing_tol", o.gluing_tol}, {"step_fraction", o.step_fraction},
             {"pole_tol", o.eval.pole_tol}, {"continuity_floor", o.eval.continuity_floor}})
        if (!(v >= 0.0) || (std::string(name) != "safety" && !(v > 0.0)))
            throw ConfigError(std::string("option '") + name + "' must be positive");
}

} // namespace

ProblemConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ProblemConfig cfg;
    bool saw_rhs = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "rhs") {
            cfg.rhs = value.get<std::string>();
            saw_rhs = true;
        } else if (key == "initial") {
            if (!value.is_object()) throw ConfigError("config field 'initial' must be an object");
            for (const auto& [ik, iv] : value.items()) {
                if (ik == "w") cfg.w0 = parse_complex(iv.get<std::string>());
                else if (ik == "z") cfg.z0 = parse_complex(iv.get<std::string>());
                else throw ConfigError("unknown key 'initial." + ik + "'");
            }
        } else if (key == "branch") {
            if (value.is_string()) {
                cfg.branch = value.get<std::string>();
                if (cfg.branch != "principal-positive-real")
                    throw ConfigError("unknown branch convention '" + cfg.branch +
                                      "' (use \"principal-positive-real\" or explicit sheet values)");
            } else {
                cfg.branch = "explicit";
                cfg.branch_sheets = parse_complex_list(value, "branch");
            }
        } else if (key == "arc") {
            cfg.arc = parse_complex_list(value, "arc");
        } else if (key == "nu") {
            cfg.nu = parse_complex(value.get<std::string>());
        } else if (key == "loop") {
            cfg.loop = parse_complex_list(value, "loop");
        } else if (key == "options") {
            if (!value.is_object()) throw ConfigError("config field 'options' must be an object");
            apply_options(value, cfg.options);
        } else {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    if (!saw_rhs) throw ConfigError("config field 'rhs' is required");
    if (cfg.branch_sheets) cfg.options.initial_sheets = cfg.branch_sheets;
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ProblemConfig& cfg) {
    ordered_json j;
    j["rhs"] = cfg.rhs;
    if (cfg.w0 || cfg.z0) {
        ordered_json init;
        if (cfg.w0) init["w"] = format_complex(*cfg.w0);
        if (cfg.z0) init["z"] = format_complex(*cfg.z0);
        j["initial"] = init;
    }
    if (cfg.branch_sheets) {
        ordered_json sheets = ordered_json::array();
        for (const auto& s : *cfg.branch_sheets) sheets.push_back(format_complex(s));
        j["branch"] = sheets;
    } else {
        j["branch"] = cfg.branch;
    }
    if (!cfg.arc.empty()) {
        ordered_json arc = ordered_json::array();
        for (const auto& v : cfg.arc) arc.push_back(format_complex(v));
        j["arc"] = arc;
    }
    if (cfg.nu) j["nu"] = format_complex(*cfg.nu);
    if (!cfg.loop.empty()) {
        ordered_json loop = ordered_json::array();
        for (const auto& v : cfg.loop) loop.push_back(format_complex(v));
        j["loop"] = loop;
    }
    const ContinuationOptions d;
    const ContinuationOptions& o = cfg.options;
    ordered_json opts;
    opts["order"] = o.order;
    opts["seed"] = o.seed;
    opts["safety"] = o.safety;
    opts["safety_r"] = o.safety_r;
    opts["bounds_samples"] = o.bounds_samples;
    opts["ladder_samples"] = o.ladder_samples;
    opts["ladder_levels"] = o.ladder_levels;
    opts["residual_tol"] = o.residual_tol;
    opts["proximity_floor"] = o.proximity_floor;
    opts["proximity_ceiling"] = o.proximity_ceiling;
    opts["min_step"] = o.min_step;
    opts["r_max"] = o.r_max;
    opts["verdict_tol"] = o.verdict_tol;
    opts["j_max"] = o.j_max;
    opts["tail_window"] = o.tail_window;
    opts["gluing_tol"] = o.gluing_tol;
    opts["max_steps"] = o.max_steps;
    opts["step_fraction"] = o.step_fraction;
    opts["pole_tol"] = o.eval.pole_tol;
    opts["continuity_floor"] = o.eval.continuity_floor;
    (void)d;
    j["options"] = opts;
    return j.dump(2) + "\n";
}

} // namespace painleve
