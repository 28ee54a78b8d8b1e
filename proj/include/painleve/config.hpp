#ifndef PAINLEVE_CONFIG_HPP
#define PAINLEVE_CONFIG_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "painleve/continuation.hpp"
#include "painleve/errors.hpp"

namespace painleve {

/// Complex literals in configs and reports use the "re+imi" string form,
/// e.g. "1", "-2.5", "3i", "1-0.25i", "1.5e-3+2i".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx value);

/// A Cauchy problem plus engine options, as loaded from a config file.
struct ProblemConfig {
    std::string rhs;
    std::optional<cplx> w0;
    std::optional<cplx> z0;
    std::string branch = "principal-positive-real"; // or explicit sheets below
    std::optional<std::vector<cplx>> branch_sheets;
    std::vector<cplx> arc;
    std::optional<cplx> nu;     // fiber / line-check sample
    std::vector<cplx> loop;      // monodromy loop vertices
    ContinuationOptions options;
};

ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config(const std::string& json_text);

/// Normalized JSON form; parse_config(dump_config(c)) round-trips to an
/// identical dump.
std::string dump_config(const ProblemConfig& config);

} // namespace painleve

#endif
