#pragma once

// Subcommand bodies of rabi_lab, separated from argument parsing so tests
// can drive them directly.

#include "json.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rabilab::cli {

// "a:b:step" (inclusive, computed as a + i step) or a single number.
std::vector<double> parse_grid(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

// Shortest representation that round-trips.
std::string format_number(double v);

struct SpectrumConfig {
    double epsilon = 1.0;
    std::string f = "0:1:0.01";
    int levels = 24;  // per parity sector
    int n_max = 0;    // 0 = sized from the grid and level count
    std::string methods = "exact,uaa";

    void apply(const nlohmann::json& section);
    void validate() const;
    nlohmann::ordered_json to_json() const;
};

struct EvolveConfig {
    double epsilon = 1.0;
    double f = 0.1;
    double nbar = 25.0;
    int n_max = 0;  // 0 = default_n_max(nbar, f)
    std::string methods = "exact,uaa";
    std::optional<double> t_max;  // default 4 pi / (f max(1, sqrt nbar)), 4 pi at f = 0
    int samples = 2000;
    bool debug_terms = false;  // append reduction diagnostics as comment lines

    void apply(const nlohmann::json& section);
    void validate() const;
    double resolved_t_max() const;
    int resolved_n_max() const;
    nlohmann::ordered_json to_json() const;
};

// Both return a process exit status: 0 on success, 3 when some rows or
// methods could not be computed (flagged in the output).
int run_spectrum(const SpectrumConfig& cfg, std::ostream& out, const std::string& version);
int run_evolve(const EvolveConfig& cfg, std::ostream& out, const std::string& version);

// Section `name` of a config file, or an empty object.
nlohmann::json load_section(const std::string& path, const std::string& name);

}  // namespace rabilab::cli
