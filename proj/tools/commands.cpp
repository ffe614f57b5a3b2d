#include "commands.hpp"

#include "rabilab/dynamics.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/rabi.hpp"
#include "rabilab/uaa.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace rabilab::cli {

namespace {

double parse_number(const std::string& s, const std::string& field) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(field + ": '" + s + "' is not a number");
    }
    return v;
}

std::vector<std::string> methods_checked(const std::string& text, const std::set<std::string>& allowed) {
    auto m = split_list(text);
    if (m.empty()) throw ConfigError("methods: at least one method is required");
    for (const auto& name : m) {
        if (!allowed.contains(name)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ConfigError("methods: unknown method '" + name + "' (allowed: " + list + ")");
        }
    }
    return m;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key + ": wrong type in config");
    }
}

std::string list_field(const nlohmann::json& j, const std::string& key) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s;
        for (const auto& e : j) s += (s.empty() ? "" : ",") + get_field<std::string>(e, key);
        return s;
    }
    throw ConfigError(key + ": expected a string or a list of strings");
}

std::string grid_field(const nlohmann::json& j) {
    if (j.is_number()) return format_number(j.get<double>());
    return get_field<std::string>(j, "f");
}

const std::string kNan = "nan";

std::string cell(double v) { return std::isnan(v) ? kNan : format_number(v); }

// Displaced-Fock index carrying most of a UAA level; ties go to the lower slot.
int dominant_index(const uaa::UaaEigenpair& p) {
    return std::abs(p.a_coef) >= std::abs(p.b_coef) ? p.n : p.n + 1;
}

struct SpectrumRow {
    int parity = 1;
    int level = 0;
    int n_ref = 0;
    int branch = 0;
    double exact = std::numeric_limits<double>::quiet_NaN();
    double uaa = std::numeric_limits<double>::quiet_NaN();
    double rwa = std::numeric_limits<double>::quiet_NaN();
};

struct SpectrumPoint {
    std::vector<SpectrumRow> rows;
    std::string status = "ok";
};

std::array<std::vector<double>, 2> by_sector(const core::SpectrumResult& r, int levels) {
    std::array<std::vector<double>, 2> out;
    for (const auto& l : r.levels) {
        auto& v = out[l.parity == 1 ? 0 : 1];
        if (static_cast<int>(v.size()) < levels) v.push_back(l.energy);
    }
    return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const auto first = text.find(':');
    if (first == std::string::npos) return {parse_number(text, "f")};
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw ConfigError("f: grid must be a number or start:stop:step");
    }
    const double a = parse_number(text.substr(0, first), "f");
    const double b = parse_number(text.substr(first + 1, second - first - 1), "f");
    const double step = parse_number(text.substr(second + 1), "f");
    if (!(step > 0.0) || b < a) throw ConfigError("f: grid must be increasing with a positive step");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("f: grid has more than 10^6 points");
    std::vector<double> g;
    for (long i = 0; i < count; ++i) g.push_back(a + static_cast<double>(i) * step);
    return g;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void SpectrumConfig::apply(const nlohmann::json& s) {
    for (const auto& [key, v] : s.items()) {
        if (key == "epsilon") epsilon = get_field<double>(v, key);
        else if (key == "f") f = grid_field(v);
        else if (key == "levels") levels = get_field<int>(v, key);
        else if (key == "n_max") n_max = get_field<int>(v, key);
        else if (key == "methods") methods = list_field(v, key);
        else throw ConfigError(key + ": unknown spectrum setting");
    }
}

void SpectrumConfig::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) throw ConfigError("epsilon: must be finite and non-negative");
    const auto grid = parse_grid(f);
    if (grid.front() < 0.0) throw ConfigError("f: coupling must be non-negative");
    if (levels < 1) throw ConfigError("levels: must be positive");
    if (n_max != 0 && n_max < 4) throw ConfigError("n_max: must be at least 4 (or 0 for automatic)");
    methods_checked(methods, {"exact", "uaa", "rwa"});
}

nlohmann::ordered_json SpectrumConfig::to_json() const {
    return {{"epsilon", epsilon}, {"f", f}, {"levels", levels}, {"n_max", n_max}, {"methods", methods}};
}

void EvolveConfig::apply(const nlohmann::json& s) {
    for (const auto& [key, v] : s.items()) {
        if (key == "epsilon") epsilon = get_field<double>(v, key);
        else if (key == "f") f = get_field<double>(v, key);
        else if (key == "nbar") nbar = get_field<double>(v, key);
        else if (key == "n_max") n_max = get_field<int>(v, key);
        else if (key == "methods") methods = list_field(v, key);
        else if (key == "t_max") t_max = get_field<double>(v, key);
        else if (key == "samples") samples = get_field<int>(v, key);
        else if (key == "debug_terms") debug_terms = get_field<bool>(v, key);
        else throw ConfigError(key + ": unknown evolve setting");
    }
}

void EvolveConfig::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) throw ConfigError("epsilon: must be finite and non-negative");
    if (!std::isfinite(f) || f < 0.0) throw ConfigError("f: must be finite and non-negative");
    if (!std::isfinite(nbar) || nbar < 0.0) throw ConfigError("nbar: must be finite and non-negative");
    if (n_max != 0 && n_max < 4) throw ConfigError("n_max: must be at least 4 (or 0 for automatic)");
    if (t_max && (!std::isfinite(*t_max) || *t_max < 0.0)) throw ConfigError("t_max: must be non-negative");
    if (samples < 2) throw ConfigError("samples: need at least 2");
    methods_checked(methods, {"exact", "uaa", "rwa", "asymptotic"});
}

double EvolveConfig::resolved_t_max() const {
    if (t_max) return *t_max;
    if (f == 0.0) return 4.0 * std::numbers::pi;
    return 4.0 * std::numbers::pi / (f * std::max(1.0, std::sqrt(nbar)));
}

int EvolveConfig::resolved_n_max() const { return n_max > 0 ? n_max : core::default_n_max(nbar, f); }

nlohmann::ordered_json EvolveConfig::to_json() const {
    return {{"epsilon", epsilon}, {"f", f},           {"nbar", nbar},       {"n_max", resolved_n_max()},
            {"methods", methods}, {"t_max", resolved_t_max()}, {"samples", samples}, {"debug_terms", debug_terms}};
}

int run_spectrum(const SpectrumConfig& cfg, std::ostream& out, const std::string& version) {
    cfg.validate();
    const auto grid = parse_grid(cfg.f);
    const auto methods = methods_checked(cfg.methods, {"exact", "uaa", "rwa"});
    const bool want_exact = has(methods, "exact");
    const bool want_uaa = has(methods, "uaa");
    const bool want_rwa = has(methods, "rwa");
    const double f_top = grid.back();
    const int n_max =
        cfg.n_max > 0 ? cfg.n_max : static_cast<int>(std::ceil(2.0 * cfg.levels + 12.0 * f_top * f_top + 40.0));

    std::vector<SpectrumPoint> points(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
        auto& pt = points[static_cast<std::size_t>(i)];
        try {
        const core::ModelParams params{cfg.epsilon, grid[static_cast<std::size_t>(i)], n_max};
        std::array<std::vector<uaa::UaaEigenpair>, 2> labels{uaa::uaa_sector_levels(params, 1, cfg.levels),
                                                              uaa::uaa_sector_levels(params, -1, cfg.levels)};
        std::array<std::vector<double>, 2> exact, rwa;
        if (want_exact) {
            try {
                exact = by_sector(core::exact_spectrum(params, cfg.levels), cfg.levels);
            } catch (const std::runtime_error& e) {
                pt.status = "unconverged";
            }
        }
        if (want_rwa) rwa = by_sector(core::rwa_spectrum(params, cfg.levels + 1), cfg.levels);
        for (int s = 0; s < 2; ++s) {
            for (int j = 0; j < cfg.levels; ++j) {
                const auto& lab = labels[s][static_cast<std::size_t>(j)];
                SpectrumRow row;
                row.parity = s == 0 ? 1 : -1;
                row.level = j;
                row.n_ref = dominant_index(lab);
                row.branch = lab.n < 0 ? -1 : lab.branch == uaa::Branch::plus ? 1 : -1;
                if (want_uaa) row.uaa = lab.energy;
                if (want_exact && pt.status == "ok") row.exact = exact[s][static_cast<std::size_t>(j)];
                if (want_rwa) row.rwa = rwa[s][static_cast<std::size_t>(j)];
                pt.rows.push_back(row);
            }
        }
        } catch (const std::exception& e) {
            pt.rows.clear();
            pt.status = "error";
        }
    }

    auto resolved = cfg.to_json();
    resolved["n_max"] = n_max;
    out << "# rabi_lab " << version << " spectrum\n";
    out << "# config " << resolved.dump() << '\n';
    out << "# dE = E - (n - f^2); n is the displaced-Fock index dominating the UAA level of the same rank\n";
    out << "f,parity,level,n,branch";
    for (const auto& m : methods) out << ",E_" << m;
    for (const auto& m : methods) out << ",dE_" << m;
    out << ",status\n";
    int status = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid[i];
        if (points[i].status != "ok") status = 3;
        for (const auto& r : points[i].rows) {
            out << format_number(f) << ',' << r.parity << ',' << r.level << ',' << r.n_ref << ','
                << (r.branch > 0 ? '+' : '-');
            auto energy = [&](const std::string& m) { return m == "exact" ? r.exact : m == "uaa" ? r.uaa : r.rwa; };
            for (const auto& m : methods) out << ',' << cell(energy(m));
            for (const auto& m : methods) out << ',' << cell(energy(m) - (r.n_ref - f * f));
            out << ',' << points[i].status << '\n';
        }
    }
    return status;
}

int run_evolve(const EvolveConfig& cfg, std::ostream& out, const std::string& version) {
    cfg.validate();
    const auto methods = methods_checked(cfg.methods, {"exact", "uaa", "rwa", "asymptotic"});
    const int n_max = cfg.resolved_n_max();
    const core::ModelParams params{cfg.epsilon, cfg.f, n_max};
    const dynamics::CoherentInit init{std::sqrt(cfg.nbar), n_max};
    const auto times = dynamics::uniform_times(cfg.resolved_t_max(), cfg.samples);

    std::vector<dynamics::TimeSeries> series;
    for (const auto& m : methods) {
        try {
            switch (dynamics::parse_method(m)) {
                case dynamics::Method::exact: series.push_back(dynamics::evolve_exact(params, init, times)); break;
                case dynamics::Method::uaa: series.push_back(dynamics::evolve_uaa(params, init, times)); break;
                case dynamics::Method::rwa: series.push_back(dynamics::evolve_rwa(params, init, times)); break;
                case dynamics::Method::asymptotic:
                    series.push_back(dynamics::evolve_asymptotic(init.alpha, cfg.f, times));
                    break;
            }
        } catch (const TruncationError& e) {
            throw TruncationError(m + " engine: " + e.what());
        } catch (const WindowError& e) {
            throw WindowError(m + " engine: " + e.what());
        }
    }

    out << "# rabi_lab " << version << " evolve\n";
    out << "# config " << cfg.to_json().dump() << '\n';
    for (const auto& s : series) {
        nlohmann::ordered_json d(s.diagnostics);
        d["out_of_bounds"] = s.out_of_bounds;
        out << "# diagnostics " << dynamics::method_name(s.method) << ' ' << d.dump() << '\n';
    }
    if (cfg.debug_terms && cfg.nbar >= 1.0) {
        const int n0 = static_cast<int>(std::floor(cfg.nbar));
        for (int n = std::max(0, n0 - 2); n <= n0 + 2; ++n) {
            for (auto b : {uaa::Branch::minus, uaa::Branch::plus}) {
                const auto r = dynamics::reduction_terms(n, b, params, init.alpha);
                nlohmann::ordered_json d{{"n", n},
                                         {"branch", b == uaa::Branch::plus ? "+" : "-"},
                                         {"gamma_full", r.gamma_full},
                                         {"gamma_simplified", r.gamma_simplified},
                                         {"c_full", r.c_full},
                                         {"c_simplified", r.c_simplified},
                                         {"xi_weight", r.xi_weight},
                                         {"beta", r.beta}};
                out << "# reduction " << d.dump() << '\n';
            }
        }
        for (auto r : {uaa::Branch::minus, uaa::Branch::plus}) {
            for (auto q : {uaa::Branch::minus, uaa::Branch::plus}) {
                nlohmann::ordered_json d{{"k", n0},
                                         {"n", n0},
                                         {"r", r == uaa::Branch::plus ? "+" : "-"},
                                         {"q", q == uaa::Branch::plus ? "+" : "-"},
                                         {"d_tilde", dynamics::d_tilde(n0, n0, r, q, n0, params)}};
                out << "# reduction " << d.dump() << '\n';
            }
        }
    }
    out << "t,tau";
    for (const auto& m : methods) out << ",W_" << m;
    out << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
        out << format_number(times[i]) << ',' << format_number(cfg.f * times[i]);
        for (const auto& s : series) out << ',' << format_number(s.values[i]);
        out << '\n';
    }
    return 0;
}

nlohmann::json load_section(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object of command sections");
    for (const auto& [key, v] : j.items()) {
        if (key != "spectrum" && key != "evolve" && key != "applicability" && key != "validate") {
            throw ConfigError("config: unknown section '" + key + "'");
        }
        if (!v.is_object()) throw ConfigError("config: section '" + key + "' must be an object");
    }
    return j.contains(name) ? j[name] : nlohmann::json::object();
}

}  // namespace rabilab::cli
