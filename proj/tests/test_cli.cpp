#include "doctest.h"

#include "commands.hpp"

#include "rabilab/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace rabilab;
using namespace rabilab::cli;

namespace {

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split_list(line));
    }
    return rows;
}

}  // namespace

TEST_CASE("grid parsing") {
    CHECK(parse_grid("0.5") == std::vector<double>{0.5});
    const auto g = parse_grid("0:1:0.01");
    CHECK(g.size() == 101);
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(g[37] == 0.37);
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_grid("abc"), ConfigError);
}

TEST_CASE("numbers round-trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) {
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("spectrum at zero coupling shows the +-eps/2 pattern") {
    SpectrumConfig cfg;
    cfg.epsilon = 0.6;
    cfg.f = "0";
    cfg.levels = 5;
    std::ostringstream out;
    CHECK(run_spectrum(cfg, out, "test") == 0);
    const auto rows = data_rows(out.str());
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][0] == "f");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double de_exact = std::stod(rows[i][7]);
        const double de_uaa = std::stod(rows[i][8]);
        CHECK(std::abs(std::abs(de_exact) - 0.3) < 1e-12);
        CHECK(de_uaa == doctest::Approx(de_exact));
        CHECK(rows[i][9] == "ok");
    }
}

TEST_CASE("spectrum output is deterministic") {
    SpectrumConfig cfg;
    cfg.f = "0:0.5:0.05";
    cfg.levels = 6;
    cfg.methods = "exact,uaa,rwa";
    std::ostringstream a, b;
    run_spectrum(cfg, a, "test");
    run_spectrum(cfg, b, "test");
    CHECK(a.str() == b.str());
    CHECK(a.str().find("E_rwa") != std::string::npos);
}

TEST_CASE("spectrum flags truncation problems") {
    SpectrumConfig cfg;
    cfg.f = "3";
    cfg.levels = 10;
    cfg.n_max = 24;
    std::ostringstream out;
    CHECK(run_spectrum(cfg, out, "test") == 3);
    CHECK(out.str().find("unconverged") != std::string::npos);
}

TEST_CASE("evolve without coupling is a constant -1 column") {
    EvolveConfig cfg;
    cfg.f = 0.0;
    cfg.nbar = 4.0;
    cfg.methods = "rwa";
    cfg.samples = 20;
    std::ostringstream out;
    CHECK(run_evolve(cfg, out, "test") == 0);
    const auto rows = data_rows(out.str());
    REQUIRE(rows.size() == 21);
    CHECK(rows[0] == std::vector<std::string>{"t", "tau", "W_rwa"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) == doctest::Approx(-1.0));
    CHECK(cfg.resolved_t_max() == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("evolve header and horizon") {
    EvolveConfig cfg;
    cfg.f = 0.05;
    cfg.nbar = 16.0;
    cfg.methods = "exact,uaa,asymptotic";
    cfg.samples = 11;
    std::ostringstream out;
    run_evolve(cfg, out, "9.9");
    const std::string s = out.str();
    CHECK(s.rfind("# rabi_lab 9.9 evolve\n", 0) == 0);
    CHECK(s.find("# config ") != std::string::npos);
    CHECK(s.find("# diagnostics uaa") != std::string::npos);
    CHECK(cfg.resolved_t_max() == doctest::Approx(4.0 * std::numbers::pi / 0.2));
    const auto rows = data_rows(s);
    CHECK(rows.back()[1] == format_number(0.05 * cfg.resolved_t_max()));
}

TEST_CASE("configuration sections") {
    SpectrumConfig s;
    s.apply(nlohmann::json::parse(R"({"epsilon": 0.7, "f": 0.25, "methods": ["exact"]})"));
    CHECK(s.epsilon == 0.7);
    CHECK(s.f == "0.25");
    CHECK(s.methods == "exact");
    CHECK_THROWS_WITH_AS(s.apply(nlohmann::json::parse(R"({"level": 3})")), doctest::Contains("level"), ConfigError);
    CHECK_THROWS_AS(s.apply(nlohmann::json::parse(R"({"levels": "many"})")), ConfigError);

    EvolveConfig e;
    e.methods = "exact,magic";
    CHECK_THROWS_WITH_AS(e.validate(), doctest::Contains("magic"), ConfigError);
    e.methods = "exact";
    e.nbar = -1.0;
    CHECK_THROWS_WITH_AS(e.validate(), doctest::Contains("nbar"), ConfigError);

    const std::string path = "test_cli_config.json";
    {
        std::ofstream f(path);
        f << R"({"evolve": {"f": 0.3}, "spectrum": {}})";
    }
    CHECK(load_section(path, "evolve")["f"] == 0.3);
    CHECK(load_section(path, "applicability").empty());
    {
        std::ofstream f(path);
        f << R"({"evolv": {}})";
    }
    CHECK_THROWS_AS(load_section(path, "evolve"), ConfigError);
    CHECK_THROWS_AS(load_section("does-not-exist.json", "evolve"), ConfigError);
    std::remove(path.c_str());
}
