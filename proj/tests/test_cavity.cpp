#include "doctest.h"

#include "rabilab/cavity.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rabilab;
using namespace rabilab::cavity;

namespace {

CavitySpec optical(double w_j = 1.0) {
    CavitySpec s;
    s.lambda0_nm = 500.0;
    s.q_factor = 1e6;
    s.volume_cm3 = 1.0;
    s.transverse_area_cm2 = 1.0;
    s.field_energy_j = w_j;
    return s;
}

}  // namespace

TEST_CASE("CavitySpec validation names the field") {
    CavitySpec s = optical();
    s.omega0_ev = 2.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("lambda0_nm/omega0_ev"), ConfigError);
    s = optical();
    s.q_factor = 0.5;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("q_factor"), ConfigError);
    s = optical();
    s.volume_cm3 = -1.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("volume_cm3"), ConfigError);
}

TEST_CASE("wavelength and frequency are interchangeable") {
    CavitySpec a = optical();
    CavitySpec b = optical();
    b.lambda0_nm.reset();
    b.omega0_ev = a.omega0();
    CHECK(a.omega0() == doctest::Approx(2.0 * std::numbers::pi * 197.3269804 / 500.0));
    CHECK(b.lambda0() == doctest::Approx(500.0));
    CHECK(applicability_mu(a) == doctest::Approx(applicability_mu(b)));
}

TEST_CASE("delta root") {
    const double d = solve_delta();
    CHECK(d == doctest::Approx(3.54).epsilon(0.01 / 3.54));
    CHECK(d == doctest::Approx(3.5420958135633574).epsilon(1e-9));
    CHECK(std::abs(delta_equation(d)) <= 1e-9);
    // sign scan: exactly one crossing on [1, 6]
    int crossings = 0;
    for (double x = 1.0; x < 6.0 - 1e-12; x += 0.01) {
        if ((delta_equation(x) > 0.0) != (delta_equation(x + 0.01) > 0.0)) ++crossings;
    }
    CHECK(crossings == 1);
}

TEST_CASE("external mode ratio") {
    CHECK(external_mode_ratio(3.54) == doctest::Approx(1.64e-6).epsilon(0.05));
    CHECK(external_mode_ratio(3.54) == doctest::Approx(1.6644511566996639e-6).epsilon(1e-9));
    CHECK(external_mode_ratio(1.0) == doctest::Approx(0.67101286024907332).epsilon(1e-12));
    CHECK(external_mode_ratio(30.0) == 0.0);
    CHECK_THROWS_AS(external_mode_ratio(0.0), DomainError);
}

TEST_CASE("mode counts") {
    const CavitySpec s = optical();
    const auto c = mode_counts(s, 3.54);
    CHECK(c.n_d == doctest::Approx(201061929.82974677).epsilon(1e-12));
    CavitySpec big = s;
    big.volume_cm3 = 2.0;
    const auto c2 = mode_counts(big, 3.54);
    CHECK(c2.n_d == doctest::Approx(2.0 * c.n_d));
    CHECK(c2.n_modes == doctest::Approx(2.0 * c.n_modes));
    // N / N_D = d^3 k1^2 / (8 pi): same order when the angular spread is O(1)
    CavitySpec wide = s;
    wide.kappa1 = 1.0;
    const auto cw = mode_counts(wide, solve_delta());
    CHECK(cw.n_modes / cw.n_d == doctest::Approx(std::pow(solve_delta(), 3) / (8.0 * std::numbers::pi)));
    CHECK(cw.n_modes / cw.n_d > 0.1);
    CHECK(cw.n_modes / cw.n_d < 10.0);
}

TEST_CASE("energy partition") {
    const CavitySpec s = optical(3.0);
    const double d = solve_delta();
    const auto r = packet_energy_report(s, d);
    const double w = s.field_energy_j;
    CHECK(std::abs(r.e_fluct) <= 1e-9 * w);
    CHECK(r.e0_energy + r.e_ext == doctest::Approx(w).epsilon(1e-12));
    CHECK(r.e0_energy / w == doctest::Approx(1.0 - 1.64e-6).epsilon(1e-7));
    CHECK(r.e_ext / r.e0_energy == doctest::Approx(external_mode_ratio(d)).epsilon(1e-12));
    CHECK(r.e_af >= 0.0);
    CHECK(r.d_e_fluct > 0.0);
    // e_af scales as sqrt(W / V)
    CavitySpec s4 = s;
    s4.field_energy_j *= 4.0;
    CHECK(packet_energy_report(s4, d).e_af == doctest::Approx(2.0 * r.e_af));
    CavitySpec v4 = s;
    v4.volume_cm3 *= 4.0;
    v4.transverse_area_cm2 *= 1.0;
    // N grows with V too, so sqrt(N) sqrt(W/V) is V-independent
    CHECK(packet_energy_report(v4, d).e_af == doctest::Approx(r.e_af));
}

TEST_CASE("critical density") {
    CHECK(critical_density(1.0) == doctest::Approx(5.7e10).epsilon(0.02));
    CHECK(critical_density(1.0) == doctest::Approx(5.679480289865980e10).epsilon(1e-12));
    CHECK(critical_density(200.0) == doctest::Approx(7099.350362332475).epsilon(1e-12));
    CHECK(critical_density(500.0) == doctest::Approx(454.3584231892784).epsilon(1e-12));
    CHECK(critical_density(1000.0) == doctest::Approx(56.79480289865980).epsilon(1e-12));
    CHECK_THROWS_AS(critical_density(0.0), DomainError);
}

TEST_CASE("applicability parameter") {
    for (double lam : {200.0, 500.0, 1000.0}) {
        CavitySpec s = optical();
        s.lambda0_nm = lam;
        s.field_energy_j = critical_density(lam) * s.volume_cm3;
        CHECK(applicability_mu(s) == doctest::Approx(1.0).epsilon(0.02));
        s.field_energy_j *= 9.0;
        const double mu = applicability_mu(s);
        CHECK(mu == doctest::Approx(3.0).epsilon(0.02));
        CHECK(mu * mu * critical_density(lam) == doctest::Approx(s.energy_density()).epsilon(0.02));
    }
    CavitySpec s = optical(456.0);
    CHECK(applicability_mu(s) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("coupling and xi") {
    const CavitySpec s = optical();
    CHECK(coupling_and_xi(s, 0.0).xi == 0.0);
    const auto c = coupling_and_xi(s, 100.0);
    CHECK(c.xi == doctest::Approx(20.0 * c.f));
    CavitySpec q4 = s;
    q4.q_factor *= 4.0;
    CHECK(coupling_and_xi(q4, 100.0).f == doctest::Approx(0.5 * c.f));
    const double nbar = s.field_energy_ev() / s.omega0();
    const auto both = coupling_and_xi(s, nbar);
    CHECK(both.xi == doctest::Approx(both.xi_closed_form).epsilon(0.1));
    CHECK_THROWS_AS(coupling_and_xi(s, -1.0), DomainError);
}

TEST_CASE("collective average") {
    CHECK(collective_average({{2.0, 0.3}}).omega_tilde == 2.0);
    CHECK(collective_average({{2.0, 0.3}}).m_tilde == 0.3);
    CHECK(collective_average({{1.9, 0.1}, {2.1, 0.3}}).omega_tilde == doctest::Approx(2.0));
    CHECK_THROWS_AS(collective_average({}), DomainError);
    // Gaussian spectral profile of width w0 / Q: mean stays within w0 / Q
    const double w0 = 2.48, q = 1e3;
    std::mt19937 rng(7);
    std::normal_distribution<double> g(w0, w0 / q);
    std::vector<ModeSample> modes;
    for (int i = 0; i < 4000; ++i) modes.push_back({g(rng), 1.0});
    CHECK(std::abs(collective_average(modes).omega_tilde - w0) < w0 / q);
}

TEST_CASE("full report and json") {
    CavitySpec s = optical(1.01 * critical_density(500.0));
    const auto r = full_report(s);
    CHECK(r.single_mode_ok);
    CHECK(r.mu == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.w_crit == doctest::Approx(critical_density(500.0)));
    const auto j = report_json(s, r, "test");
    for (const char* key : {"version", "inputs", "results", "units"}) CHECK(j.contains(key));
    CHECK(j["results"]["single_mode_ok"].get<bool>());
    CHECK(report_json(s, full_report(s), "test").dump() == j.dump());

    CavitySpec q = s;
    q.q_factor *= 100.0;
    CHECK(full_report(q).coupling_f == doctest::Approx(r.coupling_f / 10.0));

    CavitySpec x;
    x.lambda0_nm = 1.0;
    const auto jx = report_json(x, full_report(x), "test");
    CHECK(jx["results"]["w_crit"].get<double>() == doctest::Approx(5.7e10).epsilon(0.02));
}

TEST_CASE("CavitySpec from json") {
    const auto s = spec_from_json(nlohmann::json::parse(R"({"lambda0_nm": 500, "q_factor": 1e5, "field_energy_j": 2})"));
    CHECK(*s.lambda0_nm == 500.0);
    CHECK(s.q_factor == 1e5);
    CHECK_THROWS_WITH_AS(spec_from_json(nlohmann::json::parse(R"({"lambda": 5})")), doctest::Contains("lambda"),
                         ConfigError);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"q_factor": "big"})")), ConfigError);
}
