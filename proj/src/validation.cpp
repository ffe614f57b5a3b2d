#include "rabilab/validation.hpp"

#include "rabilab/cavity.hpp"
#include "rabilab/dynamics.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/rabi.hpp"
#include "rabilab/tridiag.hpp"
#include "rabilab/uaa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace rabilab::validation {

namespace {

using core::ModelParams;
using dynamics::CoherentInit;
using dynamics::TimeSeries;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

CriterionResult make(double measured, double expected, double tol, std::string comparison, bool pass,
                     std::string detail = {}) {
    CriterionResult r;
    r.measured = measured;
    r.expected = expected;
    r.tolerance = tol;
    r.comparison = std::move(comparison);
    r.pass = pass;
    r.detail = std::move(detail);
    return r;
}

// Exact runs are shared between the figure criteria and the sanity sweep.
struct RunKey {
    double epsilon, f, nbar, t_max;
    int samples;
    auto operator<=>(const RunKey&) const = default;
};

const TimeSeries& exact_run(const RunKey& k) {
    static std::mutex mu;
    static std::map<RunKey, TimeSeries> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    const int n_max = core::default_n_max(k.nbar, k.f);
    const ModelParams params{k.epsilon, k.f, n_max};
    const CoherentInit init{std::sqrt(k.nbar), n_max};
    const auto t = dynamics::uniform_times(k.t_max, k.samples);
    return cache.emplace(k, dynamics::evolve_exact(params, init, t)).first->second;
}

double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

int zero_crossings(const std::vector<double>& w) {
    int c = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if ((w[i - 1] < 0.0) != (w[i] < 0.0)) ++c;
    }
    return c;
}

// Figure 2 grid: tau = f t in [0, 25].
std::vector<RunKey> fig2_runs() {
    std::vector<RunKey> keys;
    for (auto [f, nbar] : {std::pair{0.01, 25.0}, std::pair{0.1, 100.0}}) {
        for (double eps : {1.0, 0.8, 1.2}) keys.push_back({eps, f, nbar, 25.0 / f, 2000});
    }
    return keys;
}

const RunKey kFig4{1.0, 0.1, 1000.0, 2.0 * std::numbers::pi, 2000};

std::vector<double> sector_values(const ModelParams& params, int p) {
    return tridiag_eigensolve(core::parity_sector_hamiltonian(params, p), false).values;
}

std::vector<double> full_values(const ModelParams& params) {
    auto v = sector_values(params, 1);
    const auto m = sector_values(params, -1);
    v.insert(v.end(), m.begin(), m.end());
    std::sort(v.begin(), v.end());
    return v;
}

CriterionResult delta_root() {
    const double d = cavity::solve_delta();
    const double res = std::abs(cavity::delta_equation(d));
    return make(d, 3.54, 0.01, "|m - e| <= tol and residual <= 1e-9", std::abs(d - 3.54) <= 0.01 && res <= 1e-9,
                "residual " + fmt(res));
}

CriterionResult external_ratio() {
    const double r = cavity::external_mode_ratio(3.54);
    return make(r, 1.64e-6, 0.05, "|m/e - 1| <= tol", std::abs(r / 1.64e-6 - 1.0) <= 0.05);
}

CriterionResult critical_density() {
    const double w = cavity::critical_density(1.0);
    return make(w, 5.7e10, 0.02, "|m/e - 1| <= tol", std::abs(w / 5.7e10 - 1.0) <= 0.02, "J/cm^3 at 1 nm");
}

CriterionResult exact_limits() {
    const int n_max = 200;
    double err_f0 = 0.0;
    for (double eps : {1.0, 0.8}) {
        const auto v = full_values({eps, 0.0, n_max});
        std::vector<double> want;
        for (int n = 0; n <= n_max; ++n) {
            want.push_back(n - eps / 2.0);
            want.push_back(n + eps / 2.0);
        }
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < v.size(); ++i) err_f0 = std::max(err_f0, std::abs(v[i] - want[i]));
    }
    double err_eps0 = 0.0;
    std::string per_f;
    for (double f : {0.1, 0.5, 1.0, 2.0}) {
        const auto v = full_values({0.0, f, n_max});
        const int n_lim = static_cast<int>(std::floor(n_max - 12.0 * f * f - 10.0));
        double err = 0.0;
        for (int n = 0; n <= n_lim; ++n) {
            for (int s = 0; s < 2; ++s) {
                err = std::max(err, std::abs(v[static_cast<std::size_t>(2 * n + s)] - (n - f * f)));
            }
        }
        err_eps0 = std::max(err_eps0, err);
        per_f += " f=" + fmt(f) + ":" + fmt(err);
    }
    auto r = make(err_eps0, 0.0, 1e-8, "eps=0 max error <= tol and f=0 max error <= 1e-10",
                  err_eps0 <= 1e-8 && err_f0 <= 1e-10,
                  "f=0 max error " + fmt(err_f0) + "; eps=0 max error by f:" + per_f);
    return r;
}

CriterionResult parity_exact() {
    const double a = core::parity_check({1.0, 0.5, 40});
    const double b = core::parity_check({0.8, 2.0, 40});
    const double m = std::max(a, b);
    return make(m, 0.0, 1e-12, "m <= tol", m <= 1e-12);
}

CriterionResult fig1_uaa() {
    constexpr int kLevels = 13;
    constexpr int kPoints = 51;
    std::vector<std::array<std::vector<double>, 2>> ex(kPoints), ua(kPoints);
    std::vector<std::string> failures(kPoints);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kPoints; ++i) {
        try {
            const ModelParams params{1.0, 0.02 * i, 80};
            const auto spec = core::exact_spectrum(params, kLevels);
            for (int s = 0; s < 2; ++s) {
                const int p = s == 0 ? 1 : -1;
                for (const auto& l : spec.levels) {
                    if (l.parity == p) ex[i][s].push_back(l.energy);
                }
                for (const auto& u : uaa::uaa_sector_levels(params, p, kLevels)) ua[i][s].push_back(u.energy);
            }
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    for (const auto& f : failures) {
        if (!f.empty()) throw NumericalError(f);
    }
    double worst = 0.0;
    std::string where;
    for (int i = 0; i < kPoints; ++i) {
        for (int s = 0; s < 2; ++s) {
            for (int j = 0; j < kLevels; ++j) {
                const double e = std::abs(ex[i][s][j] - ua[i][s][j]);
                if (e > worst) {
                    worst = e;
                    where = "f=" + fmt(0.02 * i) + " parity=" + (s == 0 ? "+" : "-") + " level=" + std::to_string(j);
                }
            }
        }
    }
    // Crossings can only occur between opposite parities; compare how often
    // each pair swaps order along the f grid.
    auto sign = [](double x) { return (x > 0.0) - (x < 0.0); };
    int mismatched = 0;
    int crossings = 0;
    for (int a = 0; a < kLevels; ++a) {
        for (int b = 0; b < kLevels; ++b) {
            int ce = 0, cu = 0, pe = 0, pu = 0;
            for (int i = 0; i < kPoints; ++i) {
                const int se = sign(ex[i][0][a] - ex[i][1][b]);
                const int su = sign(ua[i][0][a] - ua[i][1][b]);
                if (se != 0 && pe != 0 && se != pe) ++ce;
                if (su != 0 && pu != 0 && su != pu) ++cu;
                if (se != 0) pe = se;
                if (su != 0) pu = su;
            }
            crossings += ce;
            if (ce != cu) ++mismatched;
        }
    }
    return make(worst, 0.0, 0.05, "max |E_uaa - E_exact| <= tol and crossing pattern identical",
                worst <= 0.05 && mismatched == 0,
                "worst at " + where + "; exact crossings " + std::to_string(crossings) + ", pairs with different crossing count " +
                    std::to_string(mismatched));
}

CriterionResult dynamics_sanity() {
    auto keys = fig2_runs();
    keys.push_back(kFig4);
    double w0 = 0.0, drift = 0.0, excess = 0.0;
    for (const auto& k : keys) {
        const auto& r = exact_run(k);
        w0 = std::max(w0, std::abs(r.values.front() + 1.0));
        drift = std::max(drift, r.diagnostics.at("norm_drift"));
        excess = std::max(excess, r.diagnostics.at("max_abs_w") - 1.0);
    }
    const double m = std::max({w0, drift, excess});
    return make(m, 0.0, 1e-9, "|W(0)+1| <= 1e-9, drift <= 1e-10, |W| <= 1 + 1e-9",
                w0 <= 1e-9 && drift <= 1e-10 && excess <= 1e-9,
                "runs " + std::to_string(keys.size()) + "; |W(0)+1| " + fmt(w0) + ", drift " + fmt(drift) +
                    ", max|W|-1 " + fmt(excess));
}

CriterionResult fig2_uaa() {
    double worst = 0.0;
    std::string detail;
    for (const auto& k : fig2_runs()) {
        const auto& ex = exact_run(k);
        const ModelParams params{k.epsilon, k.f, core::default_n_max(k.nbar, k.f)};
        const auto ua = dynamics::evolve_uaa(params, {std::sqrt(k.nbar), params.n_max}, ex.times);
        const double rms = rms_diff(ua.values, ex.values);
        worst = std::max(worst, rms);
        detail += (detail.empty() ? "" : "; ") + std::string("f=") + fmt(k.f) + " nbar=" + fmt(k.nbar) +
                  " eps=" + fmt(k.epsilon) + " rms=" + fmt(rms);
    }
    return make(worst, 0.0, 0.15, "max RMS <= tol", worst <= 0.15, detail);
}

CriterionResult fig4_asymptotic() {
    const auto& ex = exact_run(kFig4);
    const auto as = dynamics::evolve_asymptotic(std::sqrt(kFig4.nbar), kFig4.f, ex.times);
    const double rms = rms_diff(as.values, ex.values);
    const int ze = zero_crossings(ex.values);
    const int za = zero_crossings(as.values);
    const double rel = std::abs(za - ze) / static_cast<double>(std::max(ze, 1));
    return make(rms, 0.0, 0.15, "RMS <= tol and zero-crossing counts within 5%", rms <= 0.15 && rel <= 0.05,
                "zero crossings exact " + std::to_string(ze) + ", asymptotic " + std::to_string(za));
}

CriterionResult rwa_failure() {
    const auto& ex = exact_run(kFig4);
    const ModelParams params{kFig4.epsilon, kFig4.f, core::default_n_max(kFig4.nbar, kFig4.f)};
    const auto rwa = dynamics::evolve_rwa(params, {std::sqrt(kFig4.nbar), params.n_max}, ex.times);
    double m = 0.0;
    for (std::size_t i = 0; i < ex.values.size(); ++i) m = std::max(m, std::abs(rwa.values[i] - ex.values[i]));
    return make(m, 0.5, 0.0, "m > e", m > 0.5);
}

CriterionResult sum_rule() {
    auto need = [](int n, double f) {
        return static_cast<int>(std::ceil(n + 40.0 * f * f + 20.0 * std::sqrt(n) + 60.0));
    };
    const double r25 = dynamics::sum_rule_residual(25, 0.1, need(25, 0.1));
    const double r100 = dynamics::sum_rule_residual(100, 0.1, need(100, 0.1));
    return make(r100, 0.0, 0.05, "residual(100) <= tol and < residual(25)", r100 <= 0.05 && r100 < r25,
                "residual(25) " + fmt(r25));
}

CriterionResult asymptotic_s() {
    double worst = 0.0;
    std::string where;
    for (int n : {100, 400}) {
        const int kmax = static_cast<int>(std::floor(2.0 * std::sqrt(n)));
        for (double f : {0.1, 0.2}) {
            for (int k = -kmax; k <= kmax; ++k) {
                const double exact = uaa::s_element(n + k, n, f);
                const double approx = dynamics::s_asymptotic(n, k, f);
                const double rel = std::abs(approx - exact) / std::abs(exact);
                if (rel > worst) {
                    worst = rel;
                    where = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " f=" + fmt(f);
                }
            }
        }
    }
    const double k0 = std::abs(dynamics::s_asymptotic(400, 0, 0.2) / uaa::s_element(400, 400, 0.2) - 1.0);
    return make(worst, 0.0, 0.05, "max relative deviation <= tol", worst <= 0.05,
                "worst at " + where + "; n=400 k=0 f=0.2 deviation " + fmt(k0));
}

CriterionResult beta_anchor() {
    const ModelParams params{1.0, 0.1, 40};
    const double beta = dynamics::beta_freq(1000, params);
    const double gap =
        uaa::uaa_energy(1000, uaa::Branch::plus, params) - uaa::uaa_energy(1000, uaa::Branch::minus, params);
    const double rel = std::abs(beta - gap) / beta;
    return make(rel, 0.0, 0.01, "m <= tol", rel <= 0.01, "beta " + fmt(beta) + ", UAA gap " + fmt(gap));
}

CriterionResult mu_consistency() {
    double worst = 0.0;
    for (double lam : {200.0, 500.0, 1000.0}) {
        for (double w_j : {1.0, 100.0, 1e4}) {
            cavity::CavitySpec s;
            s.lambda0_nm = lam;
            s.field_energy_j = w_j;
            const double mu = cavity::applicability_mu(s);
            worst = std::max(worst, std::abs(mu * mu * cavity::critical_density(lam) / s.energy_density() - 1.0));
        }
    }
    return make(worst, 0.0, 0.02, "max |mu^2 w_c / w - 1| <= tol", worst <= 0.02);
}

}  // namespace

const std::vector<Criterion>& registry() {
    static const std::vector<Criterion> r{
        {"delta-root", "wave-packet delta root", 1.0, delta_root},
        {"external-ratio", "external-mode energy ratio", 0.0, external_ratio},
        {"critical-density", "critical energy density coefficient", 0.0, critical_density},
        {"exact-limits", "exact solver f=0 and eps=0 limits", 5.0, exact_limits},
        {"parity-exact", "parity commutes with H", 0.0, parity_exact},
        {"fig1-uaa", "UAA vs exact spectrum, eps=1, f in [0,1]", 60.0, fig1_uaa},
        {"dynamics-sanity", "exact dynamics W(0), norm and bounds", 0.0, dynamics_sanity},
        {"fig2-uaa", "UAA vs exact W(t) over tau in [0,25]", 300.0, fig2_uaa},
        {"fig4-asymptotic", "-cos(4 f alpha sin t) vs exact, nbar=1000", 600.0, fig4_asymptotic},
        {"rwa-failure", "RWA departs from exact at xi=6.3", 0.0, rwa_failure},
        {"sum-rule", "column sum of S", 0.0, sum_rule},
        {"asymptotic-s", "Bessel form of S elements", 0.0, asymptotic_s},
        {"beta-anchor", "beta_n vs UAA doublet gap", 0.0, beta_anchor},
        {"mu-consistency", "mu^2 w_c = w", 0.0, mu_consistency},
    };
    return r;
}

std::vector<CriterionResult> run_criteria(const std::vector<std::string>& only) {
    const auto& all = registry();
    for (const auto& id : only) {
        if (std::none_of(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; })) {
            throw ConfigError("only: unknown criterion '" + id + "'");
        }
    }
    std::vector<CriterionResult> out;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.id = c.id;
        r.title = c.title;
        r.runtime_limit_s = c.runtime_limit_s;
        if (c.runtime_limit_s > 0.0 && r.runtime_s > c.runtime_limit_s) {
            r.pass = false;
            r.detail += (r.detail.empty() ? "" : "; ") + std::string("runtime over limit");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream s;
    s << (r.pass ? "PASS " : "FAIL ") << r.id << ": measured " << fmt(r.measured) << ", expected " << fmt(r.expected)
      << ", tol " << fmt(r.tolerance) << " [" << r.comparison << "] (" << fmt(r.runtime_s) << " s";
    if (r.runtime_limit_s > 0.0) s << " / limit " << fmt(r.runtime_limit_s) << " s";
    s << ")";
    if (!r.detail.empty()) s << " -- " << r.detail;
    return s.str();
}

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        j.push_back({{"id", r.id},
                     {"title", r.title},
                     {"pass", r.pass},
                     {"measured", r.measured},
                     {"expected", r.expected},
                     {"tolerance", r.tolerance},
                     {"comparison", r.comparison},
                     {"detail", r.detail},
                     {"runtime_s", r.runtime_s},
                     {"runtime_limit_s", r.runtime_limit_s}});
    }
    return j;
}

}  // namespace rabilab::validation
