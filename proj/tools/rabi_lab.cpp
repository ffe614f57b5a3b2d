// rabi_lab: spectra, population dynamics and cavity applicability reports
// for the quantum Rabi model.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numerical or truncation failure.

#include "commands.hpp"

#include "rabilab/cavity.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/validation.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <memory>

#ifndef RABI_LAB_VERSION
#define RABI_LAB_VERSION "dev"
#endif

namespace {

using namespace rabilab;

// Writes to --out when given, else stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("out: cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

template <typename T>
void take(CLI::Option* opt, T& dst, const T& value) {
    if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Rabi model laboratory"};
    app.set_version_flag("--version", std::string(RABI_LAB_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "JSON file with spectrum/evolve/applicability/validate sections");
    app.add_option("--out", out_path, "output file (default: stdout)");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "energy levels versus coupling (CSV)");
    double s_eps = 1.0;
    std::string s_f;
    int s_levels = 0, s_nmax = 0;
    std::string s_methods;
    auto* so_eps = spectrum->add_option("--epsilon", s_eps, "atomic level splitting (units of the mode frequency)");
    auto* so_f = spectrum->add_option("--f", s_f, "coupling: value or start:stop:step");
    auto* so_levels = spectrum->add_option("--levels", s_levels, "levels per parity sector");
    auto* so_nmax = spectrum->add_option("--n-max", s_nmax, "Fock truncation (default: sized from grid)");
    auto* so_methods = spectrum->add_option("--methods", s_methods, "comma list of exact, uaa, rwa");

    // evolve
    auto* evolve = app.add_subcommand("evolve", "population difference W(t) (CSV)");
    double e_eps = 1.0, e_f = 0.0, e_nbar = 0.0, e_tmax = 0.0;
    int e_nmax = 0, e_samples = 0;
    std::string e_methods;
    bool e_debug = false;
    auto* eo_eps = evolve->add_option("--epsilon", e_eps, "atomic level splitting");
    auto* eo_f = evolve->add_option("--f", e_f, "coupling constant");
    auto* eo_nbar = evolve->add_option("--nbar", e_nbar, "mean photon number of the coherent field");
    auto* eo_nmax = evolve->add_option("--n-max", e_nmax, "Fock truncation for the exact engine");
    auto* eo_methods = evolve->add_option("--methods", e_methods, "comma list of exact, uaa, rwa, asymptotic");
    auto* eo_tmax = evolve->add_option("--t-max", e_tmax, "time horizon");
    auto* eo_samples = evolve->add_option("--samples", e_samples, "number of time samples");
    auto* eo_debug = evolve->add_flag("--debug-terms", e_debug, "emit strong-field reduction intermediates");

    // applicability
    auto* applic = app.add_subcommand("applicability", "cavity single-mode and RWA applicability report (JSON)");
    double a_lambda = 0, a_omega = 0, a_q = 0, a_v = 0, a_s = 0, a_w = 0, a_k1 = 0, a_mu = 0, a_xi = 0;
    auto* ao_lambda = applic->add_option("--lambda0", a_lambda, "carrier wavelength [nm]");
    auto* ao_omega = applic->add_option("--omega0", a_omega, "carrier photon energy [eV]");
    auto* ao_q = applic->add_option("--q", a_q, "quality factor");
    auto* ao_v = applic->add_option("--volume", a_v, "cavity volume [cm^3]");
    auto* ao_s = applic->add_option("--area", a_s, "transverse area [cm^2]");
    auto* ao_w = applic->add_option("--energy", a_w, "field energy W [J]");
    auto* ao_k1 = applic->add_option("--kappa1", a_k1, "angular spread override");
    auto* ao_mu = applic->add_option("--mu-threshold", a_mu, "single_mode_ok iff mu >= threshold");
    auto* ao_xi = applic->add_option("--xi-threshold", a_xi, "rwa_ok iff xi <= threshold");

    // validate
    auto* validate = app.add_subcommand("validate", "run the acceptance criteria");
    std::vector<std::string> only;
    bool as_json = false;
    validate->add_option("--only", only, "criterion ids")->delimiter(',');
    validate->add_flag("--json", as_json, "machine-readable results");

    for (auto* sub : {spectrum, evolve, applic, validate}) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output file (default: stdout)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto section = [&](const std::string& name) {
            return config_path.empty() ? nlohmann::json::object() : cli::load_section(config_path, name);
        };
        if (spectrum->parsed()) {
            cli::SpectrumConfig cfg;
            cfg.apply(section("spectrum"));
            take(so_eps, cfg.epsilon, s_eps);
            take(so_f, cfg.f, s_f);
            take(so_levels, cfg.levels, s_levels);
            take(so_nmax, cfg.n_max, s_nmax);
            take(so_methods, cfg.methods, s_methods);
            cfg.validate();
            Output out(out_path);
            return cli::run_spectrum(cfg, out.stream(), RABI_LAB_VERSION);
        }
        if (evolve->parsed()) {
            cli::EvolveConfig cfg;
            cfg.apply(section("evolve"));
            take(eo_eps, cfg.epsilon, e_eps);
            take(eo_f, cfg.f, e_f);
            take(eo_nbar, cfg.nbar, e_nbar);
            take(eo_nmax, cfg.n_max, e_nmax);
            take(eo_methods, cfg.methods, e_methods);
            if (eo_tmax->count() > 0) cfg.t_max = e_tmax;
            take(eo_samples, cfg.samples, e_samples);
            take(eo_debug, cfg.debug_terms, e_debug);
            cfg.validate();
            Output out(out_path);
            return cli::run_evolve(cfg, out.stream(), RABI_LAB_VERSION);
        }
        if (applic->parsed()) {
            cavity::CavitySpec spec = cavity::spec_from_json(section("applicability"));
            if (ao_lambda->count()) {
                spec.lambda0_nm = a_lambda;
                if (!ao_omega->count()) spec.omega0_ev.reset();
            }
            if (ao_omega->count()) {
                spec.omega0_ev = a_omega;
                if (!ao_lambda->count()) spec.lambda0_nm.reset();
            }
            take(ao_q, spec.q_factor, a_q);
            take(ao_v, spec.volume_cm3, a_v);
            take(ao_s, spec.transverse_area_cm2, a_s);
            take(ao_w, spec.field_energy_j, a_w);
            if (ao_k1->count()) spec.kappa1 = a_k1;
            take(ao_mu, spec.mu_threshold, a_mu);
            take(ao_xi, spec.xi_threshold, a_xi);
            spec.validate();
            const auto report = cavity::full_report(spec);
            Output out(out_path);
            out.stream() << cavity::report_json(spec, report, RABI_LAB_VERSION).dump(2) << '\n';
            return 0;
        }
        if (validate->parsed()) {
            const auto sec = section("validate");
            if (!sec.empty()) throw ConfigError("validate: the config section takes no settings");
            const auto results = validation::run_criteria(only);
            Output out(out_path);
            bool ok = true;
            for (const auto& r : results) ok = ok && r.pass;
            if (as_json) {
                out.stream() << validation::to_json(results).dump(2) << '\n';
            } else {
                for (const auto& r : results) out.stream() << validation::format_line(r) << '\n';
                int passed = 0;
                for (const auto& r : results) passed += r.pass;
                out.stream() << passed << " of " << results.size() << " criteria passed\n";
            }
            return ok ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "rabi_lab: configuration error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "rabi_lab: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rabi_lab: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
