#include "rabilab/cavity.hpp"

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

#include <cmath>
#include <numbers>

namespace rabilab::cavity {

namespace {

using namespace constants;
using std::numbers::pi;

const double kPi32 = std::pow(pi, 1.5);
const double kE0 = std::sqrt(fine_structure);

double nm_to_natural(double nm) { return nm / hbar_c_ev_nm; }  // 1/eV

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw ConfigError(std::string(field) + ": must be a finite positive number");
    }
}

// Electron speed from the virial estimate w0 = m_e v^2 / 2.
double electron_speed(double omega0) { return std::sqrt(2.0 * omega0 / electron_mass_ev); }

}  // namespace

void CavitySpec::validate() const {
    if (lambda0_nm.has_value() == omega0_ev.has_value()) {
        throw ConfigError("lambda0_nm/omega0_ev: give exactly one of the two");
    }
    if (lambda0_nm) require_positive(*lambda0_nm, "lambda0_nm");
    if (omega0_ev) require_positive(*omega0_ev, "omega0_ev");
    require_positive(q_factor, "q_factor");
    if (q_factor <= 1.0) throw ConfigError("q_factor: must exceed 1");
    require_positive(volume_cm3, "volume_cm3");
    require_positive(transverse_area_cm2, "transverse_area_cm2");
    require_positive(field_energy_j, "field_energy_j");
    if (kappa1) require_positive(*kappa1, "kappa1");
    require_positive(mu_threshold, "mu_threshold");
    require_positive(xi_threshold, "xi_threshold");
}

double CavitySpec::omega0() const {
    return omega0_ev ? *omega0_ev : 2.0 * pi * hbar_c_ev_nm / *lambda0_nm;
}

double CavitySpec::lambda0() const {
    return lambda0_nm ? *lambda0_nm : 2.0 * pi * hbar_c_ev_nm / *omega0_ev;
}

double CavitySpec::kappa1_value() const {
    if (kappa1) return *kappa1;
    const double k0 = 2.0 * pi / lambda0();
    return 1.0 / (k0 * k0 * transverse_area_cm2 * nm2_per_cm2);
}

double CavitySpec::volume_natural() const {
    return std::pow(nm_to_natural(1.0), 3) * volume_cm3 * nm3_per_cm3;
}

double CavitySpec::field_energy_ev() const { return field_energy_j / joule_per_ev; }

double CavitySpec::energy_density() const { return field_energy_j / volume_cm3; }

double delta_equation(double delta) {
    const double phi = specfun::erf_phi(delta);
    const double half = specfun::erf_phi(delta / std::numbers::sqrt2);
    return 1.0 - 8.0 * kPi32 / (delta * delta * delta) * std::pow(half, 6) / (phi * phi * phi);
}

double solve_delta() {
    double lo = 1.0;
    double hi = 6.0;
    double flo = delta_equation(lo);
    if ((flo > 0.0) == (delta_equation(hi) > 0.0)) {
        throw RootFindingError("solve_delta: no sign change on [1, 6]");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fm = delta_equation(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double external_mode_ratio(double delta) {
    if (!(delta > 0.0)) throw DomainError("external_mode_ratio: delta must be positive");
    const double p3 = std::pow(specfun::erf_phi(delta), 3);
    // 1 - Phi^3 loses everything to rounding past delta ~ 6; use erfc there.
    const double tail = std::erfc(delta);
    const double one_minus = tail * (3.0 - 3.0 * tail + tail * tail);
    return one_minus / p3;
}

ModeCounts mode_counts(const CavitySpec& spec, double delta) {
    spec.validate();
    const double w0 = spec.omega0();
    const double v = spec.volume_natural();
    const double k1 = spec.kappa1_value();
    const double k2 = 1.0 / spec.q_factor;
    ModeCounts c;
    c.n_d = v * w0 * w0 * w0 / (pi * pi * spec.q_factor);
    c.n_modes = v * std::pow(delta, 3) * k1 * k1 * k2 * w0 * w0 * w0 / std::pow(2.0 * pi, 3);
    return c;
}

PacketReport packet_energy_report(const CavitySpec& spec, double delta) {
    const ModeCounts counts = mode_counts(spec, delta);
    const double w0 = spec.omega0();
    const double v = spec.volume_natural();
    const double w = spec.field_energy_ev();
    const double k1 = spec.kappa1_value();
    const double k2 = 1.0 / spec.q_factor;
    const double p3 = std::pow(specfun::erf_phi(delta), 3);
    const double half6 = std::pow(specfun::erf_phi(delta / std::numbers::sqrt2), 6);
    const double d3 = delta * delta * delta;

    PacketReport r;
    r.delta = delta;
    r.n_d = counts.n_d;
    r.n_modes = counts.n_modes;
    r.c_norm = std::sqrt(8.0 * kPi32 * w / (v * k1 * k1 * k2 * std::pow(w0, 4)));
    r.e0_energy = w * p3 * joule_per_ev;
    r.e_fluct = w * p3 * (1.0 - 8.0 * kPi32 / d3 * half6 / p3) * joule_per_ev;
    r.e_ext = w * p3 * external_mode_ratio(delta) * joule_per_ev;
    r.e_af = 8.0 * std::sqrt(counts.n_modes) * std::sqrt(std::pow(pi, 2.5) / d3 * w / v) * kE0 *
             electron_speed(w0) / w0 * joule_per_ev;
    r.d_e_fluct = w0 * std::sqrt(counts.n_modes) * joule_per_ev;
    return r;
}

double applicability_mu(const CavitySpec& spec) {
    spec.validate();
    const double w0 = spec.omega0();
    return 7.0 * kE0 * std::sqrt(spec.field_energy_ev() / (spec.volume_natural() * electron_mass_ev * w0 * w0 * w0));
}

double critical_density(double lambda0_nm) {
    if (!std::isfinite(lambda0_nm) || lambda0_nm <= 0.0) {
        throw DomainError("critical_density: wavelength must be positive");
    }
    const double w0 = 2.0 * pi * hbar_c_ev_nm / lambda0_nm;
    const double ev4 = electron_mass_ev * w0 * w0 * w0 / (49.0 * fine_structure);
    // eV^4 -> eV/nm^3 -> J/cm^3
    return ev4 / std::pow(hbar_c_ev_nm, 3) * joule_per_ev * nm3_per_cm3;
}

Coupling coupling_and_xi(const CavitySpec& spec, double nbar) {
    spec.validate();
    if (!std::isfinite(nbar) || nbar < 0.0) throw DomainError("coupling_and_xi: nbar must be non-negative");
    const double w0 = spec.omega0();
    const double ve = electron_speed(w0);
    Coupling c;
    c.f = kE0 * ve * std::sqrt(2.0 / (pi * spec.q_factor));
    c.xi = 2.0 * c.f * std::sqrt(nbar);
    c.xi_closed_form = 2.0 * kE0 * ve * std::sqrt(2.0 * spec.field_energy_ev() / (pi * spec.q_factor * w0));
    return c;
}

CollectiveParams collective_average(const std::vector<ModeSample>& modes) {
    if (modes.empty()) throw DomainError("collective_average: mode list is empty");
    CollectiveParams p;
    for (const auto& m : modes) {
        p.omega_tilde += m.omega;
        p.m_tilde += m.m;
    }
    p.omega_tilde /= static_cast<double>(modes.size());
    p.m_tilde /= static_cast<double>(modes.size());
    return p;
}

PacketReport full_report(const CavitySpec& spec) {
    spec.validate();
    PacketReport r = packet_energy_report(spec, solve_delta());
    r.mu = applicability_mu(spec);
    r.w_crit = critical_density(spec.lambda0());
    r.nbar = spec.field_energy_ev() / spec.omega0();
    const Coupling c = coupling_and_xi(spec, r.nbar);
    r.coupling_f = c.f;
    r.xi = c.xi;
    r.xi_closed_form = c.xi_closed_form;
    r.single_mode_ok = r.mu >= spec.mu_threshold;
    r.rwa_ok = r.xi <= spec.xi_threshold;
    return r;
}

nlohmann::ordered_json report_json(const CavitySpec& spec, const PacketReport& r, const std::string& version) {
    nlohmann::ordered_json j;
    j["version"] = version;
    auto& in = j["inputs"];
    in["lambda0_nm"] = spec.lambda0();
    in["omega0_ev"] = spec.omega0();
    in["q_factor"] = spec.q_factor;
    in["volume_cm3"] = spec.volume_cm3;
    in["transverse_area_cm2"] = spec.transverse_area_cm2;
    in["field_energy_j"] = spec.field_energy_j;
    in["kappa1"] = spec.kappa1_value();
    in["kappa1_source"] = spec.kappa1 ? "override" : "transverse_area";
    in["mu_threshold"] = spec.mu_threshold;
    in["xi_threshold"] = spec.xi_threshold;
    auto& out = j["results"];
    out["delta"] = r.delta;
    out["external_mode_ratio"] = external_mode_ratio(r.delta);
    out["n_modes"] = r.n_modes;
    out["n_d"] = r.n_d;
    out["c_norm"] = r.c_norm;
    out["e0_energy"] = r.e0_energy;
    out["e_fluct"] = r.e_fluct;
    out["e_ext"] = r.e_ext;
    out["e_af"] = r.e_af;
    out["d_e_fluct"] = r.d_e_fluct;
    out["energy_density"] = spec.energy_density();
    out["mu"] = r.mu;
    out["w_crit"] = r.w_crit;
    out["nbar"] = r.nbar;
    out["coupling_f"] = r.coupling_f;
    out["xi"] = r.xi;
    out["xi_closed_form"] = r.xi_closed_form;
    out["single_mode_ok"] = r.single_mode_ok;
    out["rwa_ok"] = r.rwa_ok;
    auto& u = j["units"];
    u["lambda0_nm"] = "nm";
    u["omega0_ev"] = "eV (hbar = c = 1)";
    u["volume_cm3"] = "cm^3";
    u["transverse_area_cm2"] = "cm^2";
    u["field_energy_j"] = "J";
    u["energies"] = "J (e0_energy, e_fluct, e_ext, e_af, d_e_fluct)";
    u["energy_density"] = "J/cm^3";
    u["w_crit"] = "J/cm^3";
    u["dimensionless"] = "delta, n_modes, n_d, c_norm, mu, nbar, coupling_f, xi, kappa1";
    u["constants"] = {{"hbar_c_ev_nm", hbar_c_ev_nm},
                      {"electron_mass_ev", electron_mass_ev},
                      {"fine_structure", fine_structure},
                      {"joule_per_ev", joule_per_ev},
                      {"nm3_per_cm3", nm3_per_cm3}};
    return j;
}

CavitySpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("applicability: expected a JSON object");
    CavitySpec s;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ConfigError(key + ": expected a number");
        const double v = value.get<double>();
        if (key == "lambda0_nm") s.lambda0_nm = v;
        else if (key == "omega0_ev") s.omega0_ev = v;
        else if (key == "q_factor") s.q_factor = v;
        else if (key == "volume_cm3") s.volume_cm3 = v;
        else if (key == "transverse_area_cm2") s.transverse_area_cm2 = v;
        else if (key == "field_energy_j") s.field_energy_j = v;
        else if (key == "kappa1") s.kappa1 = v;
        else if (key == "mu_threshold") s.mu_threshold = v;
        else if (key == "xi_threshold") s.xi_threshold = v;
        else throw ConfigError(key + ": unknown applicability field");
    }
    return s;
}

}  // namespace rabilab::cavity
