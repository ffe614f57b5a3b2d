#pragma once

// Wave-packet bookkeeping for a resonant cavity mode: how much of the field
// energy sits in the collective mode, when the single-mode picture holds,
// and how strong the resulting atom-field coupling is.
//
// Internally everything is in natural units (hbar = c = 1, energies in eV,
// lengths in 1/eV, e0^2 = fine-structure constant). Inputs and reports use
// nm, cm^2, cm^3 and joules.

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rabilab::cavity {

namespace constants {
inline constexpr double hbar_c_ev_nm = 197.3269804;
inline constexpr double electron_mass_ev = 0.51099895e6;
inline constexpr double fine_structure = 1.0 / 137.035999;
inline constexpr double joule_per_ev = 1.602176634e-19;
inline constexpr double nm3_per_cm3 = 1e21;
inline constexpr double nm2_per_cm2 = 1e14;
}  // namespace constants

struct CavitySpec {
    std::optional<double> lambda0_nm;  // exactly one of lambda0_nm / omega0_ev
    std::optional<double> omega0_ev;
    double q_factor = 1e6;
    double volume_cm3 = 1.0;
    double transverse_area_cm2 = 1.0;
    double field_energy_j = 1.0;     // total energy W of the resonant packet
    std::optional<double> kappa1;    // overrides (k0^2 S)^-1
    double mu_threshold = 1.0;       // single_mode_ok iff mu >= this
    double xi_threshold = 0.1;       // rwa_ok iff xi <= this

    void validate() const;  // throws ConfigError naming the field
    double omega0() const;  // eV
    double lambda0() const; // nm
    double kappa1_value() const;
    double volume_natural() const;  // eV^-3
    double field_energy_ev() const;
    double energy_density() const;  // J/cm^3
};

// Root of 1 - (8 pi^{3/2} / d^3) Phi^6(d / sqrt 2) / Phi^3(d) on [1, 6].
double delta_equation(double delta);
double solve_delta();

// (1 - Phi^3(delta)) / Phi^3(delta)
double external_mode_ratio(double delta);

struct ModeCounts {
    double n_d = 0.0;      // V w0^3 / (pi^2 Q)
    double n_modes = 0.0;  // V d^3 k1^2 k2 w0^3 / (2 pi)^3
};
ModeCounts mode_counts(const CavitySpec& spec, double delta);

struct PacketReport {
    double delta = 0.0;
    double n_modes = 0.0;
    double n_d = 0.0;
    double c_norm = 0.0;
    double e0_energy = 0.0;  // J
    double e_fluct = 0.0;    // J
    double e_ext = 0.0;      // J
    double e_af = 0.0;       // J
    double d_e_fluct = 0.0;  // J
    double mu = 0.0;
    double w_crit = 0.0;  // J/cm^3
    double coupling_f = 0.0;
    double nbar = 0.0;
    double xi = 0.0;
    double xi_closed_form = 0.0;
    bool single_mode_ok = false;
    bool rwa_ok = false;
};

// Energy partition only: c_norm, e0, e_fluct, e_ext, e_af, d_e_fluct and counts.
PacketReport packet_energy_report(const CavitySpec& spec, double delta);

// mu = 7 e0 sqrt(W / (V m_e w0^3))
double applicability_mu(const CavitySpec& spec);

// m_e w0^3 / (49 e0^2) in J/cm^3
double critical_density(double lambda0_nm);

struct Coupling {
    double f = 0.0;
    double xi = 0.0;
    double xi_closed_form = 0.0;  // 2 e0 v_e sqrt(2 W / (pi Q w0)), only meaningful for nbar = W / w0
};
Coupling coupling_and_xi(const CavitySpec& spec, double nbar);

struct CollectiveParams {
    double omega_tilde = 0.0;
    double m_tilde = 0.0;
};
struct ModeSample {
    double omega = 0.0;
    double m = 0.0;
};
CollectiveParams collective_average(const std::vector<ModeSample>& modes);

// Full report with nbar = W / w0.
PacketReport full_report(const CavitySpec& spec);

// Stable JSON schema: version, inputs, results, units.
nlohmann::ordered_json report_json(const CavitySpec& spec, const PacketReport& report, const std::string& version);

// Reads a flat JSON object; unknown keys are ConfigErrors.
CavitySpec spec_from_json(const nlohmann::json& j);

}  // namespace rabilab::cavity
