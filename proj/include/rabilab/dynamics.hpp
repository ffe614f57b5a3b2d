#pragma once

// Population difference W(t) = <sigma_3> for an atom starting in spin-down
// with the field in a coherent state |alpha>, under four engines.

#include "rabilab/kernels.hpp"
#include "rabilab/rabi.hpp"
#include "rabilab/uaa.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace rabilab::dynamics {

using core::ModelParams;
using core::QuantumState;
using kernels::Exec;

struct CoherentInit {
    double alpha = 0.0;  // nbar = alpha^2
    int n_max = 40;

    void validate() const;
};

enum class Method { exact, uaa, rwa, asymptotic };

std::string method_name(Method m);
Method parse_method(const std::string& name);  // throws ConfigError

struct TimeSeries {
    Method method = Method::exact;
    std::vector<double> times;
    std::vector<double> values;
    std::map<std::string, double> diagnostics;
    bool out_of_bounds = false;  // |W| exceeded the engine's stated bound
};

// `samples` evenly spaced times covering [0, t_max] inclusive.
std::vector<double> uniform_times(double t_max, int samples);

// Spin down times coherent amplitudes, renormalized after truncation.
// Throws TruncationError when more than 1e-10 of the norm is cut off.
QuantumState coherent_state_vector(const CoherentInit& init);

double population_difference(const QuantumState& state);

// Exact propagation in the eigenbasis of both parity sectors.
// Diagnostics: w0, norm_drift, max_abs_w, completeness, kept_modes.
TimeSeries evolve_exact(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                        Exec exec = Exec::parallel);

// Jaynes-Cummings evolution: Poisson-weighted Rabi oscillations at
// sqrt(Delta^2 + 4 f^2 m), m the photon number paired with spin down.
TimeSeries evolve_rwa(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                      Exec exec = Exec::parallel);
// Diagnostic Fock-state start |n, down>: oscillation at sqrt(Delta^2 + 4 f^2 n).
TimeSeries evolve_rwa_fock(const ModelParams& params, int n, std::span<const double> times);

struct EvolutionTerm {
    int n = 0;  // -1 is the ground level
    uaa::Branch branch = uaa::Branch::minus;
    double energy = 0.0;
    double a_coef = 0.0;
    double b_coef = 0.0;
    double gamma = 0.0;  // gamma_nr times exp(-(alpha+f)^2/2)
    double c = 0.0;      // C_nr
};

struct EvolutionTerms {
    double alpha = 0.0;
    double f = 0.0;
    int window_lo = 0;
    int window_hi = 0;
    int m_lo = 0;  // summation range of gamma
    int m_hi = 0;
    double gamma_tail_bound = 0.0;
    double boundary_mass = 0.0;
    double weight_sum = 0.0;  // sum |C_nr|^2
    std::vector<EvolutionTerm> terms;

    // D coefficient pairing terms i (k, q) and j (n, r) such that
    //   W(t) = 2 Re sum_ij D_ij exp(-i (E_j - E_i) t).
    double d_coefficient(std::size_t i, std::size_t j, const uaa::SMatrixTable& table) const;
    // Omega = E_j - E_i
    double omega(std::size_t i, std::size_t j) const { return terms[j].energy - terms[i].energy; }
};

// UAA expansion of the coherent initial state. window_half_width < 0 selects
// ceil(10 sqrt(nbar) + 20); m_max < 0 selects a range with tail bound below
// 1e-10. Throws WindowError when the window misses more than 1e-6 of the
// photon distribution and TruncationError when m_max cannot reach the bound.
EvolutionTerms uaa_expansion_coefficients(const ModelParams& params, const CoherentInit& init,
                                          int window_half_width = -1, int m_max = -1);

// Diagnostics: w0, weight_sum, boundary_mass, max_abs_w, band.
// out_of_bounds is set (values are not clipped) when |W| > 1.05.
TimeSeries evolve_uaa(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                      Exec exec = Exec::parallel);

// Strong-field closed form W(t) = -cos(4 f alpha sin t).
double asymptotic_population(double alpha, double f, double t);
TimeSeries evolve_asymptotic(double alpha, double f, std::span<const double> times);

// beta_n = sqrt([1 - eps e^{-2f^2} J0(4f sqrt n)]^2 + eps^2 e^{-4f^2} J1(4f sqrt n)^2)
double beta_freq(int n, const ModelParams& params);

// Bessel form of the displaced parity elements for large n:
//   (-1)^n e^{-2f^2} e^{-k^2/4n} J_k(4 f sqrt n)
double s_asymptotic(int n, int k, double f);

// |sum_{m=0}^{m_max} S_mn(f) - (-1)^n|. Requires m_max >= n + 40 f^2 + 20 sqrt(n) + 60.
double sum_rule_residual(int n, double f, int m_max);

// Intermediates of the strong-field reduction, for inspection only. Values
// carrying powers of (alpha+f) are scaled by the coherent envelope so they
// stay finite: gamma and C by exp(-(alpha+f)^2/2), xi by exp(-alpha^2)
// exactly as it enters the double sum.
struct ReductionTerms {
    int n = 0;
    uaa::Branch branch = uaa::Branch::minus;
    double gamma_full = 0.0;
    double gamma_simplified = 0.0;
    double c_full = 0.0;
    double c_simplified = 0.0;
    double xi_weight = 0.0;
    double beta = 0.0;
};
ReductionTerms reduction_terms(int n, uaa::Branch branch, const ModelParams& params, double alpha);

// D-tilde of the centred double sum, term for term in its reduced form
// (including its repeated B^(r) B^(r) factors).
double d_tilde(int k, int n, uaa::Branch r, uaa::Branch q, int n0, const ModelParams& params);

}  // namespace rabilab::dynamics
