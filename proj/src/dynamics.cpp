#include "rabilab/dynamics.hpp"

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rabilab::dynamics {

namespace {

constexpr double kStateLeakageTol = 1e-10;
constexpr double kCompletenessTol = 1e-8;
constexpr double kProjectionFloor = 1e-14;
constexpr double kEdgeWeightTol = 1e-10;
constexpr int kEdgeSites = 5;
constexpr double kGammaTailTol = 1e-10;
constexpr double kWindowMassTol = 1e-6;
constexpr double kUaaBound = 1.05;
constexpr double kBandFloor = 1e-16;

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Squared coherent amplitude |<m|b>|^2 in log space.
double poisson_weight(int m, double b2) {
    if (b2 == 0.0) return m == 0 ? 1.0 : 0.0;
    return std::exp(-b2 + m * std::log(b2) - specfun::log_factorial(m));
}

// Poisson(b2) mass below lo plus mass above hi, summed term by term so
// small tails are not lost to cancellation.
double poisson_tails(double b2, int lo, int hi) {
    double lower = 0.0;
    for (int m = 0; m < lo; ++m) lower += poisson_weight(m, b2);
    double upper = 0.0;
    for (int m = std::max(hi + 1, 0);; ++m) {
        const double w = poisson_weight(m, b2);
        upper += w;
        if (m > b2 && (w < 1e-300 || w < 1e-40 * upper)) break;
    }
    return lower + upper;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void check_times(std::span<const double> times) {
    for (double t : times) {
        if (!std::isfinite(t)) throw DomainError("time samples must be finite");
    }
}

// <phi_i| S |phi_j> for two UAA terms; the A slot of the ground level is empty.
double s_sandwich(const EvolutionTerm& ti, const EvolutionTerm& tj, const uaa::SMatrixTable& table) {
    const int k = ti.n;
    const int n = tj.n;
    double x = 0.0;
    if (k >= 0 && n >= 0) x += ti.a_coef * tj.a_coef * table(k, n);
    if (k >= 0) x += ti.a_coef * tj.b_coef * table(k, n + 1);
    if (n >= 0) x += ti.b_coef * tj.a_coef * table(k + 1, n);
    x += ti.b_coef * tj.b_coef * table(k + 1, n + 1);
    return x;
}

struct GammaRange {
    int lo = 0;
    int hi = 0;
    double tail_bound = 0.0;
};

GammaRange gamma_range(double b, int m_max) {
    const double b2 = b * b;
    GammaRange r;
    r.lo = std::max(0, static_cast<int>(std::floor(b2 - 12.0 * b - 40.0)));
    r.hi = m_max >= 0 ? m_max : static_cast<int>(std::ceil(b2 + 12.0 * b + 40.0));
    if (r.hi < r.lo) r.lo = 0;
    // S rows have unit norm, so Cauchy-Schwarz bounds the dropped part of
    // the gamma sum by the square root of the dropped coherent mass.
    r.tail_bound = std::sqrt(poisson_tails(b2, r.lo, r.hi));
    return r;
}

// gamma_nr exp(-b^2/2) = sum_m <m|b> (A S_mn + B S_{m,n+1}).
double gamma_sum(const EvolutionTerm& t, double b, const GammaRange& range, const uaa::SMatrixTable& table) {
    double acc = 0.0;
    for (int m = range.lo; m <= range.hi; ++m) {
        const double w = uaa::coherent_amplitude(m, b);
        if (w == 0.0) continue;
        double s = t.b_coef * table(m, t.n + 1);
        if (t.n >= 0) s += t.a_coef * table(m, t.n);
        acc += w * s;
    }
    return acc;
}

EvolutionTerm make_term(const uaa::UaaEigenpair& pair) {
    EvolutionTerm t;
    t.n = pair.n;
    t.branch = pair.branch;
    t.energy = pair.energy;
    t.a_coef = pair.a_coef;
    t.b_coef = pair.b_coef;
    return t;
}

void finish_term(EvolutionTerm& t, double b, const GammaRange& range, const uaa::SMatrixTable& table) {
    t.gamma = gamma_sum(t, b, range, table);
    double direct = t.b_coef * uaa::coherent_amplitude(t.n + 1, b);
    if (t.n >= 0) direct += t.a_coef * uaa::coherent_amplitude(t.n, b);
    t.c = (direct - parity_sign(t.n) * t.gamma) / std::numbers::sqrt2;
}

}  // namespace

void CoherentInit::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("alpha must be finite and non-negative");
    }
    if (n_max < 4) {
        throw DomainError("n_max must be at least 4");
    }
}

std::string method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::uaa: return "uaa";
        case Method::rwa: return "rwa";
        case Method::asymptotic: return "asymptotic";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "exact") return Method::exact;
    if (name == "uaa") return Method::uaa;
    if (name == "rwa") return Method::rwa;
    if (name == "asymptotic") return Method::asymptotic;
    throw ConfigError("methods: unknown method '" + name + "' (expected exact, uaa, rwa or asymptotic)");
}

std::vector<double> uniform_times(double t_max, int samples) {
    if (!std::isfinite(t_max) || t_max < 0.0) {
        throw DomainError("t_max must be finite and non-negative");
    }
    if (samples < 2) {
        throw DomainError("at least two time samples are required");
    }
    std::vector<double> t(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        t[static_cast<std::size_t>(i)] = t_max * i / (samples - 1);
    }
    return t;
}

QuantumState coherent_state_vector(const CoherentInit& init) {
    init.validate();
    QuantumState s(init.n_max);
    double kept = 0.0;
    for (int n = 0; n <= init.n_max; ++n) {
        const double a = uaa::coherent_amplitude(n, init.alpha);
        s.at(n, 0) = a;
        kept += a * a;
    }
    const double leakage = 1.0 - kept;
    if (leakage > kStateLeakageTol) {
        std::ostringstream msg;
        msg << "coherent state with alpha=" << init.alpha << " loses " << leakage << " of its norm above n_max="
            << init.n_max << "; need roughly alpha^2 + 12 alpha + 40";
        throw TruncationError(msg.str());
    }
    s.normalize();
    return s;
}

double population_difference(const QuantumState& state) {
    double w = 0.0;
    for (int n = 0; n <= state.n_max; ++n) {
        w += std::norm(state.at(n, 1)) - std::norm(state.at(n, 0));
    }
    return w;
}

TimeSeries evolve_exact(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                        Exec exec) {
    params.validate();
    init.validate();
    check_times(times);
    if (init.n_max != params.n_max) {
        throw DomainError("evolve_exact: params and initial state disagree on n_max");
    }
    const QuantumState psi0 = coherent_state_vector(init);

    TimeSeries out;
    out.method = Method::exact;
    out.times.assign(times.begin(), times.end());
    out.values.assign(times.size(), 0.0);
    std::vector<double> norm(times.size(), 0.0);
    double good_mass = 0.0;
    double kept_modes = 0.0;

    const int sites = params.n_max + 1;
    for (int p : {1, -1}) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(sites);
        Eigen::VectorXd spin(sites);
        for (int n = 0; n < sites; ++n) {
            const int up = core::chain_spin(p, n);
            spin(n) = up ? 1.0 : -1.0;
            if (!up) x(n) = psi0.at(n, 0).real();
        }
        if (x.squaredNorm() == 0.0) continue;

        const auto eig = tridiag_eigensolve(core::parity_sector_hamiltonian(params, p), true);
        const Eigen::VectorXd proj = eig.vectors.transpose() * x;

        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < sites; ++j) {
            if (std::abs(proj(j)) <= kProjectionFloor) continue;
            keep.push_back(j);
            const double edge = eig.vectors.col(j).tail(std::min(kEdgeSites, sites)).squaredNorm();
            if (edge < kEdgeWeightTol) good_mass += proj(j) * proj(j);
        }
        const auto k = static_cast<Eigen::Index>(keep.size());
        kept_modes += static_cast<double>(k);
        Eigen::MatrixXd vk(sites, k);
        Eigen::VectorXd ck(k);
        Eigen::VectorXd ek(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            vk.col(j) = eig.vectors.col(keep[static_cast<std::size_t>(j)]);
            ck(j) = proj(keep[static_cast<std::size_t>(j)]);
            ek(j) = eig.values[static_cast<std::size_t>(keep[static_cast<std::size_t>(j)])];
        }
        const Eigen::MatrixXd m_sigma = vk.transpose() * spin.asDiagonal() * vk;
        const Eigen::MatrixXd gram = vk.transpose() * vk;
        const auto w = kernels::quadratic_form_series(ck, ek, m_sigma, times, exec);
        const auto nrm = kernels::quadratic_form_series(ck, ek, gram, times, exec);
        for (std::size_t i = 0; i < times.size(); ++i) {
            out.values[i] += w[i];
            norm[i] += nrm[i];
        }
    }

    if (good_mass < 1.0 - kCompletenessTol) {
        std::ostringstream msg;
        msg << "evolve_exact: only " << good_mass << " of the initial state projects onto eigenvectors "
            << "unaffected by the n_max=" << params.n_max << " boundary; raise n_max";
        throw TruncationError(msg.str());
    }
    double drift = 0.0;
    for (double v : norm) drift = std::max(drift, std::abs(v - 1.0));
    out.diagnostics["w0"] = population_difference(psi0);
    out.diagnostics["norm_drift"] = drift;
    out.diagnostics["max_abs_w"] = max_abs(out.values);
    out.diagnostics["completeness"] = good_mass;
    out.diagnostics["kept_modes"] = kept_modes;
    out.diagnostics["n_max"] = params.n_max;
    out.out_of_bounds = out.diagnostics["max_abs_w"] > 1.0 + 1e-9;
    return out;
}

TimeSeries evolve_rwa(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                      Exec exec) {
    params.validate();
    init.validate();
    check_times(times);
    const double detuning = params.epsilon - 1.0;
    const double d2 = detuning * detuning;
    const double f2 = params.f * params.f;
    const double nbar = init.alpha * init.alpha;

    std::vector<double> weight, offset, amplitude, omega;
    const int m_hi = static_cast<int>(std::ceil(nbar + 20.0 * init.alpha + 50.0));
    double mass = 0.0;
    for (int m = 0; m <= m_hi; ++m) {
        const double p = poisson_weight(m, nbar);
        mass += p;
        if (p < 1e-30) continue;
        const double om2 = d2 + 4.0 * f2 * m;
        weight.push_back(p);
        if (om2 == 0.0) {
            offset.push_back(-1.0);
            amplitude.push_back(0.0);
            omega.push_back(0.0);
        } else {
            offset.push_back(-d2 / om2);
            amplitude.push_back(-4.0 * f2 * m / om2);
            omega.push_back(std::sqrt(om2));
        }
    }
    TimeSeries out;
    out.method = Method::rwa;
    out.times.assign(times.begin(), times.end());
    out.values = kernels::cosine_series(weight, offset, amplitude, omega, times, exec);
    out.diagnostics["photon_mass"] = mass;
    out.diagnostics["terms"] = static_cast<double>(weight.size());
    out.diagnostics["max_abs_w"] = max_abs(out.values);
    out.out_of_bounds = out.diagnostics["max_abs_w"] > 1.0 + 1e-9;
    return out;
}

TimeSeries evolve_rwa_fock(const ModelParams& params, int n, std::span<const double> times) {
    params.validate();
    check_times(times);
    if (n < 0) throw DomainError("evolve_rwa_fock: photon number must be non-negative");
    const double detuning = params.epsilon - 1.0;
    const double om2 = detuning * detuning + 4.0 * params.f * params.f * n;
    TimeSeries out;
    out.method = Method::rwa;
    out.times.assign(times.begin(), times.end());
    for (double t : times) {
        out.values.push_back(om2 == 0.0 ? -1.0
                                        : -(detuning * detuning + 4.0 * params.f * params.f * n *
                                                                      std::cos(std::sqrt(om2) * t)) / om2);
    }
    out.diagnostics["omega"] = std::sqrt(om2);
    return out;
}

double EvolutionTerms::d_coefficient(std::size_t i, std::size_t j, const uaa::SMatrixTable& table) const {
    const EvolutionTerm& ti = terms.at(i);
    const EvolutionTerm& tj = terms.at(j);
    if ((ti.n - tj.n) % 2 != 0) return 0.0;
    return parity_sign(tj.n) * ti.c * tj.c * s_sandwich(ti, tj, table);
}

EvolutionTerms uaa_expansion_coefficients(const ModelParams& params, const CoherentInit& init,
                                          int window_half_width, int m_max) {
    params.validate();
    init.validate();
    EvolutionTerms out;
    out.alpha = init.alpha;
    out.f = params.f;
    const double nbar = init.alpha * init.alpha;
    const int w = window_half_width >= 0 ? window_half_width
                                         : static_cast<int>(std::ceil(10.0 * std::sqrt(nbar) + 20.0));
    const int centre = static_cast<int>(std::floor(nbar));
    out.window_lo = std::max(0, centre - w);
    out.window_hi = centre + w;

    const double b = init.alpha + params.f;
    const double b_minus = std::abs(init.alpha - params.f);
    // Both coherent amplitudes entering C (at alpha+f and f-alpha) must sit
    // inside the slots n .. n+1 covered by the window.
    out.boundary_mass = std::max(poisson_tails(b * b, out.window_lo, out.window_hi + 1),
                                 poisson_tails(b_minus * b_minus, out.window_lo, out.window_hi + 1));
    if (out.boundary_mass > kWindowMassTol) {
        std::ostringstream msg;
        msg << "UAA window [" << out.window_lo << ", " << out.window_hi << "] misses " << out.boundary_mass
            << " of the photon distribution; widen the window";
        throw WindowError(msg.str());
    }

    const GammaRange range = gamma_range(b, m_max);
    out.m_lo = range.lo;
    out.m_hi = range.hi;
    out.gamma_tail_bound = range.tail_bound;
    if (range.tail_bound >= kGammaTailTol) {
        std::ostringstream msg;
        msg << "gamma summation up to m_max=" << range.hi << " leaves a tail bound of " << range.tail_bound
            << " (need < 1e-10)";
        throw TruncationError(msg.str());
    }

    const uaa::SMatrixTable table(params.f);
    const bool with_ground = out.window_lo == 0;
    const int levels = out.window_hi - out.window_lo + 1;
    out.terms.resize(static_cast<std::size_t>(2 * levels + (with_ground ? 1 : 0)));
    if (with_ground) out.terms[0] = make_term(uaa::uaa_ground(params));
    const std::size_t base = with_ground ? 1 : 0;
#pragma omp parallel for schedule(dynamic, 4) num_threads(kernels::configured_threads())
    for (int i = 0; i < levels; ++i) {
        const int n = out.window_lo + i;
        out.terms[base + 2 * static_cast<std::size_t>(i)] =
            make_term(uaa::uaa_coefficients(n, uaa::Branch::minus, params));
        out.terms[base + 2 * static_cast<std::size_t>(i) + 1] =
            make_term(uaa::uaa_coefficients(n, uaa::Branch::plus, params));
    }
#pragma omp parallel for schedule(dynamic, 4) num_threads(kernels::configured_threads())
    for (std::size_t i = 0; i < out.terms.size(); ++i) {
        finish_term(out.terms[i], b, range, table);
    }
    for (const auto& t : out.terms) out.weight_sum += t.c * t.c;
    return out;
}

TimeSeries evolve_uaa(const ModelParams& params, const CoherentInit& init, std::span<const double> times,
                      Exec exec) {
    check_times(times);
    const EvolutionTerms terms = uaa_expansion_coefficients(params, init);
    const uaa::SMatrixTable table(params.f);
    const auto count = static_cast<Eigen::Index>(terms.terms.size());

    // Elements S_{k,n} decay beyond |k - n| ~ 4 f sqrt(n); find the offset
    // past which they are below 1e-16 at the top of the window.
    const int top = terms.window_hi + 1;
    int band = static_cast<int>(std::ceil(4.0 * params.f * std::sqrt(static_cast<double>(top))));
    const int band_cap = 2 * (terms.window_hi - terms.window_lo) + 4;
    while (band < band_cap &&
           (std::abs(table(top + band, top)) >= kBandFloor || std::abs(table(top + band + 1, top)) >= kBandFloor)) {
        ++band;
    }
    band += 2;

    Eigen::VectorXd c(count);
    Eigen::VectorXd e(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        c(i) = terms.terms[static_cast<std::size_t>(i)].c;
        e(i) = terms.terms[static_cast<std::size_t>(i)].energy;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(count, count);
#pragma omp parallel for schedule(dynamic, 8) num_threads(kernels::configured_threads())
    for (Eigen::Index j = 0; j < count; ++j) {
        const auto& tj = terms.terms[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < count; ++i) {
            const auto& ti = terms.terms[static_cast<std::size_t>(i)];
            if ((ti.n - tj.n) % 2 != 0 || std::abs(ti.n - tj.n) > band) continue;
            m(i, j) = 2.0 * parity_sign(tj.n) * s_sandwich(ti, tj, table);
        }
    }

    TimeSeries out;
    out.method = Method::uaa;
    out.times.assign(times.begin(), times.end());
    out.values = kernels::quadratic_form_series(c, e, m, times, exec);
    out.diagnostics["w0"] = c.dot(m * c);
    out.diagnostics["weight_sum"] = terms.weight_sum;
    out.diagnostics["boundary_mass"] = terms.boundary_mass;
    out.diagnostics["band"] = band;
    out.diagnostics["window_lo"] = terms.window_lo;
    out.diagnostics["window_hi"] = terms.window_hi;
    out.diagnostics["max_abs_w"] = max_abs(out.values);
    out.out_of_bounds = out.diagnostics["max_abs_w"] > kUaaBound;
    return out;
}

double asymptotic_population(double alpha, double f, double t) {
    return -std::cos(4.0 * f * alpha * std::sin(t));
}

TimeSeries evolve_asymptotic(double alpha, double f, std::span<const double> times) {
    if (!std::isfinite(alpha) || alpha < 0.0 || !std::isfinite(f) || f < 0.0) {
        throw DomainError("evolve_asymptotic: alpha and f must be finite and non-negative");
    }
    check_times(times);
    TimeSeries out;
    out.method = Method::asymptotic;
    out.times.assign(times.begin(), times.end());
    for (double t : times) out.values.push_back(asymptotic_population(alpha, f, t));
    // Stated validity: alpha >> 1 and f alpha >> 1.
    out.diagnostics["alpha"] = alpha;
    out.diagnostics["f_alpha"] = f * alpha;
    return out;
}

double beta_freq(int n, const ModelParams& params) {
    params.validate();
    if (n < 1) throw DomainError("beta_freq: n must be at least 1");
    const double z = 4.0 * params.f * std::sqrt(static_cast<double>(n));
    const double g = params.epsilon * std::exp(-2.0 * params.f * params.f);
    const double a = 1.0 - g * specfun::bessel_j(0, z);
    const double b = g * specfun::bessel_j(1, z);
    return std::sqrt(a * a + b * b);
}

double s_asymptotic(int n, int k, double f) {
    if (n < 50) throw DomainError("s_asymptotic: the Bessel form needs n >= 50");
    if (!std::isfinite(f) || f < 0.0) throw DomainError("s_asymptotic: f must be finite and non-negative");
    const int ak = std::abs(k);
    double j = specfun::bessel_j(ak, 4.0 * f * std::sqrt(static_cast<double>(n)));
    if (k < 0 && (ak % 2)) j = -j;
    return parity_sign(n) * std::exp(-2.0 * f * f) * std::exp(-static_cast<double>(k) * k / (4.0 * n)) * j;
}

double sum_rule_residual(int n, double f, int m_max) {
    if (n < 0) throw DomainError("sum_rule_residual: n must be non-negative");
    if (!std::isfinite(f) || f < 0.0) throw DomainError("sum_rule_residual: f must be finite and non-negative");
    const double need = n + 40.0 * f * f + 20.0 * std::sqrt(static_cast<double>(n)) + 60.0;
    if (m_max < need) {
        throw DomainError("sum_rule_residual: m_max=" + std::to_string(m_max) + " is below the required " +
                          std::to_string(static_cast<int>(std::ceil(need))));
    }
    double sum = 0.0;
    for (int m = 0; m <= m_max; ++m) sum += uaa::s_element(m, n, f);
    return std::abs(sum - parity_sign(n));
}

ReductionTerms reduction_terms(int n, uaa::Branch branch, const ModelParams& params, double alpha) {
    if (n < 0) throw DomainError("reduction_terms: n must be non-negative");
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("reduction_terms: alpha must be non-negative");
    const auto pair = uaa::uaa_coefficients(n, branch, params);
    const double b = alpha + params.f;
    EvolutionTerm t = make_term(pair);
    const uaa::SMatrixTable table(params.f);
    const GammaRange range = gamma_range(b, -1);
    finish_term(t, b, range, table);

    const double w_n = uaa::coherent_amplitude(n, b);
    const double w_n1 = uaa::coherent_amplitude(n + 1, b);
    ReductionTerms r;
    r.n = n;
    r.branch = branch;
    r.gamma_full = t.gamma;
    r.gamma_simplified = parity_sign(n) * (pair.a_coef * w_n - pair.b_coef * w_n1);
    r.c_full = t.c;
    r.c_simplified = std::numbers::sqrt2 * w_n1 * pair.b_coef;
    r.xi_weight = b == 0.0 ? 0.0
                           : parity_sign(n) * std::exp(-alpha * alpha + 2.0 * (n + 1) * std::log(b) -
                                                       specfun::log_factorial(n + 1));
    r.beta = beta_freq(std::max(n, 1), params);
    return r;
}

double d_tilde(int k, int n, uaa::Branch r, uaa::Branch q, int n0, const ModelParams& params) {
    if (k < 0 || n < 0 || n0 < 0) throw DomainError("d_tilde: indices must be non-negative");
    const auto r0 = uaa::uaa_coefficients(n0, r, params);
    const auto q0 = uaa::uaa_coefficients(n0, q, params);
    const auto q1 = uaa::uaa_coefficients(n0 + 1, q, params);
    const double f = params.f;
    return q0.a_coef * r0.a_coef * q0.b_coef * r0.b_coef * uaa::s_element(n, k, f) +
           q0.a_coef * r0.b_coef * r0.b_coef * q1.b_coef * uaa::s_element(n + 1, k, f) +
           r0.a_coef * q0.b_coef * r0.b_coef * q0.b_coef * uaa::s_element(n, k + 1, f) +
           r0.b_coef * r0.b_coef * q1.a_coef * q1.b_coef * uaa::s_element(n + 1, k + 1, f);
}

}  // namespace rabilab::dynamics
