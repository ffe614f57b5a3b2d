#include "rabilab/uaa.hpp"

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

namespace rabilab::uaa {

namespace {

constexpr double kLeakageTol = 1e-8;
constexpr double kDegenerateCoupling = 1e-300;

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// sqrt(lo!/hi!) x^d e^{-x^2/2} L_lo^d(x^2) with d = hi - lo >= 0, x > 0, in log space.
double laguerre_overlap(int hi, int lo, double x, double gauss_exponent, double lag_arg) {
    const int d = hi - lo;
    const auto lag = specfun::laguerre_scaled(lo, d, lag_arg);
    if (lag.mantissa == 0.0) return 0.0;
    const double log_mag = 0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(hi)) +
                           d * std::log(x) - gauss_exponent + lag.log_scale +
                           std::log(std::abs(lag.mantissa));
    return std::copysign(std::exp(log_mag), lag.mantissa);
}

}  // namespace

double displaced_overlap(int j, int k, double beta) {
    if (j < 0 || k < 0) {
        throw DomainError("displaced_overlap: Fock indices must be non-negative");
    }
    if (!std::isfinite(beta)) {
        throw DomainError("displaced_overlap: displacement must be finite");
    }
    if (beta == 0.0) {
        return j == k ? 1.0 : 0.0;
    }
    const double x = std::abs(beta);
    const double b2 = beta * beta;
    // <j|D(beta)|k> = sqrt(k!/j!) beta^{j-k} e^{-beta^2/2} L_k^{j-k}(beta^2) for j >= k;
    // for j < k swap roles with beta -> -beta.
    const int hi = std::max(j, k);
    const int lo = std::min(j, k);
    double v = laguerre_overlap(hi, lo, x, 0.5 * b2, b2);
    const bool negative_base = (j >= k) ? (beta < 0.0) : (beta > 0.0);
    if (negative_base && ((hi - lo) % 2 == 1)) v = -v;
    return v;
}

double coherent_amplitude(int n, double x) { return displaced_overlap(n, 0, x); }

double s_element(int n, int m, double u) {
    if (n < 0 || m < 0) {
        throw DomainError("s_element: indices must be non-negative");
    }
    if (!std::isfinite(u) || u < 0.0) {
        throw DomainError("s_element: u must be finite and non-negative");
    }
    if (n < m) std::swap(n, m);
    if (u == 0.0) {
        return n == m ? parity_sign(n) : 0.0;
    }
    const double v = laguerre_overlap(n, m, 2.0 * u, 2.0 * u * u, 4.0 * u * u);
    return parity_sign(m) * v;
}

SMatrixTable::SMatrixTable(double u) : u_(u) {
    if (!std::isfinite(u) || u < 0.0) {
        throw DomainError("SMatrixTable: u must be finite and non-negative");
    }
}

double SMatrixTable::operator()(int n, int m) const {
    if (n < m) std::swap(n, m);
    if (m < 0) {
        throw DomainError("SMatrixTable: indices must be non-negative");
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint32_t>(m);
    {
        std::shared_lock lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const double v = s_element(n, m, u_);
    std::unique_lock lock(mutex_);
    cache_.emplace(key, v);
    return v;
}

std::size_t SMatrixTable::size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

double uaa_energy(int n, Branch branch, const ModelParams& params) {
    params.validate();
    if (n < 0) {
        throw DomainError("uaa_energy: n must be non-negative (use uaa_ground for the ground level)");
    }
    const double f = params.f;
    const double eps = params.epsilon;
    const double s = parity_sign(n);
    const double s_nn = s_element(n, n, f);
    const double s_11 = s_element(n + 1, n + 1, f);
    const double s_10 = s_element(n + 1, n, f);
    const double mean = n + 0.5 - f * f + 0.25 * eps * s * (s_11 + s_nn);
    const double gap = 1.0 + 0.5 * eps * s * (s_11 - s_nn);
    return mean + 0.5 * sign(branch) * std::sqrt(gap * gap + eps * eps * s_10 * s_10);
}

UaaEigenpair uaa_coefficients(int n, Branch branch, const ModelParams& params) {
    params.validate();
    if (n < 0) {
        throw DomainError("uaa_coefficients: n must be non-negative");
    }
    const double f = params.f;
    const double half_eps = 0.5 * params.epsilon;
    const double s = parity_sign(n);
    const double s_10 = s_element(n + 1, n, f);
    const double h11 = n - f * f + half_eps * s * s_element(n, n, f);
    const double h22 = n + 1 - f * f + half_eps * s * s_element(n + 1, n + 1, f);
    const double h12 = half_eps * s * s_10;

    UaaEigenpair out;
    out.n = n;
    out.branch = branch;
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

    if (std::abs(s_10) < kDegenerateCoupling || h12 == 0.0) {
        // Uncoupled slots: the minus branch takes the lower diagonal entry
        // (|n,f> on ties), the plus branch the other one.
        out.degenerate = true;
        const bool lower_is_n = h11 <= h22;
        const bool take_n = (branch == Branch::minus) ? lower_is_n : !lower_is_n;
        if (take_n) {
            out.energy = h11;
            out.lambda = 0.0;
            out.a_coef = inv_sqrt2;
            out.b_coef = 0.0;
        } else {
            out.energy = h22;
            out.lambda = std::numeric_limits<double>::infinity();
            out.a_coef = 0.0;
            out.b_coef = -inv_sqrt2;
        }
        return out;
    }

    out.energy = uaa_energy(n, branch, params);
    out.lambda = (h11 - out.energy) / h12;
    out.a_coef = inv_sqrt2 / std::sqrt(1.0 + out.lambda * out.lambda);
    out.b_coef = -out.lambda * out.a_coef;
    return out;
}

UaaEigenpair uaa_ground(const ModelParams& params) {
    params.validate();
    const double f = params.f;
    UaaEigenpair out;
    out.n = -1;
    out.branch = Branch::minus;
    out.energy = -f * f - 0.5 * params.epsilon * std::exp(-2.0 * f * f);
    out.lambda = std::numeric_limits<double>::infinity();
    out.a_coef = 0.0;
    out.b_coef = -1.0 / std::numbers::sqrt2;
    return out;
}

QuantumState uaa_state_vector(const UaaEigenpair& pair, const ModelParams& params) {
    params.validate();
    if (pair.n < -1) {
        throw DomainError("uaa_state_vector: level index below the ground level");
    }
    const double beta = -params.f;
    std::vector<double> phi(static_cast<std::size_t>(params.n_max) + 1, 0.0);
    double kept = 0.0;
    for (int j = 0; j <= params.n_max; ++j) {
        double v = 0.0;
        if (pair.n >= 0 && pair.a_coef != 0.0) v += pair.a_coef * displaced_overlap(j, pair.n, beta);
        if (pair.b_coef != 0.0) v += pair.b_coef * displaced_overlap(j, pair.n + 1, beta);
        phi[static_cast<std::size_t>(j)] = v;
        kept += v * v;
    }
    // The displaced states are orthonormal, so ||phi||^2 = A^2 + B^2 = 1/2 untruncated.
    const double full = pair.a_coef * pair.a_coef + pair.b_coef * pair.b_coef;
    const double leakage = 1.0 - kept / full;
    if (leakage > kLeakageTol) {
        throw TruncationError("uaa_state_vector: level n=" + std::to_string(pair.n) + " leaks " +
                              std::to_string(leakage) + " of its norm beyond n_max=" +
                              std::to_string(params.n_max));
    }
    QuantumState out(params.n_max);
    for (int j = 0; j <= params.n_max; ++j) {
        const bool up = parity_sign(pair.n + j) > 0;
        out.at(j, up ? 1 : 0) = std::numbers::sqrt2 * phi[static_cast<std::size_t>(j)];
    }
    out.normalize();
    return out;
}

double uaa_residual(const UaaEigenpair& pair, const ModelParams& params) {
    const QuantumState psi = uaa_state_vector(pair, params);
    const QuantumState h_psi = core::apply_hamiltonian(params, psi);
    return (h_psi.amplitudes - pair.energy * psi.amplitudes).norm();
}

std::vector<UaaEigenpair> uaa_sector_levels(const ModelParams& params, int p, int count) {
    params.validate();
    if (p != 1 && p != -1) {
        throw DomainError("uaa_sector_levels: parity must be +1 or -1");
    }
    if (count < 1) {
        throw DomainError("uaa_sector_levels: count must be positive");
    }
    std::vector<UaaEigenpair> levels;
    if (p == -1) levels.push_back(uaa_ground(params));
    const int n_hi = 2 * count + 6;
    for (int n = (p == 1) ? 0 : 1; n <= n_hi; n += 2) {
        levels.push_back(uaa_coefficients(n, Branch::minus, params));
        levels.push_back(uaa_coefficients(n, Branch::plus, params));
    }
    std::stable_sort(levels.begin(), levels.end(),
                     [](const UaaEigenpair& a, const UaaEigenpair& b) { return a.energy < b.energy; });
    levels.resize(static_cast<std::size_t>(count));
    return levels;
}

}  // namespace rabilab::uaa
