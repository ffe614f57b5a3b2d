#pragma once

// Single-mode quantum Rabi model in units of the mode frequency:
//   H = (eps/2) sigma_3 + a^dag a + f sigma_1 (a + a^dag)
// Product basis index is 2n + s with s = 0 for spin down, s = 1 for spin up.

#include "rabilab/tridiag.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace rabilab::core {

using Complex = std::complex<double>;

struct ModelParams {
    double epsilon = 1.0;
    double f = 0.0;
    int n_max = 40;

    // Throws DomainError naming the bad field. The sector builders accept any
    // n_max >= 1; solvers and engines need at least 4.
    void validate(int min_n_max = 4) const;
};

// ceil(nbar + 12 sqrt(nbar) + 12 f^2 + 40)
int default_n_max(double nbar, double f);

inline Eigen::Index basis_index(int n, int spin_up) {
    return 2 * static_cast<Eigen::Index>(n) + spin_up;
}

// Spin (1 = up) carried by site n of the parity-p chain: sigma_3 = p (-1)^n.
inline int chain_spin(int p, int n) {
    return (p * ((n % 2) ? -1 : 1)) > 0 ? 1 : 0;
}

struct QuantumState {
    int n_max = 0;
    Eigen::VectorXcd amplitudes;  // length 2 (n_max + 1)

    QuantumState() = default;
    explicit QuantumState(int n_max_);

    Complex& at(int n, int spin_up) { return amplitudes(basis_index(n, spin_up)); }
    Complex at(int n, int spin_up) const { return amplitudes(basis_index(n, spin_up)); }
    double norm() const { return amplitudes.norm(); }
    void normalize();
};

struct SpectrumLevel {
    int n = 0;       // index within the parity chain (or doublet index for RWA)
    int parity = 1;  // combined parity sigma_3 exp(i pi a^dag a)
    int branch = 0;  // +1 / -1 for doublet-labelled methods, 0 for exact
    double energy = 0.0;
    std::optional<QuantumState> vector;
};

struct SpectrumResult {
    std::string method;
    int n_max = 0;
    std::vector<SpectrumLevel> levels;  // sorted by (energy, parity) with +1 first on ties
};

// Tridiagonal block of H in the combined-parity sector p = +1 or -1.
SymTridiag parity_sector_hamiltonian(const ModelParams& params, int p);

// Embed a chain eigenvector of sector p into the product basis.
QuantumState chain_to_state(const Eigen::VectorXd& chain, int p, int n_max);

// Lowest `count` levels of each parity sector. Requires count <= n_max / 2;
// when check_convergence is set the levels are re-solved at 2 n_max and must
// move by less than 1e-8 (TruncationError otherwise).
SpectrumResult exact_spectrum(const ModelParams& params, int count, bool with_vectors = false,
                              bool check_convergence = true);

// Jaynes-Cummings spectrum: ground level -eps/2 (n = -1) and doublets
// n + 1/2 +- sqrt(Delta^2/4 + f^2 (n+1)) for n = 0 .. count-1.
SpectrumResult rwa_spectrum(const ModelParams& params, int count, bool with_vectors = false);

void sort_levels(std::vector<SpectrumLevel>& levels);

Eigen::MatrixXd dense_hamiltonian(const ModelParams& params);
Eigen::VectorXd dense_parity(int n_max);  // diagonal of P
double parity_check(const ModelParams& params);

// H |psi> using the sparse structure.
QuantumState apply_hamiltonian(const ModelParams& params, const QuantumState& state);

}  // namespace rabilab::core
