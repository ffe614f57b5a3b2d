#pragma once

// Uniformly available approximation (UAA): closed-form eigenpairs of the
// Rabi model built from two neighbouring displaced Fock states
//   |psi_n^r> = {A|n,f> + B|n+1,f>} chi_+ + (-1)^n S{A|n,f> + B|n+1,f>} chi_-
// with |n,f> = D(-f)|n>, chi_+- the sigma_1 eigenstates and S = exp(i pi a^dag a).

#include "rabilab/rabi.hpp"

#include <cstdint>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace rabilab::uaa {

using core::ModelParams;
using core::QuantumState;

enum class Branch { plus = 1, minus = -1 };

inline int sign(Branch b) { return static_cast<int>(b); }
inline Branch branch_from_sign(int s) { return s > 0 ? Branch::plus : Branch::minus; }

// <j| D(beta) |k> for real beta, evaluated in log space.
double displaced_overlap(int j, int k, double beta);

// <n|x> for the coherent state |x> = D(x)|0>, real x.
double coherent_amplitude(int n, double x);

// Parity operator in the displaced basis:
//   S_nm(u) = (-1)^m e^{-2u^2} sqrt(m!/n!) (2u)^{n-m} L_m^{n-m}(4u^2),  n >= m,
// and S_nm = S_mn otherwise.
double s_element(int n, int m, double u);

// Memo of s_element for one displacement u. Safe for concurrent use:
// lookups take a shared lock, inserts an exclusive one and are idempotent.
class SMatrixTable {
public:
    explicit SMatrixTable(double u);

    double u() const { return u_; }
    double operator()(int n, int m) const;
    std::size_t size() const;

private:
    double u_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, double> cache_;
};

struct UaaEigenpair {
    int n = 0;  // -1 marks the ground level (only the |0,f> slot, parity -1)
    Branch branch = Branch::minus;
    double energy = 0.0;
    double lambda = 0.0;  // +inf when the pair is purely the |n+1,f> slot
    double a_coef = 0.0;
    double b_coef = 0.0;
    bool degenerate = false;  // S_{n+1,n} vanished; diagonal limit used for lambda

    int parity() const { return (n % 2 == 0) ? 1 : -1; }
};

double uaa_energy(int n, Branch branch, const ModelParams& params);
UaaEigenpair uaa_coefficients(int n, Branch branch, const ModelParams& params);
UaaEigenpair uaa_ground(const ModelParams& params);

// Materialize the pair in the Fock x spin basis of params.n_max.
// Throws TruncationError when more than 1e-8 of the norm falls outside.
QuantumState uaa_state_vector(const UaaEigenpair& pair, const ModelParams& params);

// || (H - E) |psi_uaa> || in the truncated basis.
double uaa_residual(const UaaEigenpair& pair, const ModelParams& params);

// The lowest `count` UAA levels of combined parity p, ascending.
std::vector<UaaEigenpair> uaa_sector_levels(const ModelParams& params, int p, int count);

}  // namespace rabilab::uaa
