#include "rabilab/rabi.hpp"

#include "rabilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rabilab::core {

namespace {

constexpr double kConvergenceTol = 1e-8;

double sign_of_site(int n) { return (n % 2) ? -1.0 : 1.0; }

std::vector<double> lowest_sector_values(const ModelParams& params, int p, int count) {
    auto eig = tridiag_eigensolve(parity_sector_hamiltonian(params, p), false);
    eig.values.resize(static_cast<std::size_t>(count));
    return eig.values;
}

}  // namespace

void ModelParams::validate(int min_n_max) const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw DomainError("epsilon must be finite and non-negative");
    }
    if (!std::isfinite(f) || f < 0.0) {
        throw DomainError("f must be finite and non-negative");
    }
    if (n_max < min_n_max) {
        throw DomainError("n_max must be at least " + std::to_string(min_n_max) + ", got " +
                          std::to_string(n_max));
    }
}

int default_n_max(double nbar, double f) {
    if (!(nbar >= 0.0) || !std::isfinite(f)) {
        throw DomainError("default_n_max: nbar must be non-negative and f finite");
    }
    return static_cast<int>(std::ceil(nbar + 12.0 * std::sqrt(nbar) + 12.0 * f * f + 40.0));
}

QuantumState::QuantumState(int n_max_)
    : n_max(n_max_), amplitudes(Eigen::VectorXcd::Zero(2 * (static_cast<Eigen::Index>(n_max_) + 1))) {}

void QuantumState::normalize() {
    const double nrm = amplitudes.norm();
    if (nrm == 0.0) {
        throw NumericalError("cannot normalize the zero state");
    }
    amplitudes /= nrm;
}

SymTridiag parity_sector_hamiltonian(const ModelParams& params, int p) {
    params.validate(1);
    if (p != 1 && p != -1) {
        throw DomainError("parity must be +1 or -1");
    }
    SymTridiag h;
    h.diag.resize(static_cast<std::size_t>(params.n_max) + 1);
    h.off.resize(static_cast<std::size_t>(params.n_max));
    for (int n = 0; n <= params.n_max; ++n) {
        h.diag[static_cast<std::size_t>(n)] = n + 0.5 * params.epsilon * p * sign_of_site(n);
        if (n < params.n_max) {
            h.off[static_cast<std::size_t>(n)] = params.f * std::sqrt(n + 1.0);
        }
    }
    return h;
}

QuantumState chain_to_state(const Eigen::VectorXd& chain, int p, int n_max) {
    if (chain.size() != n_max + 1) {
        throw DomainError("chain_to_state: vector length must be n_max + 1");
    }
    QuantumState s(n_max);
    for (int n = 0; n <= n_max; ++n) {
        s.at(n, chain_spin(p, n)) = chain(n);
    }
    return s;
}

void sort_levels(std::vector<SpectrumLevel>& levels) {
    std::stable_sort(levels.begin(), levels.end(), [](const SpectrumLevel& a, const SpectrumLevel& b) {
        // Energies equal to rounding are treated as degenerate so the parity
        // tie-break is deterministic.
        const double scale = std::max({1.0, std::abs(a.energy), std::abs(b.energy)});
        if (std::abs(a.energy - b.energy) > 1e-12 * scale) {
            return a.energy < b.energy;
        }
        return a.parity > b.parity;
    });
}

SpectrumResult exact_spectrum(const ModelParams& params, int count, bool with_vectors,
                              bool check_convergence) {
    params.validate();
    if (count < 1) {
        throw DomainError("exact_spectrum: count must be positive");
    }
    if (count > params.n_max / 2) {
        throw TruncationError("exact_spectrum: " + std::to_string(count) +
                              " levels per sector exceed n_max/2 = " +
                              std::to_string(params.n_max / 2) + "; raise n_max");
    }
    SpectrumResult out;
    out.method = "exact";
    out.n_max = params.n_max;

    ModelParams doubled = params;
    doubled.n_max = 2 * params.n_max;

    for (int p : {1, -1}) {
        const auto eig = tridiag_eigensolve(parity_sector_hamiltonian(params, p), with_vectors);
        std::vector<double> reference;
        if (check_convergence) {
            reference = lowest_sector_values(doubled, p, count);
        }
        for (int j = 0; j < count; ++j) {
            const double e = eig.values[static_cast<std::size_t>(j)];
            if (check_convergence) {
                const double drift = std::abs(e - reference[static_cast<std::size_t>(j)]);
                if (drift >= kConvergenceTol) {
                    std::ostringstream msg;
                    msg << "exact_spectrum: level " << j << " of parity " << p << " moves by " << drift
                        << " when n_max doubles from " << params.n_max << "; raise n_max";
                    throw TruncationError(msg.str());
                }
            }
            SpectrumLevel level;
            level.n = j;
            level.parity = p;
            level.energy = e;
            if (with_vectors) {
                level.vector = chain_to_state(eig.vectors.col(j), p, params.n_max);
            }
            out.levels.push_back(std::move(level));
        }
    }
    sort_levels(out.levels);
    return out;
}

SpectrumResult rwa_spectrum(const ModelParams& params, int count, bool with_vectors) {
    params.validate();
    if (count < 1) {
        throw DomainError("rwa_spectrum: count must be positive");
    }
    SpectrumResult out;
    out.method = "rwa";
    out.n_max = params.n_max;

    const double eps = params.epsilon;
    const double detuning = eps - 1.0;

    SpectrumLevel ground;
    ground.n = -1;
    ground.parity = -1;
    ground.branch = -1;
    ground.energy = -0.5 * eps;
    if (with_vectors) {
        QuantumState s(params.n_max);
        s.at(0, 0) = 1.0;
        ground.vector = std::move(s);
    }
    out.levels.push_back(std::move(ground));

    // Doublet n lives in span{|n, up>, |n+1, down>}.
    const int doublets = std::min(count, params.n_max);
    for (int n = 0; n < doublets; ++n) {
        const double g = params.f * std::sqrt(n + 1.0);
        const double half_split = std::sqrt(0.25 * detuning * detuning + g * g);
        for (int branch : {1, -1}) {
            SpectrumLevel level;
            level.n = n;
            level.parity = (n % 2) ? -1 : 1;
            level.branch = branch;
            level.energy = n + 0.5 + branch * half_split;
            if (with_vectors) {
                // Eigenvector of [[n + eps/2, g], [g, n + 1 - eps/2]].
                const double a11 = n + 0.5 * eps - level.energy;
                double cu = 0.0;
                double cd = 0.0;
                if (g == 0.0) {
                    // Uncoupled: pick the bare state carrying this energy.
                    const bool up_is_this = std::abs(a11) <= std::abs(n + 1 - 0.5 * eps - level.energy);
                    cu = up_is_this ? 1.0 : 0.0;
                    cd = up_is_this ? 0.0 : 1.0;
                } else {
                    cu = g;
                    cd = -a11;
                    const double nrm = std::hypot(cu, cd);
                    cu /= nrm;
                    cd /= nrm;
                }
                QuantumState s(params.n_max);
                s.at(n, 1) = cu;
                s.at(n + 1, 0) = cd;
                level.vector = std::move(s);
            }
            out.levels.push_back(std::move(level));
        }
    }
    sort_levels(out.levels);
    return out;
}

Eigen::MatrixXd dense_hamiltonian(const ModelParams& params) {
    params.validate();
    const Eigen::Index dim = 2 * (static_cast<Eigen::Index>(params.n_max) + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n <= params.n_max; ++n) {
        for (int s = 0; s < 2; ++s) {
            h(basis_index(n, s), basis_index(n, s)) = n + 0.5 * params.epsilon * (s ? 1.0 : -1.0);
            if (n < params.n_max) {
                const double g = params.f * std::sqrt(n + 1.0);
                h(basis_index(n + 1, 1 - s), basis_index(n, s)) = g;
                h(basis_index(n, s), basis_index(n + 1, 1 - s)) = g;
            }
        }
    }
    return h;
}

Eigen::VectorXd dense_parity(int n_max) {
    Eigen::VectorXd p(2 * (static_cast<Eigen::Index>(n_max) + 1));
    for (int n = 0; n <= n_max; ++n) {
        p(basis_index(n, 0)) = -sign_of_site(n);
        p(basis_index(n, 1)) = sign_of_site(n);
    }
    return p;
}

double parity_check(const ModelParams& params) {
    const Eigen::MatrixXd h = dense_hamiltonian(params);
    const Eigen::VectorXd p = dense_parity(params.n_max);
    const Eigen::MatrixXd comm = h * p.asDiagonal() - p.asDiagonal() * h;
    return comm.norm();
}

QuantumState apply_hamiltonian(const ModelParams& params, const QuantumState& state) {
    params.validate();
    if (state.n_max != params.n_max) {
        throw DomainError("apply_hamiltonian: state and params disagree on n_max");
    }
    QuantumState out(params.n_max);
    for (int n = 0; n <= params.n_max; ++n) {
        for (int s = 0; s < 2; ++s) {
            Complex acc = (n + 0.5 * params.epsilon * (s ? 1.0 : -1.0)) * state.at(n, s);
            if (n > 0) acc += params.f * std::sqrt(static_cast<double>(n)) * state.at(n - 1, 1 - s);
            if (n < params.n_max) acc += params.f * std::sqrt(n + 1.0) * state.at(n + 1, 1 - s);
            out.at(n, s) = acc;
        }
    }
    return out;
}

}  // namespace rabilab::core
