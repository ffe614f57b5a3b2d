#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rabilab {

// Real symmetric tridiagonal matrix: diag has size n, off has size n-1 and
// off[i] couples rows i and i+1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
    double norm_inf() const;
    Eigen::MatrixXd to_dense() const;
};

struct TridiagEigen {
    std::vector<double> values;  // ascending
    Eigen::MatrixXd vectors;     // column j pairs with values[j]; empty if not requested
    int max_iterations = 0;      // largest QL sweep count over all eigenvalues
};

// Implicit-shift QL with Wilkinson-type shifts (EISPACK tql2 lineage).
// Throws NumericalError when one eigenvalue needs more than 50 sweeps.
TridiagEigen tridiag_eigensolve(const SymTridiag& matrix, bool want_vectors = true);

}  // namespace rabilab
