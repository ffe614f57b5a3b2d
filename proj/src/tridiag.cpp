#include "rabilab/tridiag.hpp"

#include "rabilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rabilab {

namespace {
constexpr int kIterationCap = 50;
}

double SymTridiag::norm_inf() const {
    double best = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(off[i - 1]);
        if (i + 1 < n) row += std::abs(off[i]);
        best = std::max(best, row);
    }
    return best;
}

Eigen::MatrixXd SymTridiag::to_dense() const {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            a(i, i + 1) = off[static_cast<std::size_t>(i)];
            a(i + 1, i) = off[static_cast<std::size_t>(i)];
        }
    }
    return a;
}

TridiagEigen tridiag_eigensolve(const SymTridiag& matrix, bool want_vectors) {
    const int n = static_cast<int>(matrix.diag.size());
    if (n < 1) {
        throw DomainError("tridiag_eigensolve: empty matrix");
    }
    if (matrix.off.size() + 1 != matrix.diag.size()) {
        throw DomainError("tridiag_eigensolve: off-diagonal must have size n-1");
    }

    std::vector<double> d = matrix.diag;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(matrix.off.begin(), matrix.off.end(), e.begin());

    Eigen::MatrixXd z;
    if (want_vectors) {
        z = Eigen::MatrixXd::Identity(n, n);
    }

    TridiagEigen out;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > kIterationCap) {
                throw NumericalError("tridiag_eigensolve: no convergence for eigenvalue " +
                                     std::to_string(l) + " of " + std::to_string(n) +
                                     " after " + std::to_string(kIterationCap) +
                                     " sweeps (residual off-diagonal " +
                                     std::to_string(e[l]) + ")");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (want_vectors) {
                    auto col_i = z.col(i);
                    auto col_i1 = z.col(i + 1);
                    for (int k = 0; k < n; ++k) {
                        f = col_i1(k);
                        col_i1(k) = s * col_i(k) + c * f;
                        col_i(k) = c * col_i(k) - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
        out.max_iterations = std::max(out.max_iterations, iter);
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    out.values.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        out.values[static_cast<std::size_t>(j)] = d[order[static_cast<std::size_t>(j)]];
    }
    if (want_vectors) {
        out.vectors.resize(n, n);
        for (int j = 0; j < n; ++j) {
            out.vectors.col(j) = z.col(order[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

}  // namespace rabilab
