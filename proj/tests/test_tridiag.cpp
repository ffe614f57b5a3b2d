#include "doctest.h"

#include "rabilab/errors.hpp"
#include "rabilab/tridiag.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace rabilab;

namespace {

double max_residual(const SymTridiag& t, const TridiagEigen& eig) {
    const Eigen::MatrixXd a = t.to_dense();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const Eigen::VectorXd v = eig.vectors.col(j);
        worst = std::max(worst, (a * v - eig.values[static_cast<std::size_t>(j)] * v).norm());
    }
    return worst;
}

SymTridiag random_tridiag(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    SymTridiag t;
    for (int i = 0; i < n; ++i) t.diag.push_back(dist(rng));
    for (int i = 0; i + 1 < n; ++i) t.off.push_back(dist(rng));
    return t;
}

}  // namespace

TEST_CASE("diagonal matrix gives unit eigenvectors") {
    SymTridiag t{{1.0, 2.0, 3.0}, {0.0, 0.0}};
    const auto eig = tridiag_eigensolve(t);
    CHECK(eig.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(eig.vectors.isApprox(Eigen::MatrixXd::Identity(3, 3)));
}

TEST_CASE("2x2 off-diagonal") {
    SymTridiag t{{0.0, 0.0}, {1.0}};
    const auto eig = tridiag_eigensolve(t);
    CHECK(eig.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(max_residual(t, eig) < 1e-14);
}

TEST_CASE("single element") {
    SymTridiag t{{4.5}, {}};
    const auto eig = tridiag_eigensolve(t);
    CHECK(eig.values == std::vector<double>{4.5});
    CHECK(eig.vectors(0, 0) == 1.0);
}

TEST_CASE("random matrices: residuals, orthonormality, ordering") {
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const auto t = random_tridiag(50, seed);
        const auto eig = tridiag_eigensolve(t);
        CHECK(max_residual(t, eig) <= 1e-9 * t.norm_inf());
        const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
        CHECK((gram - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-12);
        for (std::size_t i = 1; i < eig.values.size(); ++i) {
            CHECK(eig.values[i - 1] <= eig.values[i]);
        }
    }
}

TEST_CASE("eigenvalues agree with a dense solver") {
    const auto t = random_tridiag(80, 99);
    const auto eig = tridiag_eigensolve(t, false);
    CHECK(eig.vectors.size() == 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(t.to_dense(), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < 80; ++i) {
        CHECK(std::abs(eig.values[static_cast<std::size_t>(i)] - dense.eigenvalues()(i)) < 1e-11);
    }
}

TEST_CASE("Rabi-like chain of a thousand sites") {
    SymTridiag t;
    const int n = 1000;
    for (int i = 0; i < n; ++i) t.diag.push_back(i + 0.5 * ((i % 2) ? -1.0 : 1.0));
    for (int i = 0; i + 1 < n; ++i) t.off.push_back(0.1 * std::sqrt(i + 1.0));
    const auto eig = tridiag_eigensolve(t);
    CHECK(max_residual(t, eig) <= 1e-9 * t.norm_inf());
    CHECK(eig.max_iterations <= 50);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(tridiag_eigensolve(SymTridiag{}), DomainError);
    CHECK_THROWS_AS(tridiag_eigensolve(SymTridiag{{1.0, 2.0}, {}}), DomainError);
}
