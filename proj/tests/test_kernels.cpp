#include "doctest.h"

#include "rabilab/errors.hpp"
#include "rabilab/kernels.hpp"

#include <cmath>
#include <random>

using namespace rabilab;
using namespace rabilab::kernels;

namespace {

struct Problem {
    Eigen::VectorXd c, e;
    Eigen::MatrixXd m;
};

Problem random_problem(int k, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Problem p{Eigen::VectorXd(k), Eigen::VectorXd(k), Eigen::MatrixXd(k, k)};
    for (int i = 0; i < k; ++i) {
        p.c(i) = u(rng);
        p.e(i) = 10.0 * u(rng);
        for (int j = 0; j <= i; ++j) p.m(i, j) = p.m(j, i) = u(rng);
    }
    return p;
}

}  // namespace

TEST_CASE("quadratic form at t = 0 is c.M.c") {
    const auto p = random_problem(17, 3);
    const std::vector<double> t{0.0};
    const double want = p.c.dot(p.m * p.c);
    CHECK(quadratic_form_series(p.c, p.e, p.m, t, Exec::serial)[0] == doctest::Approx(want).epsilon(1e-13));
    CHECK(quadratic_form_series(p.c, p.e, p.m, t, Exec::parallel)[0] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("serial and parallel quadratic forms agree") {
    const auto p = random_problem(60, 11);
    std::vector<double> t(257);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.37 * static_cast<double>(i);
    const auto a = quadratic_form_series(p.c, p.e, p.m, t, Exec::serial);
    const auto b = quadratic_form_series(p.c, p.e, p.m, t, Exec::parallel);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("two-level quadratic form is a single cosine") {
    Eigen::VectorXd c(2), e(2);
    c << 0.6, 0.8;
    e << -1.0, 2.0;
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.5, 0.5, -1.0;
    const std::vector<double> t{0.0, 0.4, 1.3, 7.0};
    const auto w = quadratic_form_series(c, e, m, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double want = 0.36 - 0.64 + 2.0 * 0.48 * 0.5 * std::cos(3.0 * t[i]);
        CHECK(w[i] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("cosine series matches a direct sum in both modes") {
    const std::vector<double> w{0.2, 0.5, 0.3}, off{-1.0, 0.1, 0.0}, amp{0.0, -0.9, 1.0}, om{0.0, 1.5, 2.5};
    std::vector<double> t(50);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.1 * static_cast<double>(i);
    const auto a = cosine_series(w, off, amp, om, t, Exec::serial);
    const auto b = cosine_series(w, off, amp, om, t, Exec::parallel);
    for (std::size_t i = 0; i < t.size(); ++i) {
        double want = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) want += w[j] * (off[j] + amp[j] * std::cos(om[j] * t[i]));
        CHECK(a[i] == doctest::Approx(want).epsilon(1e-14));
        CHECK(b[i] == a[i]);
    }
}

TEST_CASE("shape mismatches are rejected") {
    Eigen::VectorXd c(3), e(2);
    Eigen::MatrixXd m(3, 3);
    const std::vector<double> t{0.0};
    CHECK_THROWS_AS(quadratic_form_series(c, e, m, t), DomainError);
    CHECK_THROWS_AS(cosine_series({1.0}, {0.0, 1.0}, {1.0}, {1.0}, t), DomainError);
}

TEST_CASE("thread count honours RABI_LAB_THREADS") {
    setenv("RABI_LAB_THREADS", "3", 1);
    CHECK(configured_threads() == 3);
    setenv("RABI_LAB_THREADS", "junk", 1);
    CHECK(configured_threads() >= 1);
    unsetenv("RABI_LAB_THREADS");
}
