#include "doctest.h"

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

#include <cmath>
#include <random>

using namespace rabilab;
using namespace rabilab::specfun;

// Reference values below were produced with 40-digit mpmath.

TEST_CASE("erf_phi known values") {
    CHECK(erf_phi(0.0) == 0.0);
    CHECK(erf_phi(6.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(erf_phi(1.0) - 0.8427007929497148693) < 1e-13);
    CHECK(std::abs(erf_phi(0.5) - std::erf(0.5)) < 1e-14);
    for (double z = 0.05; z < 8.0; z += 0.173) {
        CHECK(std::abs(erf_phi(z) - std::erf(z)) < 1e-13);
    }
}

TEST_CASE("erf_phi is monotone and bounded on [0, 12]") {
    double prev = 0.0;
    for (double z = 0.0; z <= 12.0; z += 0.01) {
        const double v = erf_phi(z);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("erf_phi rejects bad input") {
    CHECK_THROWS_AS(erf_phi(-0.1), DomainError);
    CHECK_THROWS_AS(erf_phi(NAN), DomainError);
    CHECK_THROWS_AS(erf_phi(INFINITY), DomainError);
}

TEST_CASE("laguerre closed forms") {
    CHECK(laguerre(0, 2, 7.3) == 1.0);
    CHECK(laguerre(1, 0, 2.0) == -1.0);
    for (int a = -2; a <= 5; ++a) {
        for (double x : {-3.0, 0.0, 0.7, 4.25}) {
            if (a >= -1) {
                CHECK(laguerre(1, a, x) == doctest::Approx(1.0 + a - x).epsilon(1e-15));
            }
            if (a >= -2) {
                const double l2 = 0.5 * (x * x - 2.0 * (a + 2) * x + (a + 1) * (a + 2));
                CHECK(laguerre(2, a, x) == doctest::Approx(l2).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("laguerre reference values") {
    CHECK(laguerre(3, 2, 1.5) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(laguerre(10, 3, 7.5) == doctest::Approx(13.455643245152064732).epsilon(1e-12));
    CHECK(laguerre(25, 0, 30.0) == doctest::Approx(57237.202855542936).epsilon(1e-10));
    CHECK(laguerre(40, 5, 12.25) == doctest::Approx(947.85384840880848).epsilon(1e-10));
}

TEST_CASE("laguerre at zero is a binomial coefficient") {
    for (int m = 0; m <= 20; ++m) {
        for (int a = 0; a <= 6; ++a) {
            const double binom = std::round(std::exp(std::lgamma(m + a + 1.0) - std::lgamma(m + 1.0) -
                                                     std::lgamma(a + 1.0)));
            CHECK(laguerre(m, a, 0.0) == binom);
        }
    }
}

TEST_CASE("laguerre three-term recurrence holds") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> mdist(1, 49);
    std::uniform_int_distribution<int> adist(0, 10);
    std::uniform_real_distribution<double> xdist(-50.0, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = mdist(rng);
        const int a = adist(rng);
        const double x = xdist(rng);
        const double lhs = (m + 1) * laguerre(m + 1, a, x);
        const double rhs = (2 * m + a + 1 - x) * laguerre(m, a, x) - (m + a) * laguerre(m - 1, a, x);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max({std::abs(lhs), std::abs(rhs), 1.0}));
    }
}

TEST_CASE("laguerre large order stays finite through scaling") {
    const ScaledValue v = laguerre_scaled(2000, 800, 3.0);
    CHECK(std::isfinite(v.mantissa));
    CHECK(v.log_scale > 0.0);
    CHECK_THROWS_AS(laguerre(2, -3, 1.0), DomainError);
    CHECK_THROWS_AS(laguerre(-1, 0, 1.0), DomainError);
}

TEST_CASE("bessel_j reference values") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(0, 2.4048255576957727686)) < 1e-12);
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.76519768655796655).epsilon(1e-12));
    CHECK(bessel_j(1, 2.5) == doctest::Approx(0.49709410246427404).epsilon(1e-12));
    CHECK(bessel_j(5, 3.0) == doctest::Approx(0.043028434877047584).epsilon(1e-11));
    CHECK(std::abs(bessel_j(10, 30.0) - -0.12987689399858877) < 1e-12);
    CHECK(std::abs(bessel_j(50, 20.0) - 4.4510392847006816e-16) < 1e-20);
    CHECK(std::abs(bessel_j(3, 100.0) - 0.076284201720331943) < 1e-12);
    CHECK(std::abs(bessel_j(0, 50.0) - 0.055812327669251815) < 1e-12);
    CHECK(bessel_j(20, 4.0) == doctest::Approx(3.5595116285938530e-13).epsilon(1e-9));
}

TEST_CASE("bessel_j matches the standard library") {
    for (int k : {0, 1, 2, 7, 30}) {
        for (double z = 0.1; z < 60.0; z += 1.37) {
            CHECK(std::abs(bessel_j(k, z) - std::cyl_bessel_j(static_cast<double>(k), z)) < 1e-10);
        }
    }
}

TEST_CASE("bessel_j square-sum rule") {
    for (double z : {0.3, 1.0, 7.7, 25.0, 50.0}) {
        double sum = bessel_j(0, z) * bessel_j(0, z);
        const int kmax = static_cast<int>(z) + 40;
        for (int k = 1; k <= kmax; ++k) {
            const double j = bessel_j(k, z);
            sum += 2.0 * j * j;
        }
        CHECK(std::abs(sum - 1.0) < 1e-8);
    }
}

TEST_CASE("bessel_j rejects bad input") {
    CHECK_THROWS_AS(bessel_j(0, NAN), DomainError);
    CHECK_THROWS_AS(bessel_j(0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
}

TEST_CASE("log_factorial") {
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
    CHECK(log_factorial(1000) == doctest::Approx(5912.1281784881633).epsilon(1e-13));
    CHECK(log_factorial(5000) == doctest::Approx(std::lgamma(5001.0)).epsilon(1e-13));
    CHECK(log_factorial(10000000) == doctest::Approx(std::lgamma(10000001.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log_factorial(-1), DomainError);
}
