#include "rabilab/specfun.hpp"

#include "rabilab/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace rabilab::specfun {

namespace {

constexpr double kRescaleThreshold = 1e150;
const double kLogRescale = std::log(kRescaleThreshold);

// Series of exp(z^2) * erf(z); every term is positive so nothing cancels.
double erf_series(double z) {
    const double two_z2 = 2.0 * z * z;
    double term = z;
    double sum = z;
    for (int k = 1; k < 500; ++k) {
        term *= two_z2 / (2.0 * k + 1.0);
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z) * sum;
}

// Continued fraction for erfc, evaluated from the tail.
double erfc_continued_fraction(double z) {
    double t = z;
    for (int k = 200; k >= 1; --k) {
        t = z + 0.5 * k / t;
    }
    return std::exp(-z * z) / (std::sqrt(std::numbers::pi) * t);
}

constexpr std::size_t kFactorialTableSize = 4096;

const std::array<double, kFactorialTableSize>& factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t k = 1; k < kFactorialTableSize; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

}  // namespace

double erf_phi(double z) {
    if (!std::isfinite(z) || z < 0.0) {
        throw DomainError("erf_phi: argument must be finite and non-negative, got " +
                          std::to_string(z));
    }
    if (z == 0.0) {
        return 0.0;
    }
    if (z < 3.0) {
        return erf_series(z);
    }
    return 1.0 - erfc_continued_fraction(z);
}

ScaledValue laguerre_scaled(int m, int a, double x) {
    if (m < 0) {
        throw DomainError("laguerre: order m must be non-negative");
    }
    if (a < -m) {
        throw DomainError("laguerre: parameter a=" + std::to_string(a) + " is below -m=" +
                          std::to_string(-m));
    }
    if (!std::isfinite(x)) {
        throw DomainError("laguerre: argument must be finite");
    }
    ScaledValue out{1.0, 0.0};
    if (m == 0) {
        return out;
    }
    double prev = 1.0;
    double curr = 1.0 + a - x;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 1.0 + a - x) * curr - (k + a) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
        if (std::abs(curr) > kRescaleThreshold) {
            curr /= kRescaleThreshold;
            prev /= kRescaleThreshold;
            out.log_scale += kLogRescale;
        }
    }
    out.mantissa = curr;
    return out;
}

double laguerre(int m, int a, double x) {
    const ScaledValue v = laguerre_scaled(m, a, x);
    return v.mantissa * std::exp(v.log_scale);
}

double bessel_j(int k, double z) {
    if (!std::isfinite(z)) {
        throw DomainError("bessel_j: argument must be finite");
    }
    if (z < 0.0 || k < 0 || k > 100000) {
        throw DomainError("bessel_j: requires k in [0, 1e5] and z >= 0");
    }
    if (z == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    const double reach = std::max(static_cast<double>(k), std::ceil(z));
    int start = static_cast<int>(reach + 20.0 + std::ceil(std::sqrt(40.0 * reach)));
    start += start % 2;

    double j_above = 0.0;
    double j_here = 1e-300;
    double norm = 0.0;
    double result = 0.0;
    for (int n = start; n >= 1; --n) {
        const double j_below = (2.0 * n / z) * j_here - j_above;
        j_above = j_here;
        j_here = j_below;
        const int order = n - 1;
        if (order == k) {
            result = j_here;
        }
        if (order > 0 && order % 2 == 0) {
            norm += 2.0 * j_here;
        }
        if (std::abs(j_here) > 1e250) {
            j_here *= 1e-250;
            j_above *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j_here;
    return result / norm;
}

double log_factorial(std::int64_t n) {
    if (n < 0) {
        throw DomainError("log_factorial: n must be non-negative");
    }
    if (static_cast<std::size_t>(n) < kFactorialTableSize) {
        return factorial_table()[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace rabilab::specfun
