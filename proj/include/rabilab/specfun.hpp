#pragma once

// Scalar special functions used by the closed-form Rabi expressions.
// All functions are pure and safe to call concurrently.

#include <cstdint>

namespace rabilab::specfun {

// Error function Phi(z) = 2/sqrt(pi) * int_0^z exp(-t^2) dt for z >= 0.
// Absolute error below 1e-12; throws DomainError for negative or non-finite z.
double erf_phi(double z);

// Generalized Laguerre polynomial L_m^a(x), integer a >= -m, by the
// three-term recurrence in m.
double laguerre(int m, int a, double x);

// Laguerre value split as mantissa * exp(log_scale) so that large-order
// values (binomial growth in a) never overflow.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;
};
ScaledValue laguerre_scaled(int m, int a, double x);

// Bessel function of the first kind J_k(z), k >= 0, z >= 0.
// Miller backward recurrence normalized with J_0 + 2 sum J_{2j} = 1.
double bessel_j(int k, double z);

// ln(n!) with relative error below 1e-12. Small arguments come from a
// table built once on first use.
double log_factorial(std::int64_t n);

}  // namespace rabilab::specfun
