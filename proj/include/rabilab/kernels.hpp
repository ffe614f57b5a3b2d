#pragma once

// Time-sampling kernels shared by the evolution engines. Each has a serial
// reference form and an OpenMP form parallel over sample times; both return
// identical values up to floating-point reassociation.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rabilab::kernels {

enum class Exec { serial, parallel };

// Worker count: RABI_LAB_THREADS if set and positive, else the OpenMP default.
int configured_threads();

// W(t) = Re z(t)^dag M z(t) with z_j(t) = c_j exp(-i e_j t), M real symmetric.
// Serial form sums pairs c_j c_k M_jk cos((e_j - e_k) t) directly; the
// parallel form uses two matrix-vector products per time.
std::vector<double> quadratic_form_series(const Eigen::VectorXd& c, const Eigen::VectorXd& e,
                                          const Eigen::MatrixXd& m, std::span<const double> times,
                                          Exec exec = Exec::parallel);

// W(t) = sum_m weight_m (offset_m + amplitude_m cos(omega_m t)).
std::vector<double> cosine_series(const std::vector<double>& weight, const std::vector<double>& offset,
                                  const std::vector<double>& amplitude, const std::vector<double>& omega,
                                  std::span<const double> times, Exec exec = Exec::parallel);

}  // namespace rabilab::kernels
