#include "rabilab/kernels.hpp"

#include "rabilab/errors.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <string>

namespace rabilab::kernels {

int configured_threads() {
    if (const char* env = std::getenv("RABI_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<int>(v);
        }
    }
    return omp_get_max_threads();
}

namespace {

void check_shapes(const Eigen::VectorXd& c, const Eigen::VectorXd& e, const Eigen::MatrixXd& m) {
    if (c.size() != e.size() || m.rows() != c.size() || m.cols() != c.size()) {
        throw DomainError("quadratic_form_series: coefficient, energy and matrix sizes disagree");
    }
}

double quadratic_form_serial(const Eigen::VectorXd& c, const Eigen::VectorXd& e, const Eigen::MatrixXd& m,
                             double t) {
    const Eigen::Index k = c.size();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        acc += c(j) * c(j) * m(j, j);
        for (Eigen::Index i = j + 1; i < k; ++i) {
            acc += 2.0 * c(i) * c(j) * m(i, j) * std::cos((e(i) - e(j)) * t);
        }
    }
    return acc;
}

}  // namespace

std::vector<double> quadratic_form_series(const Eigen::VectorXd& c, const Eigen::VectorXd& e,
                                          const Eigen::MatrixXd& m, std::span<const double> times,
                                          Exec exec) {
    check_shapes(c, e, m);
    const auto samples = static_cast<std::ptrdiff_t>(times.size());
    std::vector<double> out(times.size(), 0.0);
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < samples; ++i) {
            out[static_cast<std::size_t>(i)] = quadratic_form_serial(c, e, m, times[static_cast<std::size_t>(i)]);
        }
        return out;
    }
#pragma omp parallel num_threads(configured_threads())
    {
        Eigen::VectorXd re(c.size());
        Eigen::VectorXd im(c.size());
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < samples; ++i) {
            const double t = times[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < c.size(); ++j) {
                re(j) = c(j) * std::cos(e(j) * t);
                im(j) = -c(j) * std::sin(e(j) * t);
            }
            // z^dag M z = re.M.re + im.M.im because M is real symmetric.
            out[static_cast<std::size_t>(i)] = re.dot(m * re) + im.dot(m * im);
        }
    }
    return out;
}

std::vector<double> cosine_series(const std::vector<double>& weight, const std::vector<double>& offset,
                                  const std::vector<double>& amplitude, const std::vector<double>& omega,
                                  std::span<const double> times, Exec exec) {
    const std::size_t k = weight.size();
    if (offset.size() != k || amplitude.size() != k || omega.size() != k) {
        throw DomainError("cosine_series: term arrays must have equal length");
    }
    const auto samples = static_cast<std::ptrdiff_t>(times.size());
    std::vector<double> out(times.size(), 0.0);
    auto one = [&](std::ptrdiff_t i) {
        const double t = times[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            acc += weight[j] * (offset[j] + amplitude[j] * std::cos(omega[j] * t));
        }
        out[static_cast<std::size_t>(i)] = acc;
    };
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < samples; ++i) one(i);
        return out;
    }
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < samples; ++i) one(i);
    return out;
}

}  // namespace rabilab::kernels
