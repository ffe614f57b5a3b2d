// Serial reference vs OpenMP kernels. Prints wall time per variant and the
// largest difference between them.
//
// Usage: bench_kernels [repeats]     (RABI_LAB_THREADS caps the thread count)

#include "rabilab/dynamics.hpp"
#include "rabilab/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

using namespace rabilab;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void report(const char* name, double serial, double parallel, double diff) {
    std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  max|diff| %.2e\n", name, serial, parallel,
                serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    std::printf("threads: %d\n", kernels::configured_threads());

    {
        const int k = 600;
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd c(k), e(k);
        Eigen::MatrixXd m(k, k);
        for (int i = 0; i < k; ++i) {
            c(i) = u(rng);
            e(i) = 20.0 * u(rng);
            for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
        }
        const auto t = dynamics::uniform_times(50.0, 400);
        std::vector<double> a, b;
        const double ts = best_of(repeats, [&] { a = kernels::quadratic_form_series(c, e, m, t, kernels::Exec::serial); });
        const double tp = best_of(repeats, [&] { b = kernels::quadratic_form_series(c, e, m, t, kernels::Exec::parallel); });
        report("quadratic form 600 x 400", ts, tp, max_diff(a, b));
    }
    {
        const core::ModelParams params{1.0, 0.1, core::default_n_max(400.0, 0.1)};
        const dynamics::CoherentInit init{20.0, params.n_max};
        const auto t = dynamics::uniform_times(60.0, 2000);
        std::vector<double> a, b;
        const double ts = best_of(repeats, [&] { a = dynamics::evolve_exact(params, init, t, kernels::Exec::serial).values; });
        const double tp = best_of(repeats, [&] { b = dynamics::evolve_exact(params, init, t, kernels::Exec::parallel).values; });
        report("exact W(t), nbar 400", ts, tp, max_diff(a, b));
    }
    {
        const core::ModelParams params{1.0, 0.1, core::default_n_max(100.0, 0.1)};
        const dynamics::CoherentInit init{10.0, params.n_max};
        const auto t = dynamics::uniform_times(250.0, 2000);
        std::vector<double> a, b;
        const double ts = best_of(repeats, [&] { a = dynamics::evolve_uaa(params, init, t, kernels::Exec::serial).values; });
        const double tp = best_of(repeats, [&] { b = dynamics::evolve_uaa(params, init, t, kernels::Exec::parallel).values; });
        report("uaa W(t), nbar 100", ts, tp, max_diff(a, b));
    }
    {
        const core::ModelParams params{1.0, 0.1, 40};
        const dynamics::CoherentInit init{30.0, 40};
        const auto t = dynamics::uniform_times(100.0, 20000);
        std::vector<double> a, b;
        const double ts = best_of(repeats, [&] { a = dynamics::evolve_rwa(params, init, t, kernels::Exec::serial).values; });
        const double tp = best_of(repeats, [&] { b = dynamics::evolve_rwa(params, init, t, kernels::Exec::parallel).values; });
        report("rwa W(t), nbar 900", ts, tp, max_diff(a, b));
    }
    return 0;
}
