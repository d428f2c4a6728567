// Throughput comparison of the serial reference kernels against the OpenMP
// ones, on sizes well past anything the test suite touches.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "ringdown/kernels.hpp"

using ringdown::kernels::Exec;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        body();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void report(const char* name, std::size_t n, double serial_ms, double parallel_ms,
            double max_diff) {
    std::printf("%-18s n=%-9zu serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|diff| %.3g\n",
                name, n, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ringdown kernel benchmark: serial reference vs OpenMP"};
    std::size_t n = 2'000'000;
    int modes = 40;
    int reps = 3;
    app.add_option("--n", n, "grid length")->capture_default_str();
    app.add_option("--modes", modes, "mode count")->capture_default_str();
    app.add_option("--reps", reps, "repetitions (best-of)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    std::vector<std::complex<double>> lambdas, b;
    for (int i = 0; i < modes; ++i) {
        lambdas.emplace_back(-std::abs(u(rng)), 6.0 * u(rng));
        b.emplace_back(u(rng), u(rng));
    }
    std::vector<double> times(n);
    for (std::size_t k = 0; k < n; ++k) times[k] = 1e-3 * static_cast<double>(k);

    {
        std::vector<double> serial, parallel;
        const double ts = time_best_of(reps, [&] {
            serial = ringdown::kernels::mode_sum(lambdas, b, times, Exec::serial);
        });
        const double tp = time_best_of(reps, [&] {
            parallel = ringdown::kernels::mode_sum(lambdas, b, times, Exec::parallel);
        });
        double max_diff = 0;
        for (std::size_t k = 0; k < n; ++k)
            max_diff = std::max(max_diff, std::abs(serial[k] - parallel[k]));
        report("mode_sum", n, ts, tp, max_diff);
    }

    {
        const Eigen::Index rows = static_cast<Eigen::Index>(n / 20);
        Eigen::MatrixXcd vs, vp;
        const double ts = time_best_of(reps, [&] {
            vs = ringdown::kernels::exp_basis(lambdas, 0.0, 1e-3, rows, Exec::serial);
        });
        const double tp = time_best_of(reps, [&] {
            vp = ringdown::kernels::exp_basis(lambdas, 0.0, 1e-3, rows, Exec::parallel);
        });
        report("exp_basis", static_cast<std::size_t>(rows) * static_cast<std::size_t>(modes), ts,
               tp, (vs - vp).cwiseAbs().maxCoeff());
    }

    {
        std::vector<double> a(n), c(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = u(rng);
            c[k] = u(rng);
        }
        double rs = 0, rp = 0;
        const double ts = time_best_of(reps, [&] {
            rs = ringdown::kernels::trapezoid_abs_diff(a.data(), c.data(), n, 1e-3, Exec::serial);
        });
        const double tp = time_best_of(reps, [&] {
            rp = ringdown::kernels::trapezoid_abs_diff(a.data(), c.data(), n, 1e-3, Exec::parallel);
        });
        report("trapezoid_abs_diff", n, ts, tp, std::abs(rs - rp));
    }

    return 0;
}
