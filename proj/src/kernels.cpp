#include "ringdown/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace ringdown::kernels {

Exec default_exec() {
#ifdef RINGDOWN_HAS_OPENMP
    return Exec::parallel;
#else
    return Exec::serial;
#endif
}

#ifndef RINGDOWN_HAS_OPENMP
// without OpenMP the pragmas below are inert and both paths are serial
#endif

Eigen::MatrixXcd exp_basis(const std::vector<std::complex<double>>& lambdas, double t0,
                           double dt, Eigen::Index rows, Exec exec) {
    const Eigen::Index p = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXcd v(rows, p);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index k = 0; k < rows; ++k) {
            const double t = t0 + static_cast<double>(k) * dt;
            for (Eigen::Index i = 0; i < p; ++i) v(k, i) = std::exp(lambdas[static_cast<std::size_t>(i)] * t);
        }
    } else {
        for (Eigen::Index k = 0; k < rows; ++k) {
            const double t = t0 + static_cast<double>(k) * dt;
            for (Eigen::Index i = 0; i < p; ++i) v(k, i) = std::exp(lambdas[static_cast<std::size_t>(i)] * t);
        }
    }
    return v;
}

std::vector<double> mode_sum(const std::vector<std::complex<double>>& lambdas,
                             const std::vector<std::complex<double>>& b,
                             const std::vector<double>& times, Exec exec) {
    const std::size_t n = times.size();
    const std::size_t p = lambdas.size();
    std::vector<double> out(n, 0.0);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long k = 0; k < static_cast<long long>(n); ++k) {
            std::complex<double> acc(0.0, 0.0);
            const double t = times[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < p; ++i) acc += b[i] * std::exp(lambdas[i] * t);
            out[static_cast<std::size_t>(k)] = acc.real();
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc(0.0, 0.0);
            const double t = times[k];
            for (std::size_t i = 0; i < p; ++i) acc += b[i] * std::exp(lambdas[i] * t);
            out[k] = acc.real();
        }
    }
    return out;
}

namespace {

// trapezoid weights: interior samples weigh 1, the two end samples 1/2
double trapezoid_reduce_serial(const double* a, const double* b, std::size_t n, double dt) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = b ? std::abs(a[k] - b[k]) : std::abs(a[k]);
        acc += (k == 0 || k + 1 == n) ? 0.5 * v : v;
    }
    return acc * dt;
}

double trapezoid_reduce_parallel(const double* a, const double* b, std::size_t n, double dt) {
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (long long k = 0; k < static_cast<long long>(n); ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const double v = b ? std::abs(a[i] - b[i]) : std::abs(a[i]);
        acc += (i == 0 || i + 1 == n) ? 0.5 * v : v;
    }
    return acc * dt;
}

} // namespace

double trapezoid_abs(const double* x, std::size_t n, double dt, Exec exec) {
    if (n < 2) return 0.0;
    return exec == Exec::parallel ? trapezoid_reduce_parallel(x, nullptr, n, dt)
                                  : trapezoid_reduce_serial(x, nullptr, n, dt);
}

double trapezoid_abs_diff(const double* a, const double* b, std::size_t n, double dt, Exec exec) {
    if (n < 2) return 0.0;
    return exec == Exec::parallel ? trapezoid_reduce_parallel(a, b, n, dt)
                                  : trapezoid_reduce_serial(a, b, n, dt);
}

} // namespace ringdown::kernels
