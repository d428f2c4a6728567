#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ringdown::kernels {

/// Every kernel has a serial reference implementation and an OpenMP one.
/// The serial path is the ground truth the parallel path is tested against;
/// tools/bench_kernels compares their throughput.
enum class Exec { serial, parallel };

Exec default_exec();

/// V(k, i) = exp(lambda_i * (t0 + k*dt)), rows k = 0..rows-1.
Eigen::MatrixXcd exp_basis(const std::vector<std::complex<double>>& lambdas, double t0,
                           double dt, Eigen::Index rows, Exec exec = default_exec());

/// x(k) = Re sum_i b_i exp(lambda_i * times[k]).
std::vector<double> mode_sum(const std::vector<std::complex<double>>& lambdas,
                             const std::vector<std::complex<double>>& b,
                             const std::vector<double>& times, Exec exec = default_exec());

/// Composite trapezoid of |x| on a uniform grid.
double trapezoid_abs(const double* x, std::size_t n, double dt, Exec exec = default_exec());

/// Composite trapezoid of |a - b| on a uniform grid.
double trapezoid_abs_diff(const double* a, const double* b, std::size_t n, double dt,
                          Exec exec = default_exec());

} // namespace ringdown::kernels
