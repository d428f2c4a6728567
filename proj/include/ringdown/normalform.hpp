#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ringdown/odes.hpp"

namespace ringdown {

/// Quadratic truncation of dx/dt = f(x) about an equilibrium: Jacobian plus
/// one symmetric Hessian per state equation.
struct QuadraticModel {
    Eigen::VectorXd equilibrium;
    Eigen::MatrixXd jacobian;
    std::vector<Eigen::MatrixXd> hessians;

    int n() const { return static_cast<int>(jacobian.rows()); }
};

/// The same system in modal coordinates y = Phi^{-1} (x - x*):
/// dy_j/dt = lambda_j y_j + sum_kl quad[j](k,l) y_k y_l.
struct ModalModel {
    Eigen::VectorXd equilibrium;
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd modal_matrix;  // columns are eigenvectors
    Eigen::MatrixXcd modal_inverse;
    std::vector<Eigen::MatrixXcd> quad; // quad[j] symmetric in (k,l)

    int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Coefficients of the near-identity transform y_j = z_j + sum h[j](k,l) z_k z_l,
/// h[j](k,l) = quad[j](k,l) / (lambda_k + lambda_l - lambda_j). Entries whose
/// denominator falls below the detuning floor are masked (set to zero and
/// recorded) instead of blowing up.
struct HTensor {
    std::vector<Eigen::MatrixXcd> h;
    std::vector<Eigen::MatrixXi> masked; // 1 where the entry was suppressed
    int masked_count = 0;
    double detuning_floor = 0.0;
};

struct ResonanceDegree {
    std::vector<Eigen::MatrixXd> detuning; // detuning[j](k,l) = |l_k + l_l - l_j|
    int k = 0, l = 0, j = 0;               // argmin triple
    double min_detuning = 0.0;
};

/// Jacobian and Hessians by central finite differences; per-state step
/// step*(1+|x*_i|). Verifies f(x*) ~ 0 and that halving the step moves the
/// result by less than 1e-3 relative.
QuadraticModel expand_second_order(const VectorField& f, const Eigen::VectorXd& equilibrium,
                                   double step = 1e-4);

/// Dense eigendecomposition plus the modal quadratic coefficients; columns of
/// the modal matrix are unit norm with their largest entry rotated to the
/// positive real axis. Cross-checked against the x-space model at random
/// small states.
ModalModel to_modal(const QuadraticModel& model);

HTensor h_coefficients(const ModalModel& modal, double detuning_floor = 1e-3);

/// Initial z-space state solved from y0 = z + h(z,z) by fixed-point iteration.
Eigen::VectorXcd initial_z(const ModalModel& modal, const HTensor& h, const Eigen::VectorXd& x0);

/// Closed-form second-order trajectories about the equilibrium:
/// x_i(t) = x*_i + sum_j u_ij z_j0 e^{l_j t} + sum_j u_ij sum_kl h[j](k,l) z_k0 z_l0 e^{(l_k+l_l)t}.
/// Returns a times.size() x n real matrix of absolute states.
Eigen::MatrixXd analytic_response(const ModalModel& modal, const HTensor& h,
                                  const Eigen::VectorXcd& z0, const std::vector<double>& times);

ResonanceDegree resonance_degree(const Eigen::VectorXcd& eigenvalues);
ResonanceDegree resonance_degree(const ModalModel& modal);

} // namespace ringdown
