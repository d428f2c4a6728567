#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ringdown/signal.hpp"

namespace ringdown {

enum class ModeKind { dc, natural, resonance };

/// One complex exponential component B * exp(lambda * t). Contribution
/// factors are anchored at absolute time 0 so fits over different windows of
/// the same record are directly comparable.
struct Mode {
    std::complex<double> lambda;       // 1/s; Re = damping, Im = angular frequency
    std::complex<double> contribution; // B, in signal units
    ModeKind kind = ModeKind::natural;
    std::optional<std::pair<int, int>> parents; // resonance modes only

    double freq_hz() const;
    double damping() const { return lambda.real(); }
    double amplitude() const; // 2|B| for oscillatory modes, |B| for dc
    double phase_rad() const;
};

struct ModeSet {
    std::vector<Mode> modes;
    double dt = 0.0;
    Interval window;
    double reference_time = 0.0; // time at which the B values are anchored

    bool empty() const { return modes.empty(); }
    std::vector<std::complex<double>> eigenvalues() const;
    std::vector<std::complex<double>> contributions() const;
    /// Index of the positive-frequency (or dc) mode nearest `freq_hz`.
    std::optional<std::size_t> nearest_mode(double freq_hz) const;
};

bool conjugate_closed(const ModeSet& set, double tol = 1e-9);

/// Smallest r whose top-r Hankel singular values hold all but 1e-8 of the
/// total squared singular-value energy; capped at max_order.
int select_order(const std::vector<double>& samples, int max_order);

struct LinearPrediction {
    Eigen::VectorXd coeffs;    // y[k] ~= sum_m coeffs[m-1] * y[k-m]
    double residual_norm = 0;  // ||prediction residual||_2
    Eigen::Index rank = 0;     // numerical rank of the prediction matrix
    bool rank_deficient = false;
};

/// Least-squares linear prediction coefficients over all valid rows, solved
/// by a rank-revealing orthogonal factorization (minimum-norm solution when
/// the signal holds fewer exponentials than `order`).
LinearPrediction linear_prediction_coeffs(const std::vector<double>& samples, int order);

struct EigenvalueExtraction {
    std::vector<std::complex<double>> lambdas;
    int dropped_zero_roots = 0;
};

/// Roots of z^p - a_1 z^{p-1} - ... - a_p via the companion matrix, mapped to
/// continuous-time eigenvalues ln(mu)/dt on the principal branch. Roots at
/// mu ~ 0 carry no signal content and are dropped (counted in the result).
EigenvalueExtraction roots_to_eigen(const Eigen::VectorXd& coeffs, double dt);

struct ContributionFit {
    Eigen::VectorXcd b;
    double condition = 0.0; // column-equilibrated condition estimate
    bool ill_conditioned = false;
    double residual_norm = 0.0;
};

/// Least-squares solution of V b = y with V(k,i) = exp(lambda_i*(t_offset+k*dt)).
/// t_offset is the absolute time of samples[0], which anchors b at t = 0.
ContributionFit solve_contributions(const std::vector<double>& samples,
                                    const std::vector<std::complex<double>>& eigenvalues,
                                    double dt, double t_offset);

/// Classical Prony fit of one channel over a window: linear prediction ->
/// companion roots -> contribution solve. The returned set is conjugate
/// closed, deduplicated, and sorted by |B| descending.
ModeSet fit_prony(const Signal& signal, const std::string& channel, const Interval& window,
                  int order);

/// Re sum_i B_i exp(lambda_i t) on an arbitrary time grid.
std::vector<double> reconstruct(const ModeSet& modes, const std::vector<double>& time_grid);

std::vector<double> uniform_grid(double t_start, double dt, std::size_t count);

} // namespace ringdown
