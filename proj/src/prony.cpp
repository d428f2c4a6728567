#include "ringdown/prony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ringdown/errors.hpp"
#include "ringdown/kernels.hpp"

namespace ringdown {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double kDcImagTol = 1e-6;      // rad/s below which a mode counts as dc
constexpr double kConjPairTol = 1e-6;    // |lambda - conj(lambda')| pairing tolerance
constexpr double kDuplicateTol = 1e-9;   // eigenvalue dedup tolerance
constexpr double kCondLimit = 1e12;
} // namespace

double Mode::freq_hz() const { return std::abs(lambda.imag()) / two_pi; }

double Mode::amplitude() const {
    return std::abs(lambda.imag()) < kDcImagTol ? std::abs(contribution)
                                                : 2.0 * std::abs(contribution);
}

double Mode::phase_rad() const { return std::arg(contribution); }

std::vector<std::complex<double>> ModeSet::eigenvalues() const {
    std::vector<std::complex<double>> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(m.lambda);
    return out;
}

std::vector<std::complex<double>> ModeSet::contributions() const {
    std::vector<std::complex<double>> out;
    out.reserve(modes.size());
    for (const auto& m : modes) out.push_back(m.contribution);
    return out;
}

std::optional<std::size_t> ModeSet::nearest_mode(double freq_hz) const {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].lambda.imag() < -kDcImagTol) continue; // only dc / positive-frequency members
        const double d = std::abs(modes[i].freq_hz() - freq_hz);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

bool conjugate_closed(const ModeSet& set, double tol) {
    for (const auto& m : set.modes) {
        if (std::abs(m.lambda.imag()) <= tol) continue;
        bool found = false;
        for (const auto& o : set.modes) {
            if (std::abs(o.lambda - std::conj(m.lambda)) <= tol &&
                std::abs(o.contribution - std::conj(m.contribution)) <=
                    tol * (1.0 + std::abs(m.contribution)))
                found = true;
        }
        if (!found) return false;
    }
    return true;
}

int select_order(const std::vector<double>& samples, int max_order) {
    const long n = static_cast<long>(samples.size());
    if (max_order < 1 || 2L * max_order >= n)
        throw TooFewSamples("select_order needs max_order < length/2");
    const long rows = max_order + 1;
    const long cols = n - rows + 1;
    Eigen::MatrixXd hankel(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) hankel(r, c) = samples[static_cast<std::size_t>(r + c)];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(hankel);
    const auto& sv = svd.singularValues();
    double total = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) total += sv[i] * sv[i];
    if (total == 0.0) return 0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        acc += sv[i] * sv[i];
        if (acc >= (1.0 - 1e-8) * total) return std::min<int>(static_cast<int>(i) + 1, max_order);
    }
    return max_order;
}

LinearPrediction linear_prediction_coeffs(const std::vector<double>& samples, int order) {
    const long n = static_cast<long>(samples.size());
    const long p = order;
    if (p < 1) throw UsageError("prediction order must be >= 1");
    if (n < 2 * p + 1) throw TooFewSamples("linear prediction needs at least 2*order+1 samples");

    const long rows = n - p;
    Eigen::MatrixXd m(rows, p);
    Eigen::VectorXd rhs(rows);
    for (long k = p; k < n; ++k) {
        rhs[k - p] = samples[static_cast<std::size_t>(k)];
        for (long j = 1; j <= p; ++j) m(k - p, j - 1) = samples[static_cast<std::size_t>(k - j)];
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
    LinearPrediction lp;
    lp.coeffs = cod.solve(rhs);
    lp.rank = cod.rank();
    lp.rank_deficient = lp.rank < p;
    lp.residual_norm = (m * lp.coeffs - rhs).norm();
    return lp;
}

EigenvalueExtraction roots_to_eigen(const Eigen::VectorXd& coeffs, double dt) {
    if (!(dt > 0.0)) throw ZeroStep("dt must be positive");
    const Eigen::Index p = coeffs.size();
    if (p == 0) throw UsageError("empty coefficient vector");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    companion.row(0) = coeffs.transpose();
    if (p > 1) companion.block(1, 0, p - 1, p - 1).setIdentity();

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    EigenvalueExtraction out;
    for (Eigen::Index i = 0; i < p; ++i) {
        const std::complex<double> mu = es.eigenvalues()[i];
        if (std::abs(mu) < 1e-12) {
            ++out.dropped_zero_roots;
            continue;
        }
        out.lambdas.push_back(std::log(mu) / dt);
    }
    return out;
}

namespace {

/// Snap near-real eigenvalues to the real axis, average near-conjugate pairs
/// into exact pairs, and expand Nyquist-frequency values (from negative real
/// roots) into conjugate pairs so reconstructions stay real.
std::vector<std::complex<double>> close_conjugates(std::vector<std::complex<double>> lambdas,
                                                   double dt) {
    const double nyquist_omega = std::numbers::pi / dt;
    std::vector<std::complex<double>> out;
    std::vector<char> used(lambdas.size(), 0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> li = lambdas[i];
        if (std::abs(li.imag()) < kDcImagTol) {
            out.emplace_back(li.real(), 0.0);
            used[i] = 1;
            continue;
        }
        if (std::abs(std::abs(li.imag()) - nyquist_omega) < kConjPairTol) {
            // negative real root: split into a conjugate pair at the Nyquist rate
            out.emplace_back(li.real(), nyquist_omega);
            out.emplace_back(li.real(), -nyquist_omega);
            used[i] = 1;
            continue;
        }
        std::size_t partner = i;
        double best = kConjPairTol;
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(lambdas[j] - std::conj(li));
            if (d < best) {
                best = d;
                partner = j;
            }
        }
        if (partner != i) {
            const std::complex<double> avg = 0.5 * (li + std::conj(lambdas[partner]));
            out.push_back(avg);
            out.push_back(std::conj(avg));
            used[i] = used[partner] = 1;
        } else {
            // no partner found; force closure so the model stays real
            out.push_back(li);
            out.push_back(std::conj(li));
            used[i] = 1;
        }
    }
    // merge duplicates
    std::vector<std::complex<double>> unique;
    for (const auto& l : out) {
        bool dup = false;
        for (const auto& u : unique)
            if (std::abs(l - u) < kDuplicateTol) dup = true;
        if (!dup) unique.push_back(l);
    }
    return unique;
}

/// Force exact conjugate symmetry of B over a conjugate-closed eigenvalue list.
void symmetrize_contributions(const std::vector<std::complex<double>>& lambdas,
                              Eigen::VectorXcd& b) {
    const std::size_t n = lambdas.size();
    std::vector<char> done(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i] || lambdas[i].imag() <= 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || done[j]) continue;
            if (std::abs(lambdas[j] - std::conj(lambdas[i])) < kDuplicateTol) {
                const std::complex<double> avg =
                    0.5 * (b[static_cast<Eigen::Index>(i)] +
                           std::conj(b[static_cast<Eigen::Index>(j)]));
                b[static_cast<Eigen::Index>(i)] = avg;
                b[static_cast<Eigen::Index>(j)] = std::conj(avg);
                done[i] = done[j] = 1;
                break;
            }
        }
    }
}

} // namespace

ContributionFit solve_contributions(const std::vector<double>& samples,
                                    const std::vector<std::complex<double>>& eigenvalues,
                                    double dt, double t_offset) {
    const std::size_t n = samples.size();
    const std::size_t p = eigenvalues.size();
    if (p == 0) return {};
    if (p > n) throw TooManyModes("more eigenvalues than samples");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (std::abs(eigenvalues[i] - eigenvalues[j]) < kDuplicateTol)
                throw IllConditioned("duplicate eigenvalues in contribution solve");

    Eigen::MatrixXcd v =
        kernels::exp_basis(eigenvalues, t_offset, dt, static_cast<Eigen::Index>(n));
    Eigen::VectorXcd y(n);
    for (std::size_t k = 0; k < n; ++k) y[static_cast<Eigen::Index>(k)] = samples[k];

    // column equilibration keeps growing/decaying columns comparable
    Eigen::VectorXd scale(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double s = v.col(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff();
        scale[static_cast<Eigen::Index>(i)] = s > 0.0 ? s : 1.0;
        v.col(static_cast<Eigen::Index>(i)) /= scale[static_cast<Eigen::Index>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
    ContributionFit fit;
    Eigen::VectorXcd u = qr.solve(y);
    fit.residual_norm = (v * u - y).norm();
    fit.b = u.cwiseQuotient(scale.cast<std::complex<double>>());

    const auto& r = qr.matrixR();
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
        const double d = std::abs(r(i, i));
        rmax = std::max(rmax, d);
        rmin = std::min(rmin, d);
    }
    fit.condition = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    fit.ill_conditioned = !(fit.condition < kCondLimit);
    return fit;
}

ModeSet fit_prony(const Signal& signal, const std::string& channel, const Interval& window,
                  int order) {
    std::vector<double> samples = signal.slice(channel, window);
    const double t_start = signal.window_start_time(window);

    ModeSet set;
    set.dt = signal.dt();
    set.window = window;
    set.reference_time = 0.0;

    double peak = 0.0;
    for (double v : samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return set;

    LinearPrediction lp = linear_prediction_coeffs(samples, order);
    EigenvalueExtraction ext = roots_to_eigen(lp.coeffs, signal.dt());
    std::vector<std::complex<double>> lambdas = close_conjugates(ext.lambdas, signal.dt());
    if (lambdas.empty()) return set;

    ContributionFit fit = solve_contributions(samples, lambdas, signal.dt(), t_start);
    symmetrize_contributions(lambdas, fit.b);

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        Mode m;
        m.lambda = lambdas[i];
        m.contribution = fit.b[static_cast<Eigen::Index>(i)];
        m.kind = std::abs(m.lambda.imag()) < kDcImagTol ? ModeKind::dc : ModeKind::natural;
        set.modes.push_back(m);
    }
    std::sort(set.modes.begin(), set.modes.end(), [](const Mode& a, const Mode& b) {
        const double ba = std::abs(a.contribution), bb = std::abs(b.contribution);
        if (ba != bb) return ba > bb;
        const double fa = std::abs(a.lambda.imag()), fb = std::abs(b.lambda.imag());
        if (fa != fb) return fa < fb;
        if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() > b.lambda.imag();
        return a.lambda.real() < b.lambda.real();
    });
    return set;
}

std::vector<double> reconstruct(const ModeSet& modes, const std::vector<double>& time_grid) {
    if (modes.empty()) return std::vector<double>(time_grid.size(), 0.0);
    return kernels::mode_sum(modes.eigenvalues(), modes.contributions(), time_grid);
}

std::vector<double> uniform_grid(double t_start, double dt, std::size_t count) {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = t_start + static_cast<double>(k) * dt;
    return t;
}

} // namespace ringdown
