#include "ringdown/normalform.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "ringdown/errors.hpp"

namespace ringdown {

namespace {

struct Derivatives {
    Eigen::MatrixXd jacobian;
    std::vector<Eigen::MatrixXd> hessians;
};

Derivatives central_differences(const VectorField& f, const Eigen::VectorXd& x, double step) {
    const int n = static_cast<int>(x.size());
    Derivatives d;
    d.jacobian.resize(n, n);
    d.hessians.assign(n, Eigen::MatrixXd::Zero(n, n));

    Eigen::VectorXd h(n);
    for (int i = 0; i < n; ++i) h[i] = step * (1.0 + std::abs(x[i]));

    const Eigen::VectorXd f0 = f(x);
    std::vector<Eigen::VectorXd> fp(n), fm(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        fp[i] = f(xp);
        fm[i] = f(xm);
    }

    for (int i = 0; i < n; ++i) d.jacobian.col(i) = (fp[i] - fm[i]) / (2.0 * h[i]);

    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd dii = (fp[i] - 2.0 * f0 + fm[i]) / (h[i] * h[i]);
        for (int q = 0; q < n; ++q) d.hessians[q](i, i) = dii[q];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h[i]; xpp[j] += h[j];
            xpm[i] += h[i]; xpm[j] -= h[j];
            xmp[i] -= h[i]; xmp[j] += h[j];
            xmm[i] -= h[i]; xmm[j] -= h[j];
            const Eigen::VectorXd dij = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j]);
            for (int q = 0; q < n; ++q) {
                d.hessians[q](i, j) = dij[q];
                d.hessians[q](j, i) = dij[q];
            }
        }
    for (auto& hq : d.hessians) hq = 0.5 * (hq + hq.transpose()).eval();
    return d;
}

double relative_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max(1.0, b.norm());
    return (a - b).norm() / scale;
}

} // namespace

QuadraticModel expand_second_order(const VectorField& f, const Eigen::VectorXd& equilibrium,
                                   double step) {
    if (!(step > 0.0)) throw UsageError("finite-difference step must be positive");
    const Eigen::VectorXd residual = f(equilibrium);
    if (residual.norm() >= 1e-6)
        throw NotEquilibrium("f(x*) is not zero at the requested expansion point");

    const Derivatives coarse = central_differences(f, equilibrium, step);
    const Derivatives fine = central_differences(f, equilibrium, 0.5 * step);

    double disagreement = relative_diff(coarse.jacobian, fine.jacobian);
    for (std::size_t q = 0; q < coarse.hessians.size(); ++q)
        disagreement = std::max(disagreement, relative_diff(coarse.hessians[q], fine.hessians[q]));
    if (disagreement > 1e-3)
        throw StepTooSmall("finite differences do not agree under step halving");

    QuadraticModel model;
    model.equilibrium = equilibrium;
    model.jacobian = fine.jacobian;
    model.hessians = fine.hessians;
    return model;
}

ModalModel to_modal(const QuadraticModel& model) {
    const int n = model.n();
    for (const auto& hq : model.hessians) {
        const double scale = std::max(1.0, hq.norm());
        if ((hq - hq.transpose()).norm() / scale > 1e-8)
            throw UsageError("hessians must be symmetric");
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(model.jacobian);
    if (es.info() != Eigen::Success) throw DefectiveMatrix("eigendecomposition failed");

    ModalModel modal;
    modal.equilibrium = model.equilibrium;
    modal.eigenvalues = es.eigenvalues();
    modal.modal_matrix = es.eigenvectors();

    // reproducible eigenvector gauge: unit norm, largest entry real positive
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXcd col = modal.modal_matrix.col(j);
        col /= col.norm();
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        const std::complex<double> pivot = col[imax];
        if (std::abs(pivot) > 0.0) col *= std::abs(pivot) / pivot;
        modal.modal_matrix.col(j) = col;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(modal.modal_matrix);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e8)
        throw DefectiveMatrix("modal matrix is numerically defective");
    modal.modal_inverse = modal.modal_matrix.inverse();

    // quad[j](k,l) = 1/2 sum_q inv(Phi)_{jq} (Phi^T H_q Phi)_{kl}
    std::vector<Eigen::MatrixXcd> projected(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
        projected[static_cast<std::size_t>(q)] =
            modal.modal_matrix.transpose() * model.hessians[static_cast<std::size_t>(q)] *
            modal.modal_matrix;
    modal.quad.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
        for (int q = 0; q < n; ++q) c += modal.modal_inverse(j, q) * projected[static_cast<std::size_t>(q)];
        c *= 0.5;
        modal.quad[static_cast<std::size_t>(j)] = 0.5 * (c + c.transpose().eval());
    }

    // consistency check of the modal quadratic form against the x-space model
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd dx(n);
        for (int i = 0; i < n; ++i) dx[i] = 1e-4 * unit(rng);
        const Eigen::VectorXcd y = modal.modal_inverse * dx.cast<std::complex<double>>();

        Eigen::VectorXd quad_x(n);
        for (int q = 0; q < n; ++q)
            quad_x[q] = 0.5 * dx.dot(model.hessians[static_cast<std::size_t>(q)] * dx);
        const Eigen::VectorXcd lhs =
            modal.modal_inverse *
            (model.jacobian * dx + quad_x).cast<std::complex<double>>();

        Eigen::VectorXcd rhs(n);
        for (int j = 0; j < n; ++j) {
            std::complex<double> acc = modal.eigenvalues[j] * y[j];
            acc += (y.transpose() * modal.quad[static_cast<std::size_t>(j)] * y).value();
            rhs[j] = acc;
        }
        if ((lhs - rhs).norm() > 1e-6 * std::max(1e-300, lhs.norm()))
            throw NumericError("modal quadratic coefficients failed the consistency check");
    }
    return modal;
}

HTensor h_coefficients(const ModalModel& modal, double detuning_floor) {
    const int n = modal.n();
    HTensor out;
    out.detuning_floor = detuning_floor;
    out.h.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
    out.masked.assign(static_cast<std::size_t>(n), Eigen::MatrixXi::Zero(n, n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const std::complex<double> den =
                    modal.eigenvalues[k] + modal.eigenvalues[l] - modal.eigenvalues[j];
                if (std::abs(den) < detuning_floor) {
                    out.masked[static_cast<std::size_t>(j)](k, l) = 1;
                    ++out.masked_count;
                } else {
                    out.h[static_cast<std::size_t>(j)](k, l) =
                        modal.quad[static_cast<std::size_t>(j)](k, l) / den;
                }
            }
    return out;
}

Eigen::VectorXcd initial_z(const ModalModel& modal, const HTensor& h, const Eigen::VectorXd& x0) {
    const Eigen::VectorXcd y0 =
        modal.modal_inverse * (x0 - modal.equilibrium).cast<std::complex<double>>();
    const int n = modal.n();

    Eigen::VectorXcd z = y0;
    const double y_scale = std::max(1.0, y0.norm());
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::VectorXcd quad(n);
        for (int j = 0; j < n; ++j)
            quad[j] = (z.transpose() * h.h[static_cast<std::size_t>(j)] * z).value();
        const Eigen::VectorXcd next = y0 - quad;
        const double delta = (next - z).norm();
        z = next;
        if (!z.allFinite() || z.norm() > 1e6 * y_scale)
            throw NoConvergence("initial state lies outside the transform's validity region");
        if (delta <= 1e-12 * (1.0 + z.norm())) return z;
    }
    throw NoConvergence("fixed-point iteration for z0 did not converge");
}

Eigen::MatrixXd analytic_response(const ModalModel& modal, const HTensor& h,
                                  const Eigen::VectorXcd& z0, const std::vector<double>& times) {
    const int n = modal.n();
    if (!z0.allFinite()) throw UsageError("z0 must be finite");

    // per-mode quadratic weights g[j](k,l) = h[j](k,l) z_k0 z_l0
    std::vector<Eigen::MatrixXcd> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd gj(n, n);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) gj(k, l) = h.h[static_cast<std::size_t>(j)](k, l) * z0[k] * z0[l];
        g[static_cast<std::size_t>(j)] = gj;
    }

    const std::size_t nt = times.size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(nt), n);
    double max_imag = 0.0, max_abs = 0.0;

#pragma omp parallel for schedule(static) reduction(max : max_imag, max_abs)
    for (long long ti = 0; ti < static_cast<long long>(nt); ++ti) {
        const double t = times[static_cast<std::size_t>(ti)];
        Eigen::VectorXcd y(n);
        Eigen::MatrixXcd pair_exp(n, n);
        Eigen::VectorXcd mode_exp(n);
        for (int j = 0; j < n; ++j) mode_exp[j] = std::exp(modal.eigenvalues[j] * t);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) pair_exp(k, l) = mode_exp[k] * mode_exp[l];
        for (int j = 0; j < n; ++j) {
            std::complex<double> acc = z0[j] * mode_exp[j];
            acc += g[static_cast<std::size_t>(j)].cwiseProduct(pair_exp).sum();
            y[j] = acc;
        }
        const Eigen::VectorXcd x = modal.modal_matrix * y;
        for (int i = 0; i < n; ++i) {
            out(static_cast<Eigen::Index>(ti), i) = modal.equilibrium[i] + x[i].real();
            max_imag = std::max(max_imag, std::abs(x[i].imag()));
            max_abs = std::max(max_abs, std::abs(x[i]));
        }
    }

    if (max_imag > 1e-8 * std::max(1e-300, max_abs))
        throw NumericError("analytic response has a non-negligible imaginary residue");
    return out;
}

ResonanceDegree resonance_degree(const Eigen::VectorXcd& eigenvalues) {
    const int n = static_cast<int>(eigenvalues.size());
    ResonanceDegree out;
    out.detuning.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    out.min_detuning = std::numeric_limits<double>::infinity();
    bool best_self = true;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const double d = std::abs(eigenvalues[k] + eigenvalues[l] - eigenvalues[j]);
                out.detuning[static_cast<std::size_t>(j)](k, l) = d;
                // ties prefer distinct parents: pair interactions over self-interactions
                const bool self = k == l;
                const bool better =
                    d < out.min_detuning || (d == out.min_detuning && best_self && !self);
                if (better) {
                    out.min_detuning = d;
                    out.k = k;
                    out.l = l;
                    out.j = j;
                    best_self = self;
                }
            }
    return out;
}

ResonanceDegree resonance_degree(const ModalModel& modal) {
    return resonance_degree(modal.eigenvalues);
}

} // namespace ringdown
