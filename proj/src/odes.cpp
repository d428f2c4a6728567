#include "ringdown/odes.hpp"

#include "ringdown/errors.hpp"

namespace ringdown {

VectorField PolynomialSystem::field() const {
    const auto terms = rhs; // copy into the closure; systems are tiny
    const int dim = n;
    return [terms, dim](const Eigen::VectorXd& x) {
        Eigen::VectorXd dx = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (const auto& m : terms[static_cast<std::size_t>(i)]) {
                double v = m.coeff;
                for (int idx : m.vars) v *= x[idx];
                acc += v;
            }
            dx[i] = acc;
        }
        return dx;
    };
}

Eigen::MatrixXd rk4(const VectorField& f, const Eigen::VectorXd& x0, double dt, int steps) {
    if (!(dt > 0.0)) throw NonPositiveStep("rk4 step must be positive");
    const Eigen::Index n = x0.size();
    Eigen::MatrixXd out(steps + 1, n);
    Eigen::VectorXd x = x0;
    out.row(0) = x.transpose();
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd k1 = f(x);
        const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = f(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.row(k + 1) = x.transpose();
    }
    return out;
}

} // namespace ringdown
