#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ringdown {

/// Autonomous vector field dx/dt = f(x).
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// One term c * prod(x[vars]); vars holds 0, 1 or 2 state indices, so the
/// field is polynomial of degree <= 2.
struct Monomial {
    double coeff = 0.0;
    std::vector<int> vars;
};

struct PolynomialSystem {
    int n = 0;
    Eigen::VectorXd equilibrium;
    std::vector<std::vector<Monomial>> rhs; // rhs[i] = monomials of f_i

    VectorField field() const;
};

/// Classic fixed-step 4th-order Runge-Kutta. Returns the trajectory as a
/// (steps+1) x n matrix whose row k is the state at t0 + k*dt.
Eigen::MatrixXd rk4(const VectorField& f, const Eigen::VectorXd& x0, double dt, int steps);

} // namespace ringdown
