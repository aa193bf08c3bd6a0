#pragma once

#include "pdae/grid.hpp"
#include "pdae/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pdae {

using rvec = std::vector<double>;

// Linear PDAE  A u_t + B (u_xx + r u_x) + C u = f  on (x_lo, x_hi) x (t0, te]
// with Dirichlet data at both endpoints and initial profile `initial`.
// A may be singular; that is the point.
struct PdaeProblem {
    int n = 0;
    Matrix A, B, C; // n x n, real-valued
    double r = 0.0;
    double x_lo = 0.0, x_hi = 1.0;
    double t0 = 0.0, te = 1.0;

    std::function<rvec(double t, double x)> forcing;
    std::function<rvec(double x)> initial;
    std::function<rvec(double t)> dirichlet_lo, dirichlet_hi;

    std::function<rvec(double t, double x)> exact; // may be empty

    // analytic derivatives of `exact`, populated for builtins; test-only
    std::function<rvec(double t, double x)> exact_t, exact_x, exact_xx;

    // smallest m with B * d^k(u)/dt^k = 0 on the boundary for all k >= m
    std::optional<int> bc_time_derivative_vanishing_order;

    std::string label;
};

enum class BuiltinId { Index3BtCs, RadauIndex1Inhomog, RadauIndex1Homog4, Coil };

struct CoilParams {
    double L = 1.0, C = 1.0, D = 1.0, l = 1.0, E = 1.0;
    // amplitude of the time-periodic excitation driven through the first
    // component; 0 keeps the plain stationary problem (no exact solution
    // attached, matching the classical setup)
    double excite = 0.0;
};

PdaeProblem builtin(BuiltinId id);
PdaeProblem coil_problem(const CoilParams& params);

const char* builtin_name(BuiltinId id);
std::optional<BuiltinId> builtin_from_name(const std::string& name);

// A du_dt + B (d2u_dx2 + r du_dx) + C u - f(t,x)
rvec residual(const PdaeProblem& p, double t, double x, const rvec& du_dt,
              const rvec& du_dx, const rvec& d2u_dx2, const rvec& u);

// stacked exact solution (u(t,x_1)^T, ..., u(t,x_N)^T)^T
rvec exact_on_grid(const PdaeProblem& p, double t, const GridSpec& grid);

// stacked initial profile on the grid interior
rvec initial_on_grid(const PdaeProblem& p, const GridSpec& grid);

} // namespace pdae
