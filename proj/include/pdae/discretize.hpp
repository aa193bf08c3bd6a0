#pragma once

#include "pdae/grid.hpp"
#include "pdae/problem.hpp"

#include <functional>

namespace pdae {

// Method-of-lines system  M U'(t) = D U(t) + F(t)  on the grid interior.
struct MolSystem {
    int dim = 0;          // N*n
    Matrix mass;          // I_N (x) A
    Matrix stiffness;     // -(1/h^2) P (x) B - I_N (x) C
    std::function<cvec(double)> forcing; // F(t), boundary data folded in
    GridSpec grid;
    PdaeProblem problem;  // copy; closures stay valid independently of the caller
    int p_x = 2;          // spatial order of the stencil
};

GridSpec make_grid(const PdaeProblem& p, int N, double delta = 0.5);

// N x N tridiagonal Toeplitz stencil matrix: sub 1+hr(delta-1),
// diag -(2-hr(1-2 delta)), sup 1+hr*delta
Matrix build_p(int N, double h, double r, double delta);

// closed-form eigenvalues of (1/h^2) * build_p, principal branch when the
// stencil coefficients have opposite signs
cvec p_spectrum(int N, double h, double r, double delta);

MolSystem assemble(const PdaeProblem& p, const GridSpec& grid);

// max-norm of M U'_h - D U_h - F(t) with U_h, U'_h from the exact solution;
// measures the spatial truncation error
double truncation_residual(const PdaeProblem& p, const GridSpec& grid, double t);

} // namespace pdae
