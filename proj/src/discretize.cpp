#include "pdae/discretize.hpp"

#include <cmath>

namespace pdae {

GridSpec make_grid(const PdaeProblem& p, int N, double delta) {
    if (N < 1)
        throw PdaeError(ErrorCode::ConfigError, "grid needs at least one interior point");
    if (delta < 0.0 || delta > 1.0)
        throw PdaeError(ErrorCode::ConfigError, "upwind weight must lie in [0,1]");
    return GridSpec{N, (p.x_hi - p.x_lo) / (N + 1), delta};
}

namespace {

struct Stencil {
    double lo, di, hi;
};

Stencil stencil_coeffs(double h, double r, double delta) {
    double hr = h * r;
    return {1.0 + hr * (delta - 1.0), -(2.0 - hr * (1.0 - 2.0 * delta)), 1.0 + hr * delta};
}

} // namespace

Matrix build_p(int N, double h, double r, double delta) {
    if (N < 1 || h <= 0.0)
        throw PdaeError(ErrorCode::ConfigError, "build_p needs N >= 1, h > 0");
    auto [lo, di, hi] = stencil_coeffs(h, r, delta);
    Matrix P(N, N);
    for (int i = 0; i < N; ++i) {
        P(i, i) = di;
        if (i > 0) P(i, i - 1) = lo;
        if (i + 1 < N) P(i, i + 1) = hi;
    }
    return P;
}

cvec p_spectrum(int N, double h, double r, double delta) {
    auto [lo, di, hi] = stencil_coeffs(h, r, delta);
    if (std::abs(lo) < 1e-14 || std::abs(hi) < 1e-14)
        throw PdaeError(ErrorCode::DegenerateStencil,
                        "stencil coefficient vanished; eigenvalue formula invalid");
    const double h2 = h * h;
    const cplx branch = std::sqrt(cplx(lo / hi));
    cvec lam(N);
    const double pi = std::acos(-1.0);
    for (int j = 1; j <= N; ++j)
        lam[j - 1] = di / h2 + 2.0 * (hi / h2) * branch * std::cos(j * pi / (N + 1));
    return lam;
}

MolSystem assemble(const PdaeProblem& p, const GridSpec& grid) {
    if (p.A.rows != p.n || p.A.cols != p.n || p.B.rows != p.n || p.C.rows != p.n)
        throw PdaeError(ErrorCode::DimensionMismatch, "problem matrices must be n x n");
    const int N = grid.N, n = p.n;
    const double h2 = grid.h * grid.h;
    auto [lo, di, hi] = stencil_coeffs(grid.h, p.r, grid.delta);
    (void)di;

    MolSystem mol;
    mol.dim = N * n;
    mol.grid = grid;
    mol.problem = p;
    mol.p_x = (p.r == 0.0 || grid.delta == 0.5) ? 2 : 1;
    mol.mass = kron(Matrix::identity(N), p.A);
    mol.stiffness = cplx(-1.0 / h2) * kron(build_p(N, grid.h, p.r, grid.delta), p.B) -
                    kron(Matrix::identity(N), p.C);

    mol.forcing = [f = p.forcing, psi_lo = p.dirichlet_lo, psi_hi = p.dirichlet_hi, B = p.B,
                   x_lo = p.x_lo, h = grid.h, N, n, lo_w = lo / h2, hi_w = hi / h2](double t) {
        cvec F(static_cast<size_t>(N) * n);
        for (int i = 1; i <= N; ++i) {
            rvec fi = f(t, x_lo + i * h);
            for (int c = 0; c < n; ++c) F[static_cast<size_t>(i - 1) * n + c] = fi[c];
        }
        rvec bl = psi_lo(t), bh = psi_hi(t);
        for (int row = 0; row < n; ++row) {
            double accl = 0.0, acch = 0.0;
            for (int j = 0; j < n; ++j) {
                accl += B(row, j).real() * bl[j];
                acch += B(row, j).real() * bh[j];
            }
            F[row] -= lo_w * accl;
            F[static_cast<size_t>(N - 1) * n + row] -= hi_w * acch;
        }
        return F;
    };
    return mol;
}

double truncation_residual(const PdaeProblem& p, const GridSpec& grid, double t) {
    if (!p.exact || !p.exact_t)
        throw PdaeError(ErrorCode::NoExactSolution, "truncation residual needs the exact solution");
    auto mol = assemble(p, grid);
    rvec u = exact_on_grid(p, t, grid);
    cvec U(u.begin(), u.end());
    cvec Ut(mol.dim);
    for (int i = 1; i <= grid.N; ++i) {
        rvec v = p.exact_t(t, p.x_lo + i * grid.h);
        for (int c = 0; c < p.n; ++c) Ut[static_cast<size_t>(i - 1) * p.n + c] = v[c];
    }
    cvec lhs = matvec(mol.mass, Ut);
    cvec rhs = matvec(mol.stiffness, U);
    cvec F = mol.forcing(t);
    double worst = 0.0;
    for (int i = 0; i < mol.dim; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i] - F[i]));
    return worst;
}

} // namespace pdae
