#include "pdae/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pdae {

namespace {

constexpr int kDenseLimit = 2000;

// D U exploiting the block-tridiagonal coupling; blocks with |g - g'| > 1
// are structurally zero
cvec apply_stiffness(const MolSystem& mol, const cvec& u) {
    const int n = mol.problem.n, N = mol.grid.N;
    cvec out(static_cast<size_t>(mol.dim));
    for (int g = 0; g < N; ++g) {
        const int glo = g > 0 ? g - 1 : 0;
        const int ghi = g + 1 < N ? g + 1 : N - 1;
        for (int c = 0; c < n; ++c) {
            const int row = g * n + c;
            cplx acc = 0.0;
            for (int gp = glo; gp <= ghi; ++gp)
                for (int cp = 0; cp < n; ++cp)
                    acc += mol.stiffness(row, gp * n + cp) * u[gp * n + cp];
            out[row] = acc;
        }
    }
    return out;
}

// position of (stage i, grid g, component c) in the grid-outermost ordering
inline int banded_pos(int s, int n, int i, int g, int c) { return (g * s + i) * n + c; }

} // namespace

StageFactorization factor_stage_matrix(const MolSystem& mol, const ButcherTableau& t,
                                       double tau, bool force_banded) {
    if (tau <= 0.0)
        throw PdaeError(ErrorCode::ConfigError, "step size must be positive");
    const int s = t.s, nn = mol.dim, n = mol.problem.n, N = mol.grid.N;
    const int dim = s * nn;

    StageFactorization f;
    f.mol = &mol;
    f.tableau = &t;
    f.tau = tau;
    f.banded = force_banded || dim > kDenseLimit;

    if (!f.banded) {
        Matrix sm(dim, dim);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                const cplx aij = t.a(i, j);
                for (int r = 0; r < nn; ++r)
                    for (int c = 0; c < nn; ++c) {
                        cplx v = -tau * aij * mol.stiffness(r, c);
                        if (i == j) v += mol.mass(r, c);
                        sm(i * nn + r, j * nn + c) = v;
                    }
            }
        try {
            f.dense = lu_factor(sm);
        } catch (const PdaeError& e) {
            if (e.code() == ErrorCode::SingularMatrix)
                throw PdaeError(ErrorCode::SingularStageMatrix, e.what());
            throw;
        }
        return f;
    }

    const int half = 2 * s * n - 1; // one grid block each side
    f.band.dim = dim;
    f.band.kl = half;
    f.band.ku = half;
    f.band.ab.assign(static_cast<size_t>(3 * half + 1) * dim, 0.0);
    for (int g = 0; g < N; ++g)
        for (int gp = std::max(0, g - 1); gp <= std::min(N - 1, g + 1); ++gp)
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) {
                    const cplx aij = t.a(i, j);
                    for (int c = 0; c < n; ++c)
                        for (int cp = 0; cp < n; ++cp) {
                            cplx v = -tau * aij * mol.stiffness(g * n + c, gp * n + cp);
                            if (i == j && g == gp) v += mol.mass(g * n + c, g * n + cp);
                            if (v != 0.0)
                                f.band.at(banded_pos(s, n, i, g, c),
                                          banded_pos(s, n, j, gp, cp)) = v;
                        }
                }
    banded_lu_factor(f.band);
    return f;
}

cvec step(const StageFactorization& f, const cvec& um, double tm) {
    const MolSystem& mol = *f.mol;
    const ButcherTableau& t = *f.tableau;
    const int s = t.s, nn = mol.dim, n = mol.problem.n, N = mol.grid.N;
    if (static_cast<int>(um.size()) != nn)
        throw PdaeError(ErrorCode::DimensionMismatch, "state length does not match the grid");

    const cvec du = apply_stiffness(mol, um);
    cvec rhs(static_cast<size_t>(s) * nn);
    for (int i = 0; i < s; ++i) {
        const cvec fi = mol.forcing(tm + t.c[i] * f.tau);
        for (int r = 0; r < nn; ++r) rhs[static_cast<size_t>(i) * nn + r] = du[r] + fi[r];
    }

    cvec k;
    if (!f.banded) {
        k = lu_solve(f.dense, std::move(rhs));
    } else {
        cvec x(rhs.size());
        for (int i = 0; i < s; ++i)
            for (int g = 0; g < N; ++g)
                for (int c = 0; c < n; ++c)
                    x[banded_pos(s, n, i, g, c)] = rhs[static_cast<size_t>(i) * nn + g * n + c];
        banded_lu_solve(f.band, x);
        k.resize(rhs.size());
        for (int i = 0; i < s; ++i)
            for (int g = 0; g < N; ++g)
                for (int c = 0; c < n; ++c)
                    k[static_cast<size_t>(i) * nn + g * n + c] = x[banded_pos(s, n, i, g, c)];
    }

    cvec out = um;
    for (int i = 0; i < s; ++i) {
        const cplx w = f.tau * t.b[i];
        for (int r = 0; r < nn; ++r) out[r] += w * k[static_cast<size_t>(i) * nn + r];
    }
    return out;
}

Trajectory integrate(const PdaeProblem& p, const GridSpec& grid, const ButcherTableau& t,
                     double tau, bool keep_trajectory) {
    if (tau <= 0.0)
        throw PdaeError(ErrorCode::ConfigError, "step size must be positive");
    const double m_real = (p.te - p.t0) / tau;
    const long me = std::lround(m_real);
    if (me < 1 || std::abs(m_real - static_cast<double>(me)) > 1e-9 * std::abs(m_real))
        throw PdaeError(ErrorCode::NonintegerStepCount,
                        "(te - t0)/tau = " + std::to_string(m_real) + " is not a step count");

    MolSystem mol = assemble(p, grid);
    StageFactorization fact = factor_stage_matrix(mol, t, tau);

    rvec u0 = initial_on_grid(p, grid);
    cvec u(u0.begin(), u0.end());

    Trajectory traj;
    traj.steps_taken = me;
    if (keep_trajectory) {
        traj.times.reserve(static_cast<size_t>(me) + 1);
        traj.states.reserve(static_cast<size_t>(me) + 1);
        traj.times.push_back(p.t0);
        traj.states.push_back(u);
    }
    for (long m = 0; m < me; ++m) {
        u = step(fact, u, p.t0 + static_cast<double>(m) * tau);
        if (keep_trajectory) {
            traj.times.push_back(p.t0 + static_cast<double>(m + 1) * tau);
            traj.states.push_back(u);
        }
    }
    if (!keep_trajectory) {
        traj.times.push_back(p.te);
        traj.states.push_back(std::move(u));
    }
    return traj;
}

} // namespace pdae
