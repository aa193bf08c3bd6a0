#include "pdae/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace pdae {

namespace {

bool invertible(const Matrix& m, LuFactors* out = nullptr) {
    try {
        LuFactors f = lu_factor(m);
        if (out) *out = std::move(f);
        return true;
    } catch (const PdaeError& e) {
        if (e.code() == ErrorCode::SingularMatrix) return false;
        throw;
    }
}

// index decisions are discrete, so they use a tolerance stricter than the
// linalg default and flag anything within two orders of magnitude of it
constexpr double kRankTol = 1e-8;
constexpr double kTieFactor = 100.0;

// Rank of one power of the normalized T. The threshold gets an absolute
// floor at T's own scale: high powers of a nilpotent part decay to pure
// roundoff, and judging that noise relative to its own max would read as
// full rank and the rank sequence would never settle.
int guarded_rank(const Matrix& m, bool& borderline) {
    const double ma = max_abs(m);
    if (ma == 0.0) return 0;
    RankDetail d = numerical_rank_detail(m, kRankTol * std::max(1.0, ma) / ma);
    if (d.smallest_accepted > 0.0 && d.smallest_accepted < kTieFactor * d.threshold)
        borderline = true;
    if (d.largest_rejected > d.threshold / kTieFactor) borderline = true;
    return d.rank;
}

void require_pencil_shapes(const Matrix& a, const Matrix& dk) {
    if (a.rows != a.cols || dk.rows != dk.cols || a.rows != dk.rows)
        throw PdaeError(ErrorCode::DimensionMismatch,
                        "pencil needs two square matrices of equal size");
}

uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

bool pencil_regular(const Matrix& a, const Matrix& dk) {
    require_pencil_shapes(a, dk);
    const int n = a.rows;
    // the irrational offset keeps the samples away from small-integer roots
    for (int j = 0; j <= n; ++j) {
        const cplx lambda(j + 0.6180339887498949, 0.0);
        if (invertible(dk + lambda * a)) return true;
    }
    return false;
}

int pencil_index(const Matrix& a, const Matrix& dk, bool* borderline) {
    require_pencil_shapes(a, dk);
    const int n = a.rows;

    // shift scan 0, 1, -1, 2, -2, ...: det(cA + Dk) of a regular pencil has
    // at most n roots, so n+1 distinct candidates cannot all land on one
    LuFactors shifted;
    bool found = false;
    for (int m = 0; m <= n + 1 && !found; ++m) {
        for (double c : {static_cast<double>(m), static_cast<double>(-m)}) {
            if (invertible(dk + cplx(c) * a, &shifted)) {
                found = true;
                break;
            }
            if (m == 0) break;
        }
    }
    if (!found)
        throw PdaeError(ErrorCode::IrregularPencil,
                        "det(c A + Dk) vanished at every sampled shift c");

    Matrix t(n, n);
    for (int j = 0; j < n; ++j) {
        cvec col(n);
        for (int i = 0; i < n; ++i) col[i] = a(i, j);
        cvec x = lu_solve(shifted, std::move(col));
        for (int i = 0; i < n; ++i) t(i, j) = x[i];
    }
    const double scale = max_abs(t);
    if (scale > 0.0) t = cplx(1.0 / scale) * t;

    // smallest nu with rank(T^nu) == rank(T^{nu+1}); rank(T^0) = n, and the
    // rank drops strictly until the generalized nullspace at 0 is exhausted
    bool tie = false;
    int prev = n;
    int nu = 0;
    Matrix power = t;
    while (true) {
        const int r = guarded_rank(power, tie);
        if (r == prev) break;
        prev = r;
        ++nu;
        if (nu > n)
            throw PdaeError(ErrorCode::IrregularPencil, "rank sequence failed to stabilize");
        power = power * t;
    }
    if (borderline) *borderline = tie;
    return nu;
}

IndexReport differential_time_index(const PdaeProblem& p, const GridSpec& grid,
                                    bool full_sweep) {
    if (grid.N < 1)
        throw PdaeError(ErrorCode::DimensionMismatch, "grid needs an interior point");
    const cvec lambda = p_spectrum(grid.N, grid.h, p.r, grid.delta);
    const int N = grid.N;

    std::set<int> modes;
    if (full_sweep) {
        for (int k = 1; k <= N; ++k) modes.insert(k);
    } else {
        modes.insert(1);
        modes.insert((N + 1) / 2);
        modes.insert(N);
        // fixed seed: the mode choice must not wobble between runs
        uint64_t state = 0x85ebca6b9e3779b9ULL;
        const size_t want = std::min<size_t>(static_cast<size_t>(N), modes.size() + 5);
        while (modes.size() < want)
            modes.insert(1 + static_cast<int>(splitmix64(state) % static_cast<uint64_t>(N)));
    }

    IndexReport rep;
    rep.sampled = modes.size() < static_cast<size_t>(N);
    for (int k : modes) {
        PencilReport pr;
        pr.k = k;
        pr.lambda_k = lambda[k - 1];
        const Matrix dk = (-pr.lambda_k) * p.B + cplx(-1.0) * p.C;
        pr.regular = pencil_regular(p.A, dk);
        if (!pr.regular)
            throw PdaeError(ErrorCode::IrregularPencil,
                            "mode k=" + std::to_string(k) +
                                ": pencil {Dk + lambda A} is singular for every lambda");
        pr.index = pencil_index(p.A, dk, &pr.borderline);
        rep.per_mode.push_back(pr);
    }

    rep.nu_dt = 0;
    for (const PencilReport& pr : rep.per_mode) {
        rep.nu_dt = std::max(rep.nu_dt, pr.index);
        if (pr.index != rep.per_mode.front().index) rep.uniform = false;
    }
    return rep;
}

} // namespace pdae
