#pragma once

#include "pdae/discretize.hpp"
#include "pdae/tableau.hpp"

#include <vector>

namespace pdae {

// LU of the compact stage matrix I_s (x) M - tau * (A (x) D), built once per
// (mol, tableau, tau) triple and reused by every step. Above the dense size
// limit the matrix is assembled band-only under a grid-outermost reordering
// of the stage vector (all stages and components of one grid point kept
// adjacent), which makes it block-tridiagonal with bandwidth 2*s*n - 1.
struct StageFactorization {
    const MolSystem* mol = nullptr;
    const ButcherTableau* tableau = nullptr;
    double tau = 0.0;
    bool banded = false;
    LuFactors dense;
    BandedLu band;
};

StageFactorization factor_stage_matrix(const MolSystem& mol, const ButcherTableau& t,
                                       double tau, bool force_banded = false);

// One constant step t_m -> t_m + tau: solve the stage system with right-hand
// side 1l_s (x) (D U_m) + stacked F(t_m + c_i tau), then U_m + tau (b^T (x) I) K.
cvec step(const StageFactorization& f, const cvec& um, double tm);

struct Trajectory {
    std::vector<double> times;
    std::vector<cvec> states; // all visited states, or just the final one
    long steps_taken = 0;
};

// Runs (te - t0)/tau constant steps from the problem's initial data with one
// shared factorization. The step count must be an integer to 1e-9 relative.
Trajectory integrate(const PdaeProblem& p, const GridSpec& grid, const ButcherTableau& t,
                     double tau, bool keep_trajectory = false);

} // namespace pdae
