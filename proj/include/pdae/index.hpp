#pragma once

#include "pdae/discretize.hpp"
#include "pdae/linalg.hpp"
#include "pdae/problem.hpp"

#include <vector>

namespace pdae {

// Verdict for one matrix pencil {Dk + lambda A}.
struct PencilReport {
    int k = 0;               // spatial mode (1-based); 0 for standalone pencils
    cplx lambda_k = 0.0;
    bool regular = false;
    int index = 0;           // Kronecker/nilpotency index
    bool borderline = false; // a rank decision sat within 100x of the cutoff
};

struct IndexReport {
    std::vector<PencilReport> per_mode;
    int nu_dt = 0;
    bool uniform = true; // every inspected mode agreed
    bool sampled = false; // true when only a subset of the N modes was inspected
};

// True iff det(Dk + lambda A) is not identically zero, decided by sampling
// n+1 distinct lambda values (a degree-<=n polynomial cannot vanish on all).
bool pencil_regular(const Matrix& a, const Matrix& dk);

// Kronecker index of the regular pencil {Dk + lambda A}: the nilpotency index
// of T = (cA + Dk)^-1 A at eigenvalue 0, via rank stabilization of T's powers.
// 0 iff A is invertible. `borderline`, if given, reports rank near-ties.
int pencil_index(const Matrix& a, const Matrix& dk, bool* borderline = nullptr);

// Differential time index: pencil_index over Dk = -lambda_k B - C for the
// p_spectrum modes. Inspects k in {1, ceil(N/2), N} plus five fixed
// pseudo-random picks unless full_sweep asks for all N.
IndexReport differential_time_index(const PdaeProblem& p, const GridSpec& grid,
                                    bool full_sweep = false);

} // namespace pdae
