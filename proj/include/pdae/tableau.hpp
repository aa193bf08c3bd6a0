#pragma once

#include "pdae/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdae {

// Implicit Runge-Kutta tableau. Coefficients are real; `a` reuses the complex
// Matrix type so stage-matrix assembly needs no conversion.
struct ButcherTableau {
    int s = 0;
    Matrix a;               // s x s
    std::vector<double> b;  // weights
    std::vector<double> c;  // abscissae
    int p = 0;              // classical order
    int q = 0;              // stage order
    std::string label;
};

enum class Regime { Index01Inhomog, Index01Homog, HighIndex };

const char* regime_name(Regime r);

struct OrderPrediction {
    double p_star = 0.0;    // epsilon treated as 0+ (see epsilon_flag)
    int p_nu = 0;           // classical DAE order for the given time index
    Regime regime = Regime::Index01Inhomog;
    bool epsilon_flag = false; // p_star carries a "-eps" term
};

ButcherTableau backward_euler();

// Radau IIA collocation tableau, s in {1,2,3}; s=1 degenerates to backward Euler.
ButcherTableau radau_iia(int s);

// R(z) = 1 + z b^T (I - z A)^{-1} 1
cplx stability_function(const ButcherTableau& t, cplx z);

// R(inf) = 1 - b^T A^{-1} 1
double r_at_infinity(const ButcherTableau& t);

// B(k) for k=1..p and C(k) for k=1..q, each to 1e-10
bool check_simplifying_conditions(const ButcherTableau& t, int p, int q);

// Temporal convergence order predictor for the linear PDAE class. `nu_dt` is
// the differential time index; `bc_vanishing` marks boundary data whose
// relevant time derivatives vanish (the "homogeneous" estimate applies).
// For tableaus outside the built-in catalogue supply `p_nu_override`.
OrderPrediction predict_order(const ButcherTableau& t, int nu_dt, bool bc_vanishing,
                              std::optional<int> p_nu_override = std::nullopt);

} // namespace pdae
