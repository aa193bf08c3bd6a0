#pragma once

#include "pdae/index.hpp"
#include "pdae/integrate.hpp"
#include "pdae/tableau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdae {

// How the final-time error is referenced: against the exact solution when one
// is attached, or against a rerun with tau/4 on the same grid. FineTau keeps
// the spatial discretization error out of the difference, which is what makes
// temporal orders measurable once the tau-error drops below the h-floor.
enum class RefMode { Auto, Exact, FineTau };

const char* ref_mode_name(RefMode m);

struct ErrorRecord {
    int h_exponent = 0;
    int tau_exponent = 0;
    int N = 0;
    long M_e = 0;
    double error = 0.0;
    RefMode reference_kind = RefMode::Exact; // Exact or FineTau, never Auto
};

struct CellOutcome {
    std::optional<ErrorRecord> record;
    std::string failure;               // error text when the cell failed
    std::optional<double> order;       // vs the previous tau column
    bool floor_flagged = false;        // error ratio < 2^0.2: h-floor dominates
};

struct ConvergenceTable {
    std::string problem_label;
    std::string tableau_label;
    double h_base = 0.1;
    double tau_base = 0.1;
    double delta = 0.5;
    std::vector<int> h_exponents;
    std::vector<int> tau_exponents;
    std::vector<std::vector<CellOutcome>> cells; // [h row][tau column]
    int nu_dt = -1;
    std::optional<OrderPrediction> predicted;
    std::string predicted_note; // set when prediction is unavailable
};

// sqrt(h * sum |v_i|^2)
double discrete_l2(const cvec& v, double h);

ErrorRecord final_error(const PdaeProblem& p, const GridSpec& grid, const ButcherTableau& t,
                        double tau, RefMode ref = RefMode::Auto);

// order_j = log2(error_{j-1} / error_j); throws NonpositiveError on any
// nonpositive entry
std::vector<double> observed_orders(const std::vector<double>& errors);

// boundary-derivative flag feeding predict_order: the vanishing order m must
// undercut the stage order by at most one (m <= q + 1)
bool bc_vanishing_for(const PdaeProblem& p, const ButcherTableau& t);

ConvergenceTable run_sweep(const PdaeProblem& p, const ButcherTableau& t,
                           const std::vector<int>& h_exponents,
                           const std::vector<int>& tau_exponents, double h_base,
                           double tau_base, double delta = 0.5, RefMode ref = RefMode::Auto,
                           int jobs = 1);

// Canned sweeps that reproduce the reference order tables this library is
// validated against, with the expected printed orders and tolerance bands.
struct TablePreset {
    std::string name;
    BuiltinId problem = BuiltinId::Index3BtCs;
    double coil_excite = 0.0; // only for the coil problem
    int stages = 1;           // 1 = backward Euler, else Radau IIA
    double h_base = 0.1;
    double tau_base = 0.1;
    double delta = 0.5;
    std::vector<int> h_exponents;
    std::vector<int> tau_exponents;
    RefMode ref = RefMode::Auto;
    std::vector<std::vector<double>> expected; // [h row][tau column - 1]
    // |observed - expected| <= pm_tol, or observed in [band_lo, band_hi]
    double pm_tol = 0.05;
    bool absolute_band = false;
    double band_lo = 0.0;
    double band_hi = 0.0;
    std::string note;
};

const std::vector<TablePreset>& table_presets();
const TablePreset* preset_by_name(const std::string& name);

PdaeProblem preset_problem(const TablePreset& preset);
ButcherTableau preset_tableau(const TablePreset& preset);
ConvergenceTable run_preset(const TablePreset& preset, int jobs = 1);

struct PresetComparison {
    bool pass = true;
    int cells_checked = 0;
    double max_deviation = 0.0; // vs expected (pm mode only)
    std::vector<std::string> mismatches;
};

PresetComparison compare_to_expected(const ConvergenceTable& table, const TablePreset& preset);

} // namespace pdae
