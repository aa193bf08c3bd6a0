#pragma once

#include "pdae/convergence.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pdae {

struct SweepConfig {
    std::string problem;      // builtin name, or path to a key=value config file
    std::string tableau = "radau3";
    double h_base = 0.1;
    double tau_base = 0.1;
    std::vector<int> h_exponents;
    std::vector<int> tau_exponents;
    double delta = 0.5;
    CoilParams coil;          // only consulted when problem == "coil"
    std::string format = "markdown"; // csv | markdown | json
    std::string out;          // empty writes to stdout
    int jobs = 0;             // <1 resolves to PDAE_LAB_JOBS, then hardware
};

PdaeProblem problem_from_config(const SweepConfig& cfg);
ButcherTableau tableau_from_name(const std::string& name);

std::string render_markdown(const ConvergenceTable& t);
std::string render_csv(const ConvergenceTable& t);
std::string render_json(const ConvergenceTable& t);

// Entry point shared by the binary and the tests. args[0] is the program
// name. Returns 0 on success, 1 on numerical/acceptance failure, 2 on
// usage or config errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pdae
