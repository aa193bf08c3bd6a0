#include "pdae/cli.hpp"

#include "pdae/index.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace pdae {
namespace {

using nlohmann::json;

std::string fnum(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// reference mode actually used, read off the first computed cell
const char* table_reference(const ConvergenceTable& t) {
    for (const auto& row : t.cells)
        for (const auto& c : row)
            if (c.record) return ref_mode_name(c.record->reference_kind);
    return "auto";
}

ButcherTableau tableau_for(const std::string& name) {
    if (name == "euler") return backward_euler();
    if (name == "radau2") return radau_iia(2);
    if (name == "radau3") return radau_iia(3);
    throw PdaeError(ErrorCode::ConfigError,
                    "unknown tableau '" + name + "' (expected euler, radau2, radau3)");
}

GridSpec analysis_grid(const PdaeProblem& p, double h, double delta) {
    if (h <= 0.0) throw PdaeError(ErrorCode::ConfigError, "h must be positive");
    const double real = (p.x_hi - p.x_lo) / h;
    const long npts = std::lround(real);
    if (npts < 2 || std::abs(real - static_cast<double>(npts)) > 1e-9 * real)
        throw PdaeError(ErrorCode::ConfigError,
                        "h = " + fnum(h, "%g") + " does not divide the domain of '" + p.label + "'");
    return make_grid(p, static_cast<int>(npts) - 1, delta);
}

bool r_axis_clear(const ButcherTableau& t) {
    for (double mag : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1e2, 1e3})
        for (double sign : {1.0, -1.0})
            if (std::abs(stability_function(t, cplx(0.0, sign * mag)) - 1.0) <= 1e-9) return false;
    return true;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw PdaeError(ErrorCode::ConfigError, "cannot open output path '" + path + "'");
    f << text;
}

std::string cell_order_text(const CellOutcome& c) {
    if (!c.order) return "-";
    return fnum(*c.order, "%.2f") + std::string(c.floor_flagged ? "*" : "");
}

} // namespace

PdaeProblem problem_from_config(const SweepConfig& cfg) {
    auto id = builtin_from_name(cfg.problem);
    if (!id)
        throw PdaeError(ErrorCode::ConfigError, "unknown problem '" + cfg.problem +
                                                    "' (see `pdae-lab list`)");
    if (*id == BuiltinId::Coil) return coil_problem(cfg.coil);
    return builtin(*id);
}

ButcherTableau tableau_from_name(const std::string& name) { return tableau_for(name); }

std::string render_markdown(const ConvergenceTable& t) {
    std::ostringstream os;
    os << "# sweep: " << t.problem_label << " + " << t.tableau_label << "\n\n";
    os << "- h_base " << fnum(t.h_base, "%g") << ", tau_base " << fnum(t.tau_base, "%g")
       << ", delta " << fnum(t.delta, "%g") << ", reference " << table_reference(t) << "\n";
    os << "- nu_dt " << t.nu_dt;
    if (t.predicted) {
        os << ", predicted p_star " << fnum(t.predicted->p_star, "%.2f") << " (regime "
           << regime_name(t.predicted->regime)
           << (t.predicted->epsilon_flag ? ", epsilon-reduced" : "") << ")";
    }
    os << "\n";
    if (!t.predicted_note.empty()) os << "- prediction unavailable: " << t.predicted_note << "\n";

    const std::string corner =
        fnum(t.h_base, "%g") + " h⁻¹ \\ " + fnum(t.tau_base, "%g") + " τ⁻¹";
    auto header = [&] {
        os << "| " << corner << " |";
        for (int j : t.tau_exponents) os << " 2^" << j << " |";
        os << "\n|" << std::string(corner.size() + 2, '-') << "|";
        for (size_t j = 0; j < t.tau_exponents.size(); ++j) os << "---|";
        os << "\n";
    };

    os << "\n## errors\n\n";
    header();
    for (size_t i = 0; i < t.h_exponents.size(); ++i) {
        os << "| 2^" << t.h_exponents[i] << " |";
        for (const auto& c : t.cells[i])
            os << " " << (c.record ? fnum(c.record->error, "%.3e") : "-") << " |";
        os << "\n";
    }

    os << "\n## observed orders\n\n";
    header();
    bool any_floor = false;
    for (size_t i = 0; i < t.h_exponents.size(); ++i) {
        os << "| 2^" << t.h_exponents[i] << " |";
        for (const auto& c : t.cells[i]) {
            os << " " << cell_order_text(c) << " |";
            any_floor = any_floor || c.floor_flagged;
        }
        os << "\n";
    }
    if (any_floor) os << "\n(* order at the spatial accuracy floor)\n";

    bool any_fail = false;
    for (const auto& row : t.cells)
        for (const auto& c : row) any_fail = any_fail || !c.failure.empty();
    if (any_fail) {
        os << "\n## failures\n\n";
        for (size_t i = 0; i < t.cells.size(); ++i)
            for (size_t j = 0; j < t.cells[i].size(); ++j)
                if (!t.cells[i][j].failure.empty())
                    os << "- h_exp " << t.h_exponents[i] << ", tau_exp " << t.tau_exponents[j]
                       << ": " << t.cells[i][j].failure << "\n";
    }
    return os.str();
}

std::string render_csv(const ConvergenceTable& t) {
    std::ostringstream os;
    os << "# pdae-lab sweep\n";
    os << "# problem = " << t.problem_label << "\n";
    os << "# tableau = " << t.tableau_label << "\n";
    os << "# h_base = " << fnum(t.h_base, "%g") << "\n";
    os << "# tau_base = " << fnum(t.tau_base, "%g") << "\n";
    os << "# delta = " << fnum(t.delta, "%g") << "\n";
    os << "# reference = " << table_reference(t) << "\n";
    os << "# nu_dt = " << t.nu_dt << "\n";
    if (t.predicted) {
        os << "# p_star = " << fnum(t.predicted->p_star, "%.2f") << "\n";
        os << "# regime = " << regime_name(t.predicted->regime) << "\n";
        os << "# epsilon = " << (t.predicted->epsilon_flag ? "true" : "false") << "\n";
    }
    if (!t.predicted_note.empty()) os << "# prediction_error = " << t.predicted_note << "\n";

    auto header = [&] {
        os << "h_exp";
        for (int j : t.tau_exponents) os << "," << j;
        os << "\n";
    };
    os << "# stanza: errors\n";
    header();
    for (size_t i = 0; i < t.h_exponents.size(); ++i) {
        os << t.h_exponents[i];
        for (const auto& c : t.cells[i]) os << "," << (c.record ? fnum(c.record->error, "%.12e") : "");
        os << "\n";
    }
    os << "# stanza: orders\n";
    header();
    for (size_t i = 0; i < t.h_exponents.size(); ++i) {
        os << t.h_exponents[i];
        for (const auto& c : t.cells[i]) os << "," << (c.order ? fnum(*c.order, "%.6f") : "");
        os << "\n";
    }
    for (size_t i = 0; i < t.cells.size(); ++i)
        for (size_t j = 0; j < t.cells[i].size(); ++j) {
            if (t.cells[i][j].floor_flagged)
                os << "# floor: h_exp=" << t.h_exponents[i] << " tau_exp=" << t.tau_exponents[j]
                   << "\n";
            if (!t.cells[i][j].failure.empty())
                os << "# failed: h_exp=" << t.h_exponents[i] << " tau_exp=" << t.tau_exponents[j]
                   << " " << t.cells[i][j].failure << "\n";
        }
    return os.str();
}

std::string render_json(const ConvergenceTable& t) {
    json j;
    j["problem"] = t.problem_label;
    j["tableau"] = t.tableau_label;
    j["h_base"] = t.h_base;
    j["tau_base"] = t.tau_base;
    j["delta"] = t.delta;
    j["reference"] = table_reference(t);
    j["nu_dt"] = t.nu_dt;
    if (t.predicted)
        j["prediction"] = {{"p_star", t.predicted->p_star},
                           {"p_nu", t.predicted->p_nu},
                           {"regime", regime_name(t.predicted->regime)},
                           {"epsilon", t.predicted->epsilon_flag}};
    else
        j["prediction"] = nullptr;
    if (!t.predicted_note.empty()) j["prediction_note"] = t.predicted_note;
    j["h_exponents"] = t.h_exponents;
    j["tau_exponents"] = t.tau_exponents;
    json rows = json::array();
    for (size_t i = 0; i < t.cells.size(); ++i) {
        json row = json::array();
        for (size_t jj = 0; jj < t.cells[i].size(); ++jj) {
            const auto& c = t.cells[i][jj];
            json cell;
            cell["h_exp"] = t.h_exponents[i];
            cell["tau_exp"] = t.tau_exponents[jj];
            if (c.record) {
                cell["N"] = c.record->N;
                cell["M_e"] = c.record->M_e;
                cell["error"] = c.record->error;
                cell["reference"] = ref_mode_name(c.record->reference_kind);
            }
            cell["order"] = c.order ? json(*c.order) : json(nullptr);
            cell["floor_flagged"] = c.floor_flagged;
            if (!c.failure.empty()) cell["failure"] = c.failure;
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    j["cells"] = rows;
    return j.dump(2) + "\n";
}

namespace {

std::string render(const ConvergenceTable& t, const std::string& format) {
    if (format == "csv") return render_csv(t);
    if (format == "json") return render_json(t);
    if (format == "markdown") return render_markdown(t);
    throw PdaeError(ErrorCode::ConfigError, "unknown format '" + format + "'");
}

const char* builtin_note(BuiltinId id) {
    switch (id) {
    case BuiltinId::Index3BtCs:
        return "three-field cascade with a manufactured space-time solution";
    case BuiltinId::RadauIndex1Inhomog:
        return "diffusion coupled to an algebraic field, inhomogeneous boundary data";
    case BuiltinId::RadauIndex1Homog4:
        return "same coupling, boundary time-derivatives vanish through order 4";
    case BuiltinId::Coil:
        return "transmission-line model with two algebraic constraints "
               "(--coil-excite adds a manufactured solution)";
    }
    return "";
}

int cmd_list(const std::string& format, std::ostream& out) {
    json arr = json::array();
    std::ostringstream text;
    for (BuiltinId id : {BuiltinId::Index3BtCs, BuiltinId::RadauIndex1Inhomog,
                         BuiltinId::RadauIndex1Homog4, BuiltinId::Coil}) {
        PdaeProblem p = builtin(id);
        IndexReport rep = differential_time_index(p, make_grid(p, 9));
        arr.push_back({{"name", builtin_name(id)},
                       {"n", p.n},
                       {"nu_dt", rep.nu_dt},
                       {"note", builtin_note(id)}});
        char line[256];
        std::snprintf(line, sizeof line, "%-24s n=%d  nu_dt=%d  %s\n", builtin_name(id), p.n,
                      rep.nu_dt, builtin_note(id));
        text << line;
    }
    if (format == "json")
        out << arr.dump(2) << "\n";
    else
        out << text.str();
    return 0;
}

struct AnalyzeOpts {
    std::string problem;
    std::string tableau = "radau3";
    std::string format = "text";
    double h_base = 0.1;
    double delta = 0.5;
    bool full_sweep = false;
    CoilParams coil;
};

int cmd_analyze(const AnalyzeOpts& o, std::ostream& out) {
    SweepConfig pc;
    pc.problem = o.problem;
    pc.coil = o.coil;
    PdaeProblem p = problem_from_config(pc);
    ButcherTableau t = tableau_for(o.tableau);
    GridSpec g = analysis_grid(p, o.h_base, o.delta);
    IndexReport rep = differential_time_index(p, g, o.full_sweep);

    const bool lstable = std::abs(r_at_infinity(t)) <= 1e-12;
    const bool areg = [&] {
        try {
            lu_factor(t.a);
            return true;
        } catch (const PdaeError&) {
            return false;
        }
    }();
    const bool rok = r_axis_clear(t);
    const bool qok = t.q >= rep.nu_dt - 2;
    const bool vanish = bc_vanishing_for(p, t);
    int borderline = 0;
    for (const auto& m : rep.per_mode) borderline += m.borderline ? 1 : 0;

    std::optional<OrderPrediction> pred;
    std::string pred_err;
    try {
        pred = predict_order(t, rep.nu_dt, vanish);
    } catch (const PdaeError& e) {
        pred_err = e.what();
    }

    if (o.format == "json") {
        json j;
        j["problem"] = p.label;
        j["n"] = p.n;
        j["tableau"] = {{"label", t.label}, {"s", t.s}, {"p", t.p}, {"q", t.q}};
        j["grid"] = {{"N", g.N}, {"h", g.h}, {"delta", g.delta}};
        j["pencil"] = {{"regular", true},
                       {"uniform", rep.uniform},
                       {"sampled", rep.sampled},
                       {"modes_inspected", rep.per_mode.size()},
                       {"borderline", borderline}};
        j["nu_dt"] = rep.nu_dt;
        j["hypotheses"] = {{"l_stable", lstable},
                           {"stage_matrix_regular", areg},
                           {"r_axis_clear", rok},
                           {"q_large_enough", qok}};
        j["bc_vanishing"] = vanish;
        if (pred)
            j["prediction"] = {{"p_star", pred->p_star},
                               {"p_nu", pred->p_nu},
                               {"regime", regime_name(pred->regime)},
                               {"epsilon", pred->epsilon_flag}};
        else {
            j["prediction"] = nullptr;
            j["prediction_error"] = pred_err;
        }
        out << j.dump(2) << "\n";
    } else {
        out << "problem: " << p.label << " (n=" << p.n << ")\n";
        out << "tableau: " << t.label << " (s=" << t.s << ", p=" << t.p << ", q=" << t.q << ")\n";
        out << "grid: N=" << g.N << ", h=" << fnum(g.h, "%g") << ", delta="
            << fnum(g.delta, "%g") << "\n";
        out << "pencil: regular at all inspected modes ("
            << (rep.sampled ? "subsampled" : "full sweep") << ", " << rep.per_mode.size()
            << " modes" << (rep.uniform ? ", uniform index" : ", index NOT uniform") << ")\n";
        if (borderline > 0)
            out << "warning: " << borderline << " borderline rank decision(s) near the cutoff\n";
        out << "nu_dt: " << rep.nu_dt << "\n";
        auto yn = [](bool b) { return b ? "yes" : "no"; };
        out << "hypotheses:\n";
        out << "  L-stable (R(inf) = 0): " << yn(lstable) << "\n";
        out << "  stage matrix regular: " << yn(areg) << "\n";
        out << "  R(it) != 1 on sampled imaginary axis: " << yn(rok) << "\n";
        out << "  q >= nu_dt - 2: " << yn(qok) << " (q=" << t.q << ", nu_dt=" << rep.nu_dt
            << ")\n";
        out << "boundary time-derivatives vanishing (m <= q+1): " << yn(vanish) << "\n";
        if (pred)
            out << "predicted temporal order: p_star = " << fnum(pred->p_star, "%.2f")
                << " (p_nu=" << pred->p_nu << ", regime " << regime_name(pred->regime)
                << (pred->epsilon_flag ? ", epsilon-reduced" : "") << ")\n";
        else
            out << "prediction unavailable: " << pred_err << "\n";
    }
    return pred ? 0 : 1;
}

const TablePreset& reproduce_target(const std::string& name) {
    static const std::map<std::string, std::string> alias = {
        {"table1", "euler-cascade"},
        {"table2", "radau3-inhomog"},
        {"tabelle4", "radau3-homog4"},
        {"tabelle6", "radau3-coil"},
    };
    auto it = alias.find(name);
    const std::string resolved = it == alias.end() ? name : it->second;
    const TablePreset* pre = preset_by_name(resolved);
    if (!pre)
        throw PdaeError(ErrorCode::ConfigError,
                        "unknown reproduction target '" + name +
                            "' (expected table1, table2, tabelle4, tabelle6)");
    return *pre;
}

int cmd_reproduce(const std::string& name, const std::string& format, const std::string& outpath,
                  int jobs, std::ostream& out, std::ostream& err) {
    const TablePreset& pre = reproduce_target(name);
    ConvergenceTable table = run_preset(pre, jobs);
    PresetComparison cmp = compare_to_expected(table, pre);

    std::string text;
    if (format == "json") {
        json j = json::parse(render_json(table));
        j["preset"] = pre.name;
        if (!pre.note.empty()) j["note"] = pre.note;
        j["comparison"] = {{"pass", cmp.pass},
                           {"cells_checked", cmp.cells_checked},
                           {"max_deviation", cmp.max_deviation},
                           {"mismatches", cmp.mismatches}};
        text = j.dump(2) + "\n";
    } else if (format == "csv") {
        text = render_csv(table);
        std::ostringstream os;
        if (!pre.note.empty()) os << "# note: " << pre.note << "\n";
        for (const auto& m : cmp.mismatches) os << "# mismatch: " << m << "\n";
        os << "# comparison: cells=" << cmp.cells_checked << " max_dev="
           << fnum(cmp.max_deviation, "%.6f") << " " << (cmp.pass ? "PASS" : "FAIL") << "\n";
        text += os.str();
    } else {
        text = render_markdown(table);
        std::ostringstream os;
        os << "\n## comparison\n\n";
        os << "- preset: " << pre.name << "\n";
        if (!pre.note.empty()) os << "- note: " << pre.note << "\n";
        os << "- cells checked: " << cmp.cells_checked << "\n";
        os << "- max |observed - expected|: " << fnum(cmp.max_deviation, "%.3f") << "\n";
        for (const auto& m : cmp.mismatches) os << "- mismatch: " << m << "\n";
        os << "\n**" << (cmp.pass ? "PASS" : "FAIL") << "**\n";
        text += os.str();
    }
    emit(text, outpath, out);
    if (!cmp.pass)
        for (const auto& m : cmp.mismatches) err << "mismatch: " << m << "\n";
    return cmp.pass ? 0 : 1;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.problem.empty())
        throw PdaeError(ErrorCode::ConfigError, "no problem selected (use --problem)");
    if (cfg.h_exponents.empty() || cfg.tau_exponents.empty())
        throw PdaeError(ErrorCode::ConfigError,
                        "h and tau exponent lists must be non-empty (--h-exps, --tau-exps)");
    PdaeProblem p = problem_from_config(cfg);
    ButcherTableau t = tableau_for(cfg.tableau);
    ConvergenceTable table = run_sweep(p, t, cfg.h_exponents, cfg.tau_exponents, cfg.h_base,
                                       cfg.tau_base, cfg.delta, RefMode::Auto, cfg.jobs);
    emit(render(table, cfg.format), cfg.out, out);

    int failures = 0;
    for (size_t i = 0; i < table.cells.size(); ++i)
        for (size_t j = 0; j < table.cells[i].size(); ++j)
            if (!table.cells[i][j].failure.empty()) {
                err << "cell h_exp=" << table.h_exponents[i] << " tau_exp="
                    << table.tau_exponents[j] << " failed: " << table.cells[i][j].failure << "\n";
                ++failures;
            }
    return failures > 0 ? 1 : 0;
}

std::string strip_ws(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// flat key = value lines, '#'/';' comments, '_' and '-' interchangeable in keys
std::map<std::string, std::string> read_flat_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw PdaeError(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        line = line.substr(0, line.find_first_of("#;"));
        line = strip_ws(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PdaeError(ErrorCode::ConfigError, path + ":" + std::to_string(lineno) +
                                                        ": expected key = value");
        std::string key = strip_ws(line.substr(0, eq));
        for (char& c : key)
            if (c == '_') c = '-';
        const std::string val = strip_ws(line.substr(eq + 1));
        if (key.empty())
            throw PdaeError(ErrorCode::ConfigError,
                            path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

double conf_double(const std::string& key, const std::string& val) {
    try {
        size_t idx = 0;
        const double v = std::stod(val, &idx);
        if (idx == val.size()) return v;
    } catch (const std::exception&) {
    }
    throw PdaeError(ErrorCode::ConfigError, "config key '" + key + "': bad number '" + val + "'");
}

int conf_int(const std::string& key, const std::string& val) {
    try {
        size_t idx = 0;
        const int v = std::stoi(val, &idx);
        if (idx == val.size()) return v;
    } catch (const std::exception&) {
    }
    throw PdaeError(ErrorCode::ConfigError, "config key '" + key + "': bad integer '" + val + "'");
}

std::vector<int> conf_exps(const std::string& key, const std::string& val) {
    std::string spaced = val;
    for (char& c : spaced)
        if (c == ',') c = ' ';
    std::istringstream is(spaced);
    std::vector<int> out;
    int v = 0;
    while (is >> v) out.push_back(v);
    if (out.empty() || !is.eof())
        throw PdaeError(ErrorCode::ConfigError,
                        "config key '" + key + "': bad exponent list '" + val + "'");
    return out;
}

// file values apply only where the command line stayed silent
void apply_config_file(SweepConfig& cfg, const std::string& path,
                       const std::function<bool(const std::string&)>& overridden) {
    static const std::set<std::string> known = {
        "problem", "tableau", "h-base",  "tau-base", "h-exps",      "tau-exps",
        "delta",   "format",  "out",     "jobs",     "coil-l",      "coil-L",
        "coil-C",  "coil-D",  "coil-E",  "coil-excite"};
    auto kv = read_flat_config(path);
    for (const auto& [k, v] : kv)
        if (!known.count(k))
            throw PdaeError(ErrorCode::ConfigError,
                            "unrecognized config key '" + k + "' in " + path);
    auto take = [&](const char* k) -> const std::string* {
        auto it = kv.find(k);
        return (it != kv.end() && !overridden(k)) ? &it->second : nullptr;
    };
    if (auto* v = take("problem")) cfg.problem = *v;
    if (auto* v = take("tableau")) cfg.tableau = *v;
    if (auto* v = take("h-base")) cfg.h_base = conf_double("h-base", *v);
    if (auto* v = take("tau-base")) cfg.tau_base = conf_double("tau-base", *v);
    if (auto* v = take("h-exps")) cfg.h_exponents = conf_exps("h-exps", *v);
    if (auto* v = take("tau-exps")) cfg.tau_exponents = conf_exps("tau-exps", *v);
    if (auto* v = take("delta")) cfg.delta = conf_double("delta", *v);
    if (auto* v = take("format")) cfg.format = *v;
    if (auto* v = take("out")) cfg.out = *v;
    if (auto* v = take("jobs")) cfg.jobs = conf_int("jobs", *v);
    if (auto* v = take("coil-l")) cfg.coil.l = conf_double("coil-l", *v);
    if (auto* v = take("coil-L")) cfg.coil.L = conf_double("coil-L", *v);
    if (auto* v = take("coil-C")) cfg.coil.C = conf_double("coil-C", *v);
    if (auto* v = take("coil-D")) cfg.coil.D = conf_double("coil-D", *v);
    if (auto* v = take("coil-E")) cfg.coil.E = conf_double("coil-E", *v);
    if (auto* v = take("coil-excite")) cfg.coil.excite = conf_double("coil-excite", *v);
}

void add_coil_options(CLI::App* cmd, CoilParams& coil) {
    cmd->add_option("--coil-l", coil.l, "coil line length");
    cmd->add_option("--coil-L", coil.L, "coil inductance per length");
    cmd->add_option("--coil-C", coil.C, "coil capacitance per length");
    cmd->add_option("--coil-D", coil.D, "coil dissipation coefficient");
    cmd->add_option("--coil-E", coil.E, "coil source amplitude");
    cmd->add_option("--coil-excite", coil.excite,
                    "amplitude of the manufactured excitation (0 = stationary)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    // a sweep config file may be passed through the --problem slot; reroute it
    // to --config so the flags-beat-file precedence applies
    std::vector<std::string> argv_s = args;
    for (size_t i = 0; i + 1 < argv_s.size(); ++i)
        if (argv_s[i] == "--problem" && std::filesystem::is_regular_file(argv_s[i + 1]))
            argv_s[i] = "--config";
    for (auto& a : argv_s)
        if (a.rfind("--problem=", 0) == 0 && std::filesystem::is_regular_file(a.substr(10)))
            a = "--config=" + a.substr(10);

    CLI::App app{"method-of-lines workbench for linear PDAEs: index analysis, "
                 "implicit Runge-Kutta integration, and temporal order sweeps",
                 "pdae-lab"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "list builtin problems with their time index");
    std::string list_format = "text";
    list_cmd->add_option("--format", list_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* analyze_cmd =
        app.add_subcommand("analyze", "pencil regularity, nu_dt, and predicted temporal order");
    AnalyzeOpts an;
    analyze_cmd->add_option("--problem", an.problem, "builtin problem name")->required();
    analyze_cmd->add_option("--tableau", an.tableau, "euler, radau2, radau3")
        ->check(CLI::IsMember({"euler", "radau2", "radau3"}));
    analyze_cmd->add_option("--h-base", an.h_base, "grid spacing h");
    analyze_cmd->add_option("--delta", an.delta, "upwind weight of the first-order term");
    analyze_cmd->add_flag("--full-index-sweep", an.full_sweep,
                          "inspect every spatial mode instead of a sample");
    analyze_cmd->add_option("--format", an.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    add_coil_options(analyze_cmd, an.coil);

    auto* sweep_cmd = app.add_subcommand("sweep", "run a (h, tau) refinement sweep");
    SweepConfig cfg;
    std::string sweep_reproduce, sweep_config_path;
    sweep_cmd->add_option("--config", sweep_config_path, "key=value sweep configuration file");
    sweep_cmd->add_option("--problem", cfg.problem, "builtin problem name");
    sweep_cmd->add_option("--tableau", cfg.tableau, "euler, radau2, radau3")
        ->check(CLI::IsMember({"euler", "radau2", "radau3"}));
    sweep_cmd->add_option("--h-base", cfg.h_base, "h = h_base / 2^e");
    sweep_cmd->add_option("--tau-base", cfg.tau_base, "tau = tau_base / 2^j");
    sweep_cmd->add_option("--h-exps", cfg.h_exponents, "h exponent list")->delimiter(',');
    sweep_cmd->add_option("--tau-exps", cfg.tau_exponents, "tau exponent list")->delimiter(',');
    sweep_cmd->add_option("--delta", cfg.delta, "upwind weight of the first-order term");
    sweep_cmd->add_option("--format", cfg.format, "csv, markdown, json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    sweep_cmd->add_option("--out", cfg.out, "write the table to this path instead of stdout");
    sweep_cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = hardware)")
        ->envname("PDAE_LAB_JOBS");
    sweep_cmd->add_option("--reproduce", sweep_reproduce,
                          "run a bundled reference preset instead of a custom sweep");
    add_coil_options(sweep_cmd, cfg.coil);

    auto* rep_cmd = app.add_subcommand("reproduce", "run a bundled reference preset and "
                                                    "compare against its expected orders");
    std::string rep_name, rep_format = "markdown", rep_out;
    int rep_jobs = 0;
    rep_cmd->add_option("name", rep_name, "table1, table2, tabelle4, tabelle6")->required();
    rep_cmd->add_option("--format", rep_format, "csv, markdown, json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}));
    rep_cmd->add_option("--out", rep_out, "write the table to this path instead of stdout");
    rep_cmd->add_option("--jobs", rep_jobs, "worker threads (0 = hardware)")
        ->envname("PDAE_LAB_JOBS");

    std::vector<const char*> argv;
    argv.reserve(argv_s.size());
    for (const auto& s : argv_s) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) return cmd_list(list_format, out);
        if (analyze_cmd->parsed()) return cmd_analyze(an, out);
        if (sweep_cmd->parsed()) {
            if (!sweep_config_path.empty())
                apply_config_file(cfg, sweep_config_path, [&](const std::string& k) {
                    return sweep_cmd->count("--" + k) > 0;
                });
            if (!sweep_reproduce.empty())
                return cmd_reproduce(sweep_reproduce, cfg.format, cfg.out, cfg.jobs, out, err);
            if (cfg.format != "csv" && cfg.format != "markdown" && cfg.format != "json")
                throw PdaeError(ErrorCode::ConfigError, "unknown format '" + cfg.format + "'");
            return cmd_sweep(cfg, out, err);
        }
        if (rep_cmd->parsed()) return cmd_reproduce(rep_name, rep_format, rep_out, rep_jobs, out, err);
        err << app.help();
        return 2;
    } catch (const PdaeError& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    }
}

} // namespace pdae
