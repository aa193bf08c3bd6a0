// Acceptance harness: one line per criterion, nonzero exit if any fails.
#include "pdae/convergence.hpp"
#include "pdae/index.hpp"
#include "pdae/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace pdae;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& text) {
    if (!pass) ++failures;
    std::printf("[%2d] %s  %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
}

void note(const std::string& text) { std::printf("      note: %s\n", text.c_str()); }

std::string fnum(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// ---------- criteria 1-4: bundled reference sweeps ----------

struct PresetRun {
    const TablePreset* pre = nullptr;
    ConvergenceTable table;
    PresetComparison cmp;
};

PresetRun run_named(const char* name) {
    PresetRun r;
    r.pre = preset_by_name(name);
    r.table = run_preset(*r.pre, 1);
    r.cmp = compare_to_expected(r.table, *r.pre);
    return r;
}

double max_dev_vs_expected(const PresetRun& r) {
    double worst = 0.0;
    for (size_t i = 0; i < r.pre->expected.size(); ++i)
        for (size_t j = 0; j < r.pre->expected[i].size(); ++j) {
            if (i >= r.table.cells.size() || j + 1 >= r.table.cells[i].size()) continue;
            const auto& cell = r.table.cells[i][j + 1];
            if (cell.order) worst = std::max(worst, std::abs(*cell.order - r.pre->expected[i][j]));
        }
    return worst;
}

void report_preset(int id, const PresetRun& r, const std::string& what) {
    std::string text = what + ": " + std::to_string(r.cmp.cells_checked) + " order cells ";
    if (r.pre->absolute_band)
        text += "inside [" + fnum(r.pre->band_lo, "%.2f") + ", " + fnum(r.pre->band_hi, "%.2f") +
                "]";
    else
        text += "within +/-" + fnum(r.pre->pm_tol, "%.2f") + " of the reference ladder";
    text += " (max dev " + fnum(max_dev_vs_expected(r), "%.3f") + ")";
    report(id, r.cmp.pass, text);
    if (!r.pre->note.empty()) note(r.pre->note);
    for (const auto& m : r.cmp.mismatches) note("mismatch: " + m);
}

// ---------- criterion 6: independent eigenvalue oracle ----------
// Sturm-count bisection on the symmetrized tridiagonal stencil matrix.

int sturm_count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
    const double pivmin = 1e-200;
    int cnt = 0;
    double q = d[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q <= 0) ++cnt;
    for (size_t i = 1; i < d.size(); ++i) {
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q <= 0) ++cnt;
    }
    return cnt;
}

std::vector<double> sturm_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
    const size_t n = d.size();
    double emax = 0.0;
    for (double v : e) emax = std::max(emax, std::abs(v));
    const double lo = *std::min_element(d.begin(), d.end()) - 2 * emax - 1.0;
    const double hi = *std::max_element(d.begin(), d.end()) + 2 * emax + 1.0;
    std::vector<double> out(n);
    for (size_t k = 0; k < n; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (a + b);
            if (sturm_count_below(d, e, m) <= static_cast<int>(k)) a = m;
            else b = m;
        }
        out[k] = 0.5 * (a + b);
    }
    return out;
}

cvec oracle_spectrum(int N, double h, double r, double delta) {
    const double hr = h * r;
    const double lo = 1.0 + hr * (delta - 1.0);
    const double di = -(2.0 - hr * (1.0 - 2.0 * delta));
    const double hi = 1.0 + hr * delta;
    cvec out(static_cast<size_t>(N));
    if (lo * hi >= 0.0) {
        const double g = std::sqrt(lo * hi);
        std::vector<double> d(static_cast<size_t>(N), di), e(static_cast<size_t>(N - 1), g);
        auto ev = sturm_eigenvalues(d, e);
        for (int j = 0; j < N; ++j) out[j] = ev[j] / (h * h);
    } else {
        const double g = std::sqrt(-lo * hi);
        std::vector<double> d(static_cast<size_t>(N), 0.0), e(static_cast<size_t>(N - 1), g);
        auto ev = sturm_eigenvalues(d, e);
        for (int j = 0; j < N; ++j) out[j] = cplx(di, ev[j]) / (h * h);
    }
    return out;
}

void sort_cplx(cvec& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// ---------- criterion 8: integrator identities ----------

MolSystem diagonal_modes(const std::vector<double>& lambdas) {
    MolSystem m;
    const int N = static_cast<int>(lambdas.size());
    m.dim = N;
    m.mass = Matrix::identity(N);
    m.stiffness = Matrix(N, N);
    for (int i = 0; i < N; ++i) m.stiffness(i, i) = lambdas[i];
    m.forcing = [N](double) { return cvec(static_cast<size_t>(N)); };
    m.grid.N = N;
    m.grid.h = 0.1;
    m.problem.n = 1;
    return m;
}

// 0 = u - g(t, x): stiffly accurate schemes land on g exactly
PdaeProblem algebraic_tracker() {
    PdaeProblem p;
    p.n = 1;
    p.A = Matrix(1, 1);
    p.B = Matrix(1, 1);
    p.C = Matrix::from_rows({{1}});
    p.x_lo = 0.0;
    p.x_hi = 1.0;
    p.t0 = 0.0;
    p.te = 1.0;
    auto g = [](double t, double x) { return std::sin(3.0 * t) + x * x; };
    p.forcing = [g](double t, double x) { return rvec{g(t, x)}; };
    p.initial = [g](double x) { return rvec{g(0.0, x)}; };
    p.dirichlet_lo = [g](double t) { return rvec{g(t, 0.0)}; };
    p.dirichlet_hi = [g](double t) { return rvec{g(t, 1.0)}; };
    p.exact = [g](double t, double x) { return rvec{g(t, x)}; };
    return p;
}

// ---------- criterion 10: transcendental-profile companion ----------
// the bundled cascade solution is quadratic in x, which the stencil
// differentiates exactly; the decay rate needs a profile with nonvanishing
// higher derivatives, driven through the same matrices with r = 0

PdaeProblem sine_profile_cascade() {
    PdaeProblem p = builtin(BuiltinId::Index3BtCs);
    p.label = "cascade-sine";
    auto g = [](double x) { return std::sin(2.0 * x + 0.3); };
    auto gx = [](double x) { return 2.0 * std::cos(2.0 * x + 0.3); };
    auto gxx = [](double x) { return -4.0 * std::sin(2.0 * x + 0.3); };
    auto amp = [](double t) { return rvec{std::sin(t), std::cos(t), std::exp(t)}; };
    auto ampt = [](double t) { return rvec{std::cos(t), -std::sin(t), std::exp(t)}; };
    auto scaled = [](double s, rvec a) {
        for (double& v : a) v *= s;
        return a;
    };
    p.exact = [=](double t, double x) { return scaled(g(x), amp(t)); };
    p.exact_t = [=](double t, double x) { return scaled(g(x), ampt(t)); };
    p.exact_x = [=](double t, double x) { return scaled(gx(x), amp(t)); };
    p.exact_xx = [=](double t, double x) { return scaled(gxx(x), amp(t)); };
    auto apply = [](const Matrix& m, const rvec& v) {
        rvec out(v.size(), 0.0);
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j) out[i] += m(i, j).real() * v[j];
        return out;
    };
    p.forcing = [=, A = p.A, B = p.B, C = p.C](double t, double x) {
        rvec f = apply(A, p.exact_t(t, x));
        const rvec d = apply(B, p.exact_xx(t, x));
        const rvec c = apply(C, p.exact(t, x));
        for (size_t i = 0; i < f.size(); ++i) f[i] += d[i] + c[i];
        return f;
    };
    p.initial = [=](double x) { return p.exact(p.t0, x); };
    p.dirichlet_lo = [=](double t) { return p.exact(t, p.x_lo); };
    p.dirichlet_hi = [=](double t) { return p.exact(t, p.x_hi); };
    return p;
}

} // namespace

int main() {
    // 1-4: reference order tables
    PresetRun cascade = run_named("euler-cascade");
    report_preset(1, cascade, "index-3 cascade + backward Euler");

    PresetRun inhomog = run_named("radau3-inhomog");
    report_preset(2, inhomog, "index-1 inhomogeneous pair + 3-stage Radau");

    PresetRun homog = run_named("radau3-homog4");
    report_preset(3, homog, "index-1 homogeneous variant + 3-stage Radau");

    PresetRun coil = run_named("radau3-coil");
    report_preset(4, coil, "excited coil + 3-stage Radau (self-convergence reference)");

    // 5: differential time index of the builtins
    {
        const BuiltinId ids[] = {BuiltinId::Index3BtCs, BuiltinId::RadauIndex1Inhomog,
                                 BuiltinId::RadauIndex1Homog4, BuiltinId::Coil};
        const int want[] = {3, 1, 1, 2};
        bool ok = true;
        std::string got;
        for (int k = 0; k < 4; ++k) {
            PdaeProblem p = builtin(ids[k]);
            for (int N : {9, 31}) {
                IndexReport rep = differential_time_index(p, make_grid(p, N));
                ok = ok && rep.nu_dt == want[k] && rep.uniform;
                if (N == 9) got += (k ? ", " : "") + std::to_string(rep.nu_dt);
            }
        }
        report(5, ok, "differential time index is {" + got +
                          "} and uniform across modes at N in {9, 31}");
    }

    // 6: closed-form stencil spectrum against bisection eigenvalues
    {
        double worst = 0.0;
        for (int N = 3; N <= 40; ++N)
            for (double r : {0.0, 1.0, -3.0})
                for (double delta : {0.0, 0.5, 1.0}) {
                    const double h = 1.0 / (N + 1);
                    cvec mine = p_spectrum(N, h, r, delta);
                    cvec ref = oracle_spectrum(N, h, r, delta);
                    sort_cplx(mine);
                    sort_cplx(ref);
                    for (int j = 0; j < N; ++j)
                        worst = std::max(worst, std::abs(mine[j] - ref[j]) / std::abs(ref[j]));
                }
        report(6, worst <= 1e-8,
               "stencil spectrum matches Sturm-bisection eigenvalues, worst relative gap " +
                   fnum(worst, "%.2e") + " (N <= 40, r in {0, 1, -3}, delta in {0, 1/2, 1})");
    }

    // 7: tableau quadrature/stage order, damping at infinity, R(it) != 1
    {
        bool ok = true;
        for (int s : {1, 2, 3}) {
            ButcherTableau t = radau_iia(s);
            ok = ok && check_simplifying_conditions(t, 2 * t.s - 1, t.s);
            ok = ok && std::abs(r_at_infinity(t)) <= 1e-12;
            for (double mag : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1e2, 5e2, 1e3})
                for (double sign : {1.0, -1.0})
                    ok = ok &&
                         std::abs(stability_function(t, cplx(0.0, sign * mag)) - 1.0) > 1e-9;
        }
        report(7, ok, "order conditions B(2s-1)/C(s) hold to 1e-10, |R(inf)| <= 1e-12, and "
                      "R(it) != 1 on sampled t in [-1e3, 1e3] for s in {1, 2, 3}");
    }

    // 8: integrator identities
    {
        bool scalar_ok = true;
        const std::vector<double> lambdas{-1.0, -10.0, -0.25};
        MolSystem modes = diagonal_modes(lambdas);
        for (const auto& t : {backward_euler(), radau_iia(2), radau_iia(3)}) {
            auto f = factor_stage_matrix(modes, t, 0.2);
            cvec u1 = step(f, cvec{1.0, 1.0, 1.0}, 0.0);
            for (size_t k = 0; k < lambdas.size(); ++k)
                scalar_ok = scalar_ok &&
                            std::abs(u1[k] - stability_function(t, 0.2 * lambdas[k])) <= 1e-12;
        }

        bool linear_ok = true;
        {
            PdaeProblem p = builtin(BuiltinId::Index3BtCs);
            GridSpec g = make_grid(p, 7);
            MolSystem mol = assemble(p, g);
            mol.forcing = [dim = mol.dim](double) { return cvec(static_cast<size_t>(dim)); };
            for (const auto& t : {backward_euler(), radau_iia(2), radau_iia(3)}) {
                auto f = factor_stage_matrix(mol, t, 0.1);
                cvec u(static_cast<size_t>(mol.dim)), v(static_cast<size_t>(mol.dim)),
                    w(static_cast<size_t>(mol.dim));
                const cplx alpha(2.0, 0.5), beta(-0.7, 1.0);
                for (int i = 0; i < mol.dim; ++i) {
                    u[i] = cplx(std::sin(0.3 * i), 0.1 * i);
                    v[i] = cplx(std::cos(0.2 * i), -0.05 * i);
                    w[i] = alpha * u[i] + beta * v[i];
                }
                cvec sw = step(f, w, 0.0), su = step(f, u, 0.0), sv = step(f, v, 0.0);
                for (int i = 0; i < mol.dim; ++i)
                    linear_ok = linear_ok &&
                                std::abs(sw[i] - (alpha * su[i] + beta * sv[i])) <= 1e-10;
            }
        }

        bool algebraic_ok = true;
        {
            PdaeProblem p = algebraic_tracker();
            GridSpec g = make_grid(p, 9);
            for (const auto& t : {backward_euler(), radau_iia(2), radau_iia(3)}) {
                Trajectory traj = integrate(p, g, t, 0.25);
                rvec want = exact_on_grid(p, p.te, g);
                for (size_t i = 0; i < want.size(); ++i)
                    algebraic_ok = algebraic_ok &&
                                   std::abs(traj.states.back()[i] - want[i]) <= 1e-12;
            }
        }
        report(8, scalar_ok && linear_ok && algebraic_ok,
               "one-step map equals R(tau lambda) to 1e-12, is linear to 1e-10, and lands "
               "exactly on pure algebraic constraints");
    }

    // 9: predictor against the finest observed order of each reference sweep
    {
        bool ok = true;
        std::string detail;
        for (const PresetRun* r : {&cascade, &inhomog, &homog, &coil}) {
            const auto& cell = r->table.cells.back().back();
            if (!cell.order || !r->table.predicted) {
                ok = false;
                detail += (detail.empty() ? "" : "; ") + r->pre->name + ": missing";
                continue;
            }
            const double gap = std::abs(*cell.order - r->table.predicted->p_star);
            ok = ok && gap <= 0.15;
            detail += (detail.empty() ? "" : "; ") + r->pre->name + " " + fnum(gap, "%.3f");
        }
        report(9, ok, "finest observed order sits within 0.15 of the predicted p_star on all "
                      "four sweeps (gaps: " + detail + ")");
    }

    // 10: spatial truncation order of the r = 0 stencil
    {
        PdaeProblem base = builtin(BuiltinId::Index3BtCs);
        bool exact_ok = true;
        for (int N : {15, 31})
            exact_ok = exact_ok && truncation_residual(base, make_grid(base, N), 0.5) <= 1e-8;

        PdaeProblem comp = sine_profile_cascade();
        std::vector<double> res;
        for (int N : {15, 31, 63}) res.push_back(truncation_residual(comp, make_grid(comp, N), 0.5));
        bool decay_ok = true;
        std::string rates;
        for (size_t k = 1; k < res.size(); ++k) {
            const double rate = std::log2(res[k - 1] / res[k]);
            decay_ok = decay_ok && std::abs(rate - 2.0) <= 0.15;
            rates += (k > 1 ? ", " : "") + fnum(rate, "%.3f");
        }
        report(10, exact_ok && decay_ok,
               "spatial truncation: rounding-level on the bundled cascade, decay rates {" +
                   rates + "} on its transcendental companion (target 2.0 +/- 0.15)");
        note("the bundled cascade solution is quadratic in x, so the central stencil "
             "differentiates it exactly; the decay rate is measured on the same matrices "
             "with a sine profile and r = 0");
    }

    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
