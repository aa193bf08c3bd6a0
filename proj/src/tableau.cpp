#include "pdae/tableau.hpp"

#include <algorithm>
#include <cmath>

namespace pdae {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Index01Inhomog: return "Index01Inhomog";
    case Regime::Index01Homog: return "Index01Homog";
    case Regime::HighIndex: return "HighIndex";
    }
    return "?";
}

ButcherTableau backward_euler() {
    ButcherTableau t;
    t.s = 1;
    t.a = Matrix::from_rows({{1.0}});
    t.b = {1.0};
    t.c = {1.0};
    t.p = t.q = 1;
    t.label = "backward-euler";
    return t;
}

namespace {

// coefficients of x^{s-1} (x-1)^s, ascending powers
std::vector<double> radau_poly(int s) {
    std::vector<double> p = {1.0}; // (x-1)^0
    for (int k = 0; k < s; ++k) {
        std::vector<double> q(p.size() + 1, 0.0);
        for (size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= p[i];
        }
        p = std::move(q);
    }
    p.insert(p.begin(), s - 1, 0.0); // multiply by x^{s-1}
    return p;
}

std::vector<double> differentiate(std::vector<double> p) {
    for (size_t i = 1; i < p.size(); ++i) p[i - 1] = p[i] * static_cast<double>(i);
    p.pop_back();
    return p;
}

double eval(const std::vector<double>& p, double x) {
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

double polish_root(const std::vector<double>& p, const std::vector<double>& dp, double lo, double hi) {
    double flo = eval(p, lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = eval(p, mid);
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        double f = eval(p, x), d = eval(dp, x);
        if (d == 0.0) break;
        double nx = x - f / d;
        if (std::abs(nx - x) < 1e-16) { x = nx; break; }
        x = nx;
    }
    return x;
}

} // namespace

ButcherTableau radau_iia(int s) {
    if (s < 1 || s > 3)
        throw PdaeError(ErrorCode::UnsupportedStageCount, "radau_iia supports s in {1,2,3}, got " + std::to_string(s));
    if (s == 1) return backward_euler();

    // c = roots of d^{s-1}/dx^{s-1} [x^{s-1}(x-1)^s] in (0,1]
    auto poly = radau_poly(s);
    for (int k = 0; k < s - 1; ++k) poly = differentiate(poly);
    auto dpoly = differentiate(poly);

    std::vector<double> c;
    const int scan = 4000;
    double prev_x = 1e-9, prev_f = eval(poly, prev_x);
    for (int i = 1; i <= scan; ++i) {
        double x = static_cast<double>(i) / scan * (1.0 - 2e-9) + 1e-9;
        double f = eval(poly, x);
        if ((f < 0) != (prev_f < 0))
            c.push_back(polish_root(poly, dpoly, prev_x, x));
        prev_x = x;
        prev_f = f;
    }
    c.push_back(1.0); // stiffly accurate right endpoint
    std::sort(c.begin(), c.end());
    if (static_cast<int>(c.size()) != s)
        throw PdaeError(ErrorCode::UnsupportedStageCount, "collocation root count mismatch");

    // rows of A from the collocation conditions C(s)
    Matrix V(s, s);
    for (int k = 0; k < s; ++k)
        for (int j = 0; j < s; ++j) V(k, j) = std::pow(c[j], k);
    auto vf = lu_factor(V);
    ButcherTableau t;
    t.s = s;
    t.a = Matrix(s, s);
    for (int i = 0; i < s; ++i) {
        cvec rhs(s);
        for (int k = 1; k <= s; ++k) rhs[k - 1] = std::pow(c[i], k) / k;
        auto row = lu_solve(vf, rhs);
        for (int j = 0; j < s; ++j) t.a(i, j) = row[j].real();
    }
    t.b.resize(s);
    for (int j = 0; j < s; ++j) t.b[j] = t.a(s - 1, j).real();
    t.c = c;
    t.p = 2 * s - 1;
    t.q = s;
    t.label = "radau-iia-" + std::to_string(s);
    return t;
}

cplx stability_function(const ButcherTableau& t, cplx z) {
    Matrix m = Matrix::identity(t.s) - z * t.a;
    LuFactors f;
    try {
        f = lu_factor(m);
    } catch (const PdaeError&) {
        throw PdaeError(ErrorCode::PoleOfR, "I - z*A singular at z = (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
    }
    cvec ones(t.s, cplx(1.0));
    auto y = lu_solve(f, ones);
    cplx acc = 0.0;
    for (int i = 0; i < t.s; ++i) acc += t.b[i] * y[i];
    return 1.0 + z * acc;
}

double r_at_infinity(const ButcherTableau& t) {
    LuFactors f;
    try {
        f = lu_factor(t.a);
    } catch (const PdaeError&) {
        throw PdaeError(ErrorCode::SingularA, "RK matrix singular; R(inf) undefined");
    }
    cvec ones(t.s, cplx(1.0));
    auto y = lu_solve(f, ones);
    cplx acc = 0.0;
    for (int i = 0; i < t.s; ++i) acc += t.b[i] * y[i];
    return 1.0 - acc.real();
}

bool check_simplifying_conditions(const ButcherTableau& t, int p, int q) {
    const double tol = 1e-10;
    for (int k = 1; k <= p; ++k) { // B(k): sum b_i c_i^{k-1} = 1/k
        double acc = 0.0;
        for (int i = 0; i < t.s; ++i) acc += t.b[i] * std::pow(t.c[i], k - 1);
        if (std::abs(acc - 1.0 / k) > tol) return false;
    }
    for (int k = 1; k <= q; ++k) { // C(k): sum_j a_ij c_j^{k-1} = c_i^k / k
        for (int i = 0; i < t.s; ++i) {
            double acc = 0.0;
            for (int j = 0; j < t.s; ++j) acc += t.a(i, j).real() * std::pow(t.c[j], k - 1);
            if (std::abs(acc - std::pow(t.c[i], k) / k) > tol) return false;
        }
    }
    return true;
}

namespace {

bool is_backward_euler(const ButcherTableau& t) {
    return t.s == 1 && std::abs(t.a(0, 0) - 1.0) < 1e-12 && std::abs(t.b[0] - 1.0) < 1e-12;
}

bool is_radau(const ButcherTableau& t) {
    return check_simplifying_conditions(t, 2 * t.s - 1, t.s) && std::abs(t.c[t.s - 1] - 1.0) < 1e-12 &&
           [&] {
               for (int j = 0; j < t.s; ++j)
                   if (std::abs(t.a(t.s - 1, j).real() - t.b[j]) > 1e-12) return false;
               return true;
           }();
}

} // namespace

OrderPrediction predict_order(const ButcherTableau& t, int nu_dt, bool bc_vanishing,
                              std::optional<int> p_nu_override) {
    if (nu_dt < 0)
        throw PdaeError(ErrorCode::UnknownClassicalDaeOrder, "negative time index");
    const bool euler = is_backward_euler(t);

    // hypothesis checks; the backward-Euler result holds for arbitrary index
    // by a separate argument, so only regularity is required there
    double rinf = r_at_infinity(t); // throws SingularA on irregular RK matrix
    if (!euler) {
        if (nu_dt >= 2 && std::abs(rinf) > 1e-9)
            throw PdaeError(ErrorCode::HypothesisViolated, "L-stability (R(inf)=0) required for time index >= 2");
        if (nu_dt <= 1 && rinf >= 1.0 - 1e-9)
            throw PdaeError(ErrorCode::HypothesisViolated, "need lim R(z) < 1 for time index <= 1");
        for (double ti : {0.1, 1.0, 10.0, 100.0}) {
            if (std::abs(stability_function(t, cplx(0.0, ti)) - 1.0) <= 1e-12)
                throw PdaeError(ErrorCode::HypothesisViolated, "R(it) = 1 at nonzero t");
        }
        if ((nu_dt == 3 || nu_dt == 4) && t.q < nu_dt - 2)
            throw PdaeError(ErrorCode::HypothesisViolated, "stage order q >= nu_dt - 2 required for time index 3,4");
    }

    int p_nu;
    if (p_nu_override) {
        p_nu = *p_nu_override;
    } else if (euler) {
        p_nu = 1;
    } else if (is_radau(t) && nu_dt <= 4) {
        p_nu = nu_dt <= 1 ? 2 * t.s - 1 : t.s + 2 - nu_dt;
    } else {
        throw PdaeError(ErrorCode::UnknownClassicalDaeOrder,
                        "no classical DAE order on record for '" + t.label + "' at time index " + std::to_string(nu_dt));
    }

    OrderPrediction pr;
    pr.p_nu = p_nu;
    double q_branch = t.q + (bc_vanishing ? 2.25 : 1.25);
    pr.p_star = std::min<double>(p_nu, q_branch);
    pr.epsilon_flag = q_branch < static_cast<double>(p_nu);
    pr.regime = nu_dt >= 2 ? Regime::HighIndex
                           : (bc_vanishing ? Regime::Index01Homog : Regime::Index01Inhomog);
    return pr;
}

} // namespace pdae
