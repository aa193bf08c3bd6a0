#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pdae/integrate.hpp"

#include <cmath>
#include <vector>

using namespace pdae;

namespace {

double dl2(const cvec& u, const rvec& ref, double h) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += std::norm(u[i] - ref[i]);
    return std::sqrt(h * s);
}

// scalar u' = u dressed as a PDAE: one interior point, B scaled so that the
// stencil reduces to the identity
PdaeProblem scalar_growth() {
    PdaeProblem p;
    p.n = 1;
    p.A = Matrix::from_rows({{1}});
    p.B = Matrix::from_rows({{0.125}}); // h = 1/2, so -(1/h^2) * (-2) * B = 1
    p.C = Matrix(1, 1);
    p.x_lo = 0.0;
    p.x_hi = 1.0;
    p.t0 = 0.0;
    p.te = 1.0;
    p.forcing = [](double, double) { return rvec{0.0}; };
    p.initial = [](double) { return rvec{1.0}; };
    p.dirichlet_lo = [](double) { return rvec{0.0}; };
    p.dirichlet_hi = [](double) { return rvec{0.0}; };
    return p;
}

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

// 0 = u - g(t, x): A = 0, B = 0, C = I, f = g
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
    p.dirichlet_lo = [g, lo = p.x_lo](double t) { return rvec{g(t, lo)}; };
    p.dirichlet_hi = [g, hi = p.x_hi](double t) { return rvec{g(t, hi)}; };
    p.exact = [g](double t, double x) { return rvec{g(t, x)}; };
    return p;
}

} // namespace

TEST_CASE("scalar growth problem: stage matrix is 1 - tau") {
    auto p = scalar_growth();
    GridSpec g = make_grid(p, 1);
    MolSystem mol = assemble(p, g);
    CHECK(std::abs(mol.stiffness(0, 0) - cplx(1.0)) <= 1e-14);

    auto t = backward_euler();
    const double tau = 0.125;
    auto f = factor_stage_matrix(mol, t, tau);
    CHECK_FALSE(f.banded);
    CHECK(std::abs(f.dense.lu(0, 0) - cplx(1.0 - tau)) <= 1e-14);

    cvec u1 = step(f, cvec{1.0}, 0.0);
    CHECK(std::abs(u1[0] - stability_function(t, tau)) <= 1e-12);
}

TEST_CASE("one step reproduces the stability function on decoupled modes") {
    const std::vector<double> lambdas{-1.0, -10.0, -0.25};
    MolSystem mol = diagonal_modes(lambdas);
    const double tau = 0.2;
    for (const auto& t : {backward_euler(), radau_iia(2), radau_iia(3)}) {
        auto f = factor_stage_matrix(mol, t, tau);
        cvec u1 = step(f, cvec{1.0, 1.0, 1.0}, 0.0);
        for (size_t k = 0; k < lambdas.size(); ++k)
            CHECK(std::abs(u1[k] - stability_function(t, tau * lambdas[k])) <= 1e-12);
    }
}

TEST_CASE("homogeneous step map is linear") {
    auto p = builtin(BuiltinId::Index3BtCs);
    GridSpec g = make_grid(p, 7);
    MolSystem mol = assemble(p, g);
    mol.forcing = [dim = mol.dim](double) { return cvec(static_cast<size_t>(dim)); };
    auto t = radau_iia(2);
    auto f = factor_stage_matrix(mol, t, 0.1);

    cvec u(static_cast<size_t>(mol.dim)), v(static_cast<size_t>(mol.dim));
    for (int i = 0; i < mol.dim; ++i) {
        u[i] = cplx(std::sin(0.3 * i), 0.1 * i);
        v[i] = cplx(std::cos(0.2 * i), -0.05 * i);
    }
    const cplx alpha(2.0, 0.5), beta(-0.7, 1.0);
    cvec lhs_in(static_cast<size_t>(mol.dim));
    for (int i = 0; i < mol.dim; ++i) lhs_in[i] = alpha * u[i] + beta * v[i];

    cvec lhs = step(f, lhs_in, 0.0);
    cvec su = step(f, u, 0.0), sv = step(f, v, 0.0);
    for (int i = 0; i < mol.dim; ++i)
        CHECK(std::abs(lhs[i] - (alpha * su[i] + beta * sv[i])) <= 1e-10);
}

TEST_CASE("stiffly accurate tableaus land on the algebraic constraint") {
    auto p = algebraic_tracker();
    GridSpec g = make_grid(p, 5);
    for (const auto& t : {backward_euler(), radau_iia(2), radau_iia(3)}) {
        auto traj = integrate(p, g, t, 0.25);
        rvec ref = exact_on_grid(p, p.te, g);
        for (size_t i = 0; i < traj.states.back().size(); ++i)
            CHECK(std::abs(traj.states.back()[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("zero stiffness leaves the state alone") {
    PdaeProblem p;
    p.n = 1;
    p.A = Matrix::from_rows({{1}});
    p.B = Matrix(1, 1);
    p.C = Matrix(1, 1);
    p.x_lo = 0.0;
    p.x_hi = 1.0;
    p.t0 = 0.0;
    p.te = 1.0;
    p.forcing = [](double, double) { return rvec{0.0}; };
    p.initial = [](double x) { return rvec{1.0 + x}; };
    p.dirichlet_lo = [](double) { return rvec{0.0}; };
    p.dirichlet_hi = [](double) { return rvec{0.0}; };
    GridSpec g = make_grid(p, 6);
    auto traj = integrate(p, g, radau_iia(2), 0.25, true);
    for (size_t i = 0; i < traj.states.front().size(); ++i)
        CHECK(std::abs(traj.states.back()[i] - traj.states.front()[i]) <= 1e-14);
}

TEST_CASE("stationary coil stays on its stationary profile") {
    auto p = coil_problem(CoilParams{});
    GridSpec g = make_grid(p, 9);
    auto traj = integrate(p, g, radau_iia(2), 0.25);
    rvec ref = initial_on_grid(p, g);
    for (size_t i = 0; i < traj.states.back().size(); ++i)
        CHECK(std::abs(traj.states.back()[i] - ref[i]) <= 1e-10);
}

TEST_CASE("excited coil satisfies the algebraic rows from the first step on") {
    CoilParams cp;
    cp.excite = 1.0;
    auto p = coil_problem(cp);
    GridSpec g = make_grid(p, 9);
    MolSystem mol = assemble(p, g);
    auto traj = integrate(p, g, radau_iia(3), 0.05, true);

    // rows g*n+0 have a zero mass row (first block row of Eq-style A is zero),
    // so D U + F must vanish there once the stages have settled
    for (size_t m = 1; m < traj.states.size() && m <= 4; ++m) {
        const cvec& u = traj.states[m];
        cvec res = matvec(mol.stiffness, u);
        cvec f = mol.forcing(traj.times[m]);
        double worst = 0.0;
        for (int gpt = 0; gpt < g.N; ++gpt)
            worst = std::max(worst, std::abs(res[gpt * p.n] + f[gpt * p.n]));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("backward Euler order on the cascade problem matches the rightmost column") {
    auto p = builtin(BuiltinId::Index3BtCs);
    GridSpec g = make_grid(p, 15);
    rvec ref = exact_on_grid(p, p.te, g);
    auto t = backward_euler();
    const double e1 = dl2(integrate(p, g, t, 0.1 / 64.0).states.back(), ref, g.h);
    const double e2 = dl2(integrate(p, g, t, 0.1 / 128.0).states.back(), ref, g.h);
    const double rate = std::log2(e1 / e2);
    CHECK(rate >= 0.94);
    CHECK(rate <= 1.04);
}

TEST_CASE("banded path agrees with the dense path") {
    auto p = builtin(BuiltinId::Index3BtCs);
    GridSpec g = make_grid(p, 7);
    MolSystem mol = assemble(p, g);
    auto t = radau_iia(3);
    auto fd = factor_stage_matrix(mol, t, 0.05);
    auto fb = factor_stage_matrix(mol, t, 0.05, true);
    CHECK_FALSE(fd.banded);
    CHECK(fb.banded);

    rvec u0 = initial_on_grid(p, g);
    cvec u(u0.begin(), u0.end());
    double tm = p.t0;
    for (int m = 0; m < 3; ++m) {
        cvec ud = step(fd, u, tm);
        cvec ub = step(fb, u, tm);
        for (size_t i = 0; i < ud.size(); ++i) CHECK(std::abs(ud[i] - ub[i]) <= 1e-10);
        u = ud;
        tm += 0.05;
    }
}

TEST_CASE("factorization reuse drifts by nothing measurable") {
    auto p = coil_problem([] {
        CoilParams cp;
        cp.excite = 1.0;
        return cp;
    }());
    GridSpec g = make_grid(p, 7);
    const double tau = 0.125;
    auto t = radau_iia(2);
    auto reused = integrate(p, g, t, tau);

    MolSystem mol = assemble(p, g);
    rvec u0 = initial_on_grid(p, g);
    cvec u(u0.begin(), u0.end());
    for (int m = 0; m < 8; ++m) {
        auto fresh = factor_stage_matrix(mol, t, tau);
        u = step(fresh, u, p.t0 + m * tau);
    }
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(u[i] - reused.states.back()[i]) <= 1e-13);
}

TEST_CASE("trajectory bookkeeping") {
    auto p = coil_problem(CoilParams{});
    GridSpec g = make_grid(p, 5);
    auto full = integrate(p, g, backward_euler(), 0.25, true);
    CHECK(full.steps_taken == 4);
    REQUIRE(full.times.size() == 5);
    REQUIRE(full.states.size() == 5);
    for (size_t i = 1; i < full.times.size(); ++i)
        CHECK(full.times[i] - full.times[i - 1] == doctest::Approx(0.25).epsilon(1e-12));

    auto last = integrate(p, g, backward_euler(), 0.25);
    CHECK(last.steps_taken == 4);
    CHECK(last.times == std::vector<double>{1.0});
    CHECK(last.states.size() == 1);
}

TEST_CASE("step-count and step-size validation") {
    auto p = coil_problem(CoilParams{});
    GridSpec g = make_grid(p, 5);
    CHECK_THROWS_AS(integrate(p, g, backward_euler(), 0.3), PdaeError);
    try {
        integrate(p, g, backward_euler(), 0.3);
    } catch (const PdaeError& e) {
        CHECK(e.code() == ErrorCode::NonintegerStepCount);
    }
    CHECK_THROWS_AS(integrate(p, g, backward_euler(), -0.1), PdaeError);

    MolSystem mol = assemble(p, g);
    CHECK_THROWS_AS(factor_stage_matrix(mol, backward_euler(), 0.0), PdaeError);
}

TEST_CASE("purely algebraic stage matrix is regular for any positive tau") {
    auto p = algebraic_tracker();
    GridSpec g = make_grid(p, 4);
    MolSystem mol = assemble(p, g);
    for (double tau : {1e-6, 0.1, 10.0}) {
        auto f = factor_stage_matrix(mol, radau_iia(2), tau);
        CHECK_FALSE(f.banded);
    }
}
