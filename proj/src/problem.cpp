#include "pdae/problem.hpp"

#include <cmath>

namespace pdae {

namespace {

rvec real_matvec(const Matrix& m, const rvec& v) {
    if (static_cast<int>(v.size()) != m.cols)
        throw PdaeError(ErrorCode::DimensionMismatch, "real matvec shapes");
    rvec out(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out[i] += m(i, j).real() * v[j];
    return out;
}

// forcing manufactured from the stored analytic derivatives:
// f = A u_t + B (u_xx + r u_x) + C u, all closed-form
void attach_manufactured_forcing(PdaeProblem& p) {
    p.forcing = [A = p.A, B = p.B, C = p.C, r = p.r, ut = p.exact_t,
                 uxx = p.exact_xx, ux = p.exact_x, u = p.exact](double t, double x) {
        rvec out = real_matvec(A, ut(t, x));
        rvec spatial = uxx(t, x);
        if (r != 0.0) {
            rvec dx = ux(t, x);
            for (size_t i = 0; i < spatial.size(); ++i) spatial[i] += r * dx[i];
        }
        rvec bs = real_matvec(B, spatial);
        rvec cu = real_matvec(C, u(t, x));
        for (size_t i = 0; i < out.size(); ++i) out[i] += bs[i] + cu[i];
        return out;
    };
}

void attach_boundary_from_exact(PdaeProblem& p) {
    p.dirichlet_lo = [u = p.exact, x = p.x_lo](double t) { return u(t, x); };
    p.dirichlet_hi = [u = p.exact, x = p.x_hi](double t) { return u(t, x); };
    p.initial = [u = p.exact, t0 = p.t0](double x) { return u(t0, x); };
}

PdaeProblem make_index3() {
    PdaeProblem p;
    p.n = 3;
    p.A = Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    p.B = Matrix::from_rows({{0, 0, -1}, {0, -1, -1}, {0, 0, 0}});
    p.C = Matrix::from_rows({{-1, -1, -1}, {0, -1, 0}, {0, 0, -1}});
    p.r = 0.0;
    p.x_lo = -0.5;
    p.x_hi = 0.5;
    p.t0 = 0.0;
    p.te = 1.0;
    p.label = "index3-btcs";
    p.exact = [](double t, double x) {
        double g = x * (x - 1.0);
        return rvec{g * std::sin(t), g * std::cos(t), g * (std::exp(t) + std::pow(t, 5))};
    };
    p.exact_t = [](double t, double x) {
        double g = x * (x - 1.0);
        return rvec{g * std::cos(t), -g * std::sin(t), g * (std::exp(t) + 5.0 * std::pow(t, 4))};
    };
    p.exact_x = [](double t, double x) {
        double gp = 2.0 * x - 1.0;
        return rvec{gp * std::sin(t), gp * std::cos(t), gp * (std::exp(t) + std::pow(t, 5))};
    };
    p.exact_xx = [](double t, double) {
        return rvec{2.0 * std::sin(t), 2.0 * std::cos(t), 2.0 * (std::exp(t) + std::pow(t, 5))};
    };
    attach_manufactured_forcing(p);
    attach_boundary_from_exact(p);
    return p;
}

PdaeProblem make_radau_index1(bool homog4) {
    PdaeProblem p;
    p.n = 3;
    p.A = Matrix::from_rows({{0, 2, 0}, {1, -1, 0}, {1, -1, 0}});
    p.B = Matrix::from_rows({{-1, 0, 0}, {0, 0, 0}, {0, 0, -1}});
    p.C = Matrix::from_rows({{0, 0, 0}, {0, -1, 0}, {0, 0, 1}});
    p.r = 0.0;
    p.x_lo = -1.0;
    p.x_hi = 1.0;
    p.t0 = 0.0;
    p.te = 1.0;
    if (!homog4) {
        p.label = "radau-index1-inhomog";
        p.exact = [](double t, double x) {
            return rvec{x * x * std::exp(-t), x * x * std::exp(-t / 2), x * x * std::sin(t)};
        };
        p.exact_t = [](double t, double x) {
            return rvec{-x * x * std::exp(-t), -0.5 * x * x * std::exp(-t / 2), x * x * std::cos(t)};
        };
        p.exact_x = [](double t, double x) {
            return rvec{2 * x * std::exp(-t), 2 * x * std::exp(-t / 2), 2 * x * std::sin(t)};
        };
        p.exact_xx = [](double t, double) {
            return rvec{2 * std::exp(-t), 2 * std::exp(-t / 2), 2 * std::sin(t)};
        };
    } else {
        p.label = "radau-index1-homog4";
        p.bc_time_derivative_vanishing_order = 4; // boundary traces are cubics in t
        p.exact = [](double t, double x) {
            double w = x * x - 1.0, t3 = t * t * t;
            double cx = std::cos(x), sx = std::sin(x);
            return rvec{w * std::exp(-t) + t3 * cx * cx, x * x * std::exp(-t / 2),
                        w * std::sin(t) + t3 * sx * sx};
        };
        p.exact_t = [](double t, double x) {
            double w = x * x - 1.0, t2 = 3.0 * t * t;
            double cx = std::cos(x), sx = std::sin(x);
            return rvec{-w * std::exp(-t) + t2 * cx * cx, -0.5 * x * x * std::exp(-t / 2),
                        w * std::cos(t) + t2 * sx * sx};
        };
        p.exact_x = [](double t, double x) {
            double t3 = t * t * t, s2x = std::sin(2.0 * x);
            return rvec{2 * x * std::exp(-t) - t3 * s2x, 2 * x * std::exp(-t / 2),
                        2 * x * std::sin(t) + t3 * s2x};
        };
        p.exact_xx = [](double t, double x) {
            double t3 = t * t * t, c2x = std::cos(2.0 * x);
            return rvec{2 * std::exp(-t) - 2 * t3 * c2x, 2 * std::exp(-t / 2),
                        2 * std::sin(t) + 2 * t3 * c2x};
        };
    }
    attach_manufactured_forcing(p);
    attach_boundary_from_exact(p);
    return p;
}

} // namespace

PdaeProblem coil_problem(const CoilParams& prm) {
    const double L = prm.L, Cc = prm.C, D = prm.D, l = prm.l, E = prm.E, a = prm.excite;
    PdaeProblem p;
    p.n = 4;
    p.A = Matrix::from_rows({{0, 0, 0, 0},
                             {0, 0, -L * Cc / (l * l), L / D},
                             {1, 0, 0, 0},
                             {0, 1, 0, 0}});
    p.B = Matrix::from_rows({{-1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
    p.C = Matrix::from_rows({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
    p.r = 0.0;
    p.x_lo = 0.0;
    p.x_hi = l;
    p.t0 = 0.0;
    p.te = 1.0;
    p.label = a == 0.0 ? "coil" : "coil-excited";
    p.bc_time_derivative_vanishing_order = 1; // boundary data constant in t

    // stationary profile consistent with the boundary data
    auto u1_base = [=](double x) {
        return (E / l - Cc * D * E * l / 6.0) * x + Cc * D * E / (6.0 * l) * x * x * x;
    };
    auto u2_base = [=](double x) { return Cc * D * E / l * x; };

    p.dirichlet_lo = [](double) { return rvec{0.0, 0.0, 0.0, 0.0}; };
    p.dirichlet_hi = [=](double) { return rvec{E, Cc * D * E, 0.0, 0.0}; };
    p.initial = [=](double x) { return rvec{u1_base(x), u2_base(x), 0.0, 0.0}; };

    if (a == 0.0) {
        p.forcing = [n = p.n](double, double) { return rvec(n, 0.0); };
        return p;
    }

    // excitation a*theta(t)*w(x) on the first component, chosen so that the
    // initial and boundary data stay untouched: theta(0)=theta'(0)=0 and
    // w vanishes at both endpoints
    const double omega = 2.0;
    const double k = std::acos(-1.0) / l; // first spatial mode
    auto theta = [=](double t) { double s = std::sin(omega * t); return s * s; };
    auto theta_p = [=](double t) { return omega * std::sin(2.0 * omega * t); };
    auto theta_pp = [=](double t) { return 2.0 * omega * omega * std::cos(2.0 * omega * t); };
    auto w = [=](double x) { return std::sin(k * x); };

    p.forcing = [=](double t, double x) {
        return rvec{a * theta(t) * k * k * w(x),
                    -(L * Cc / (l * l)) * a * theta_pp(t) * w(x), 0.0, 0.0};
    };
    p.exact = [=](double t, double x) {
        return rvec{u1_base(x) + a * theta(t) * w(x), u2_base(x), a * theta_p(t) * w(x), 0.0};
    };
    p.exact_t = [=](double t, double x) {
        return rvec{a * theta_p(t) * w(x), 0.0, a * theta_pp(t) * w(x), 0.0};
    };
    p.exact_x = [=](double t, double x) {
        double wp = k * std::cos(k * x);
        double u1p = (E / l - Cc * D * E * l / 6.0) + Cc * D * E / (2.0 * l) * x * x;
        return rvec{u1p + a * theta(t) * wp, Cc * D * E / l, a * theta_p(t) * wp, 0.0};
    };
    p.exact_xx = [=](double t, double x) {
        double wxx = -k * k * w(x);
        return rvec{Cc * D * E / l * x + a * theta(t) * wxx, 0.0, a * theta_p(t) * wxx, 0.0};
    };
    return p;
}

PdaeProblem builtin(BuiltinId id) {
    switch (id) {
    case BuiltinId::Index3BtCs: return make_index3();
    case BuiltinId::RadauIndex1Inhomog: return make_radau_index1(false);
    case BuiltinId::RadauIndex1Homog4: return make_radau_index1(true);
    case BuiltinId::Coil: return coil_problem(CoilParams{});
    }
    throw PdaeError(ErrorCode::ConfigError, "unknown builtin id");
}

const char* builtin_name(BuiltinId id) {
    switch (id) {
    case BuiltinId::Index3BtCs: return "index3-btcs";
    case BuiltinId::RadauIndex1Inhomog: return "radau-index1-inhomog";
    case BuiltinId::RadauIndex1Homog4: return "radau-index1-homog4";
    case BuiltinId::Coil: return "coil";
    }
    return "?";
}

std::optional<BuiltinId> builtin_from_name(const std::string& name) {
    for (BuiltinId id : {BuiltinId::Index3BtCs, BuiltinId::RadauIndex1Inhomog,
                         BuiltinId::RadauIndex1Homog4, BuiltinId::Coil})
        if (name == builtin_name(id)) return id;
    return std::nullopt;
}

rvec residual(const PdaeProblem& p, double t, double x, const rvec& du_dt,
              const rvec& du_dx, const rvec& d2u_dx2, const rvec& u) {
    if (static_cast<int>(du_dt.size()) != p.n || static_cast<int>(du_dx.size()) != p.n ||
        static_cast<int>(d2u_dx2.size()) != p.n || static_cast<int>(u.size()) != p.n)
        throw PdaeError(ErrorCode::DimensionMismatch, "residual vector lengths");
    rvec spatial = d2u_dx2;
    for (int i = 0; i < p.n; ++i) spatial[i] += p.r * du_dx[i];
    rvec out = real_matvec(p.A, du_dt);
    rvec bs = real_matvec(p.B, spatial);
    rvec cu = real_matvec(p.C, u);
    rvec f = p.forcing(t, x);
    for (int i = 0; i < p.n; ++i) out[i] += bs[i] + cu[i] - f[i];
    return out;
}

rvec exact_on_grid(const PdaeProblem& p, double t, const GridSpec& grid) {
    if (!p.exact)
        throw PdaeError(ErrorCode::NoExactSolution, "problem '" + p.label + "' has no exact solution");
    rvec out;
    out.reserve(static_cast<size_t>(grid.N) * p.n);
    for (int i = 1; i <= grid.N; ++i) {
        rvec u = p.exact(t, p.x_lo + i * grid.h);
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

rvec initial_on_grid(const PdaeProblem& p, const GridSpec& grid) {
    rvec out;
    out.reserve(static_cast<size_t>(grid.N) * p.n);
    for (int i = 1; i <= grid.N; ++i) {
        rvec u = p.initial(p.x_lo + i * grid.h);
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

} // namespace pdae
