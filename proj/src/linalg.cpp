#include "pdae/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pdae {

const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::DegenerateStencil: return "DegenerateStencil";
    case ErrorCode::UnsupportedStageCount: return "UnsupportedStageCount";
    case ErrorCode::PoleOfR: return "PoleOfR";
    case ErrorCode::SingularA: return "SingularA";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::UnknownClassicalDaeOrder: return "UnknownClassicalDaeOrder";
    case ErrorCode::SingularStageMatrix: return "SingularStageMatrix";
    case ErrorCode::NonintegerStepCount: return "NonintegerStepCount";
    case ErrorCode::IrregularPencil: return "IrregularPencil";
    case ErrorCode::NonpositiveError: return "NonpositiveError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    Matrix m(static_cast<int>(rows.size()), rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m.cols)
            throw PdaeError(ErrorCode::DimensionMismatch, "ragged initializer rows");
        int j = 0;
        for (cplx v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw PdaeError(ErrorCode::DimensionMismatch, "matrix product shapes");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw PdaeError(ErrorCode::DimensionMismatch, "matrix sum shapes");
    Matrix c = a;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] += b.a[i];
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw PdaeError(ErrorCode::DimensionMismatch, "matrix difference shapes");
    Matrix c = a;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] -= b.a[i];
    return c;
}

Matrix operator*(cplx s, const Matrix& a) {
    Matrix c = a;
    for (auto& v : c.a) v *= s;
    return c;
}

cvec matvec(const Matrix& m, const cvec& v) {
    if (static_cast<int>(v.size()) != m.cols)
        throw PdaeError(ErrorCode::DimensionMismatch, "matrix-vector shapes");
    cvec out(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        cplx s = 0.0;
        const cplx* row = &m.a[static_cast<size_t>(i) * m.cols];
        for (int j = 0; j < m.cols; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

double max_abs(const Matrix& m) {
    double v = 0.0;
    for (const auto& x : m.a) v = std::max(v, std::abs(x));
    return v;
}

double frobenius(const Matrix& m) {
    double s = 0.0;
    for (const auto& x : m.a) s += std::norm(x);
    return std::sqrt(s);
}

LuFactors lu_factor(const Matrix& m) {
    if (m.rows != m.cols)
        throw PdaeError(ErrorCode::DimensionMismatch, "lu_factor needs a square matrix");
    int n = m.rows;
    LuFactors f{m, std::vector<int>(n), 1};
    Matrix& a = f.lu;

    double max_row_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(a(i, j));
        max_row_norm = std::max(max_row_norm, s);
    }
    const double tol = 1e-12 * std::max(max_row_norm, 1e-300);

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best <= tol)
            throw PdaeError(ErrorCode::SingularMatrix, "pivot below tolerance at column " + std::to_string(k));
        f.piv[k] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            f.sign = -f.sign;
        }
        const cplx pivot = a(k, k);
        cplx* rowk = &a.a[static_cast<size_t>(k) * n];
        for (int i = k + 1; i < n; ++i) {
            cplx* rowi = &a.a[static_cast<size_t>(i) * n];
            cplx l = rowi[k] / pivot;
            rowi[k] = l;
            if (l == cplx(0.0)) continue;
            for (int j = k + 1; j < n; ++j) rowi[j] -= l * rowk[j];
        }
    }
    return f;
}

cvec lu_solve(const LuFactors& f, cvec rhs) {
    int n = f.lu.rows;
    if (static_cast<int>(rhs.size()) != n)
        throw PdaeError(ErrorCode::DimensionMismatch, "lu_solve rhs length");
    for (int k = 0; k < n; ++k)
        if (f.piv[k] != k) std::swap(rhs[k], rhs[f.piv[k]]);
    for (int k = 0; k < n; ++k) {
        cplx xk = rhs[k];
        if (xk == cplx(0.0)) continue;
        const cplx* col = &f.lu.a[0];
        for (int i = k + 1; i < n; ++i) rhs[i] -= col[static_cast<size_t>(i) * n + k] * xk;
    }
    for (int k = n - 1; k >= 0; --k) {
        cplx s = rhs[k];
        const cplx* row = &f.lu.a[static_cast<size_t>(k) * n];
        for (int j = k + 1; j < n; ++j) s -= row[j] * rhs[j];
        rhs[k] = s / row[k];
    }
    return rhs;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (int p = 0; p < b.rows; ++p)
                for (int q = 0; q < b.cols; ++q)
                    c(i * b.rows + p, j * b.cols + q) = aij * b(p, q);
        }
    return c;
}

RankDetail numerical_rank_detail(const Matrix& m, double tol) {
    Matrix a = m;
    int n = std::min(a.rows, a.cols);
    RankDetail d;
    d.threshold = tol * max_abs(m);
    double smallest = 0.0;
    int r = 0;
    for (int k = 0; k < n; ++k) {
        int pi = k, pj = k;
        double best = 0.0;
        for (int i = k; i < a.rows; ++i)
            for (int j = k; j < a.cols; ++j) {
                double v = std::abs(a(i, j));
                if (v > best) { best = v; pi = i; pj = j; }
            }
        if (best <= d.threshold) {
            d.largest_rejected = best;
            break;
        }
        if (pi != k)
            for (int j = 0; j < a.cols; ++j) std::swap(a(k, j), a(pi, j));
        if (pj != k)
            for (int i = 0; i < a.rows; ++i) std::swap(a(i, k), a(i, pj));
        smallest = best;
        ++r;
        const cplx pivot = a(k, k);
        for (int i = k + 1; i < a.rows; ++i) {
            cplx l = a(i, k) / pivot;
            if (l == cplx(0.0)) continue;
            for (int j = k; j < a.cols; ++j) a(i, j) -= l * a(k, j);
        }
    }
    d.rank = r;
    d.smallest_accepted = smallest;
    return d;
}

int numerical_rank(const Matrix& m, double tol) {
    return numerical_rank_detail(m, tol).rank;
}

void banded_lu_factor(BandedLu& b) {
    const int n = b.dim, kl = b.kl, ku = b.ku;
    const int ldrow = n; // elements per storage row
    b.piv.assign(n, 0);
    auto st = [&](int r, int j) -> cplx& { return b.ab[static_cast<size_t>(r) * ldrow + j]; };
    // storage row for (i,j) is kl+ku+i-j
    for (int j = 0; j < n; ++j) {
        int ilimit = std::min(n - 1, j + kl);
        int p = j;
        double best = std::abs(st(kl + ku, j));
        for (int i = j + 1; i <= ilimit; ++i) {
            double v = std::abs(st(kl + ku + i - j, j));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0)
            throw PdaeError(ErrorCode::SingularStageMatrix, "zero pivot in banded factorization at column " + std::to_string(j));
        b.piv[j] = p;
        int jend = std::min(n - 1, j + kl + ku);
        if (p != j) {
            for (int c = j; c <= jend; ++c)
                std::swap(st(kl + ku + j - c, c), st(kl + ku + p - c, c));
        }
        const cplx pivot = st(kl + ku, j);
        for (int i = j + 1; i <= ilimit; ++i) {
            cplx l = st(kl + ku + i - j, j) / pivot;
            st(kl + ku + i - j, j) = l;
            if (l == cplx(0.0)) continue;
            for (int c = j + 1; c <= jend; ++c)
                st(kl + ku + i - c, c) -= l * st(kl + ku + j - c, c);
        }
    }
}

void banded_lu_solve(const BandedLu& b, cvec& x) {
    const int n = b.dim, kl = b.kl, ku = b.ku;
    if (static_cast<int>(x.size()) != n)
        throw PdaeError(ErrorCode::DimensionMismatch, "banded solve rhs length");
    auto st = [&](int r, int j) -> const cplx& { return b.ab[static_cast<size_t>(r) * n + j]; };
    for (int j = 0; j < n; ++j) {
        if (b.piv[j] != j) std::swap(x[j], x[b.piv[j]]);
        cplx xj = x[j];
        if (xj == cplx(0.0)) continue;
        int ilimit = std::min(n - 1, j + kl);
        for (int i = j + 1; i <= ilimit; ++i) x[i] -= st(kl + ku + i - j, j) * xj;
    }
    for (int i = n - 1; i >= 0; --i) {
        cplx s = x[i];
        int jend = std::min(n - 1, i + kl + ku);
        for (int j = i + 1; j <= jend; ++j) s -= st(kl + ku + i - j, j) * x[j];
        x[i] = s / st(kl + ku, i);
    }
}

} // namespace pdae
