#pragma once

#include <complex>
#include <vector>

#include "pdae/errors.hpp"

namespace pdae {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Dense row-major matrix over complex scalars. Real matrices are the
/// imaginary-part-zero special case.
struct Matrix {
    int rows = 0;
    int cols = 0;
    cvec a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, const Matrix& a);
cvec matvec(const Matrix& m, const cvec& v);
double max_abs(const Matrix& m);
double frobenius(const Matrix& m);

/// PA = LU with partial pivoting; combined L/U storage, pivot rows, and the
/// permutation sign (used for determinant signs).
struct LuFactors {
    Matrix lu;
    std::vector<int> piv;
    int sign = 1;
};

LuFactors lu_factor(const Matrix& m);
cvec lu_solve(const LuFactors& f, cvec rhs);

Matrix kron(const Matrix& a, const Matrix& b);

int numerical_rank(const Matrix& m, double tol);

/// Rank plus the pivot magnitudes around the cut, so callers can detect
/// near-ties against the tolerance.
struct RankDetail {
    int rank = 0;
    double smallest_accepted = 0.0; // 0 when rank == 0
    double largest_rejected = 0.0;  // 0 when full rank
    double threshold = 0.0;
};

RankDetail numerical_rank_detail(const Matrix& m, double tol);

/// Banded LU with partial pivoting, LAPACK-style band storage with kl extra
/// fill rows. Entry (i,j) with |i-j| within the band lives at
/// ab[(kl + ku + i - j) * dim + j].
struct BandedLu {
    int dim = 0;
    int kl = 0;
    int ku = 0;
    cvec ab; // (2*kl + ku + 1) x dim, row-major
    std::vector<int> piv;

    cplx& at(int i, int j) { return ab[static_cast<size_t>(kl + ku + i - j) * dim + j]; }
};

/// Factors a band matrix in place; `ab` must be pre-filled via BandedLu::at
/// with the top kl rows zeroed (fill space).
void banded_lu_factor(BandedLu& b);
void banded_lu_solve(const BandedLu& b, cvec& x);

} // namespace pdae
