#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "ranklab/error.hpp"

namespace ranklab {

// Row norms below this are treated as degenerate rather than round-off.
inline constexpr double kRowNormEps = 1e-12;

// Dense row-major real matrix. Rows are tokens and columns are embedding
// features unless a function says otherwise. Every operation that produces
// a Matrix checks its result for NaN/Inf and throws NonFinite instead of
// returning poisoned values.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // rows*cols entries, row-major

    Matrix() = default;
    Matrix(int r, int c);  // zero-filled
    Matrix(int r, int c, std::initializer_list<double> entries);

    double& operator()(int i, int j) {
        return data[static_cast<std::size_t>(i) * cols + j];
    }
    double operator()(int i, int j) const {
        return data[static_cast<std::size_t>(i) * cols + j];
    }

    bool same_shape(const Matrix& o) const {
        return rows == o.rows && cols == o.cols;
    }

    static Matrix identity(int n);
    static Matrix zeros(int r, int c) { return Matrix(r, c); }
};

bool all_finite(const Matrix& m);
double max_abs(const Matrix& m);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);  // matrix product
Matrix operator*(double s, const Matrix& m);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// 1 x cols row of column means, i.e. (1/rows) * 1^T m.
Matrix col_mean_row(const Matrix& m);

bool approx_equal(const Matrix& a, const Matrix& b, double tol);
double max_abs_diff(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);

// Row-wise softmax, stabilised by subtracting each row's maximum before
// exponentiation. Output rows are nonnegative and sum to 1.
Matrix row_softmax(const Matrix& m);

// Normalisation-only LayerNorm: divides each row by its Euclidean norm,
// i.e. D*m with D = diag(1/||m_i||). Throws ZeroRow when a row norm is
// at or below kRowNormEps.
Matrix row_normalize(const Matrix& m);

}  // namespace ranklab
