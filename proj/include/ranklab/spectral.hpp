#pragma once

#include <vector>

#include "ranklab/matrix.hpp"

namespace ranklab {

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelTol = 1e-14;

struct SingularExtremes {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

// Extreme singular values via one-sided Jacobi on the columns (the matrix
// is transposed first when it is wider than tall). Matrices here are tiny,
// so plain cyclic sweeps are accurate and fast enough.
SingularExtremes singular_extremes(const Matrix& m);

struct EigenExtremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// Extreme eigenvalues of a symmetric matrix via cyclic two-sided Jacobi.
// Throws NotSymmetric when |m_ij - m_ji| exceeds 1e-12.
EigenExtremes symmetric_eigen_extremes(const Matrix& m);

// Full decomposition m = u * diag(sigma) * v^T for square m; used to
// project random draws onto the orthogonal group. Singular values are
// unsorted; u columns for (near-)zero singular values are unreliable, so
// callers that need them resample.
struct Svd {
    Matrix u;
    Matrix v;
    std::vector<double> sigma;
};

Svd jacobi_svd(const Matrix& m);

}  // namespace ranklab
