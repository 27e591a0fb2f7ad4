#include "ranklab/metrics.hpp"

#include <algorithm>

namespace ranklab {

Matrix residual(const Matrix& y) {
    const Matrix mean = col_mean_row(y);
    Matrix out(y.rows, y.cols);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) out(i, j) = y(i, j) - mean(0, j);
    return out;
}

double mu(const Matrix& y) { return frobenius_norm(residual(y)); }

double normalized_mu(const Matrix& y) {
    const double norm = frobenius_norm(y);
    if (norm == 0.0) throw ZeroMatrix("normalized_mu of an all-zero matrix");
    return mu(y) / norm;
}

double phi(const Matrix& y) {
    double lo = 0.0;
    bool first = true;
    for (int i = 0; i < y.rows; ++i) {
        for (int j = i; j < y.rows; ++j) {
            double dot = 0.0;
            for (int k = 0; k < y.cols; ++k) dot += y(i, k) * y(j, k);
            if (first || dot < lo) {
                lo = dot;
                first = false;
            }
        }
    }
    return lo;
}

}  // namespace ranklab
