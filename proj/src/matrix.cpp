#include "ranklab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ranklab {

namespace {

void check_valid_shape(int r, int c) {
    if (r < 1 || c < 1) {
        throw ShapeMismatch("matrix dimensions must be >= 1, got " +
                            std::to_string(r) + "x" + std::to_string(c));
    }
}

void ensure_finite(const Matrix& m, const char* op) {
    if (!all_finite(m)) {
        throw NonFinite(std::string(op) + " produced a non-finite entry");
    }
}

}  // namespace

Matrix::Matrix(int r, int c) : rows(r), cols(c) {
    check_valid_shape(r, c);
    data.assign(static_cast<std::size_t>(r) * c, 0.0);
}

Matrix::Matrix(int r, int c, std::initializer_list<double> entries)
    : rows(r), cols(c), data(entries) {
    check_valid_shape(r, c);
    if (data.size() != static_cast<std::size_t>(r) * c) {
        throw ShapeMismatch("initializer has " + std::to_string(data.size()) +
                            " entries for a " + std::to_string(r) + "x" +
                            std::to_string(c) + " matrix");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.data.begin(), m.data.end(),
                       [](double v) { return std::isfinite(v); });
}

double max_abs(const Matrix& m) {
    double worst = 0.0;
    for (double v : m.data) worst = std::max(worst, std::abs(v));
    return worst;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("add: shapes differ");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    ensure_finite(out, "add");
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("sub: shapes differ");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    ensure_finite(out, "sub");
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw ShapeMismatch("matmul: " + std::to_string(a.rows) + "x" +
                            std::to_string(a.cols) + " times " +
                            std::to_string(b.rows) + "x" + std::to_string(b.cols));
    }
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    ensure_finite(out, "matmul");
    return out;
}

Matrix operator*(double s, const Matrix& m) {
    Matrix out = m;
    for (double& v : out.data) v *= s;
    ensure_finite(out, "scale");
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("hadamard: shapes differ");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
    ensure_finite(out, "hadamard");
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    return out;
}

Matrix col_mean_row(const Matrix& m) {
    Matrix out(1, m.cols);
    for (int j = 0; j < m.cols; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m.rows; ++i) acc += m(i, j);
        out(0, j) = acc / m.rows;
    }
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("max_abs_diff: shapes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    }
    return worst;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return a.same_shape(b) && max_abs_diff(a, b) <= tol;
}

double frobenius_norm(const Matrix& m) {
    // Scaled accumulation so that ||m|| up to ~1e308 does not overflow in
    // the squares.
    const double scale = max_abs(m);
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : m.data) {
        const double r = v / scale;
        acc += r * r;
    }
    return scale * std::sqrt(acc);
}

Matrix row_softmax(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        double hi = m(i, 0);
        for (int j = 1; j < m.cols; ++j) hi = std::max(hi, m(i, j));
        double sum = 0.0;
        for (int j = 0; j < m.cols; ++j) {
            const double e = std::exp(m(i, j) - hi);
            out(i, j) = e;
            sum += e;
        }
        for (int j = 0; j < m.cols; ++j) out(i, j) /= sum;
    }
    ensure_finite(out, "row_softmax");
    return out;
}

Matrix row_normalize(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i) {
        // Scaled norm so rows with entries near the overflow limit still
        // normalise instead of squaring to infinity.
        double scale = 0.0;
        for (int j = 0; j < m.cols; ++j) scale = std::max(scale, std::abs(m(i, j)));
        double acc = 0.0;
        if (scale > 0.0) {
            for (int j = 0; j < m.cols; ++j) {
                const double r = m(i, j) / scale;
                acc += r * r;
            }
        }
        const double norm = scale * std::sqrt(acc);
        if (!(norm > kRowNormEps)) {
            throw ZeroRow("row_normalize: row " + std::to_string(i) +
                          " has norm " + std::to_string(norm));
        }
        for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j) / norm;
    }
    ensure_finite(out, "row_normalize");
    return out;
}

}  // namespace ranklab
