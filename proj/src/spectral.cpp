#include "ranklab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ranklab {

namespace {

// One full cycle of one-sided Jacobi rotations over the column pairs of a
// (tall or square) matrix. Returns true when every pair was already
// orthogonal to within the relative tolerance. When v is non-null the
// accumulated right rotations are applied to it as well.
bool one_sided_sweep(Matrix& a, Matrix* v) {
    bool converged = true;
    const int n = a.cols;
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            double app = 0.0, aqq = 0.0, apq = 0.0;
            for (int i = 0; i < a.rows; ++i) {
                app += a(i, p) * a(i, p);
                aqq += a(i, q) * a(i, q);
                apq += a(i, p) * a(i, q);
            }
            if (std::abs(apq) <= kJacobiRelTol * std::sqrt(app * aqq)) continue;
            converged = false;

            const double zeta = (aqq - app) / (2.0 * apq);
            const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = c * t;
            for (int i = 0; i < a.rows; ++i) {
                const double x = a(i, p);
                const double y = a(i, q);
                a(i, p) = c * x - s * y;
                a(i, q) = s * x + c * y;
            }
            if (v != nullptr) {
                for (int i = 0; i < v->rows; ++i) {
                    const double x = (*v)(i, p);
                    const double y = (*v)(i, q);
                    (*v)(i, p) = c * x - s * y;
                    (*v)(i, q) = s * x + c * y;
                }
            }
        }
    }
    return converged;
}

void run_one_sided(Matrix& a, Matrix* v) {
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (one_sided_sweep(a, v)) return;
    }
    throw NoConvergence("one-sided Jacobi exceeded the sweep cap");
}

std::vector<double> column_norms(const Matrix& a) {
    std::vector<double> out(a.cols, 0.0);
    for (int j = 0; j < a.cols; ++j) {
        double acc = 0.0;
        for (int i = 0; i < a.rows; ++i) acc += a(i, j) * a(i, j);
        out[j] = std::sqrt(acc);
    }
    return out;
}

}  // namespace

SingularExtremes singular_extremes(const Matrix& m) {
    Matrix work = (m.rows >= m.cols) ? m : transpose(m);
    run_one_sided(work, nullptr);
    const std::vector<double> sigma = column_norms(work);
    SingularExtremes out;
    out.sigma_min = *std::min_element(sigma.begin(), sigma.end());
    out.sigma_max = *std::max_element(sigma.begin(), sigma.end());
    return out;
}

Svd jacobi_svd(const Matrix& m) {
    if (m.rows != m.cols) throw ShapeMismatch("jacobi_svd expects a square matrix");
    Svd out;
    out.v = Matrix::identity(m.cols);
    Matrix work = m;
    run_one_sided(work, &out.v);
    out.sigma = column_norms(work);
    out.u = Matrix(m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j) {
        const double s = out.sigma[j];
        if (s > 0.0) {
            for (int i = 0; i < m.rows; ++i) out.u(i, j) = work(i, j) / s;
        } else {
            out.u(j, j) = 1.0;  // placeholder column, see header note
        }
    }
    return out;
}

EigenExtremes symmetric_eigen_extremes(const Matrix& m) {
    if (m.rows != m.cols) throw NotSymmetric("matrix is not square");
    for (int i = 0; i < m.rows; ++i) {
        for (int j = i + 1; j < m.cols; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-12) {
                throw NotSymmetric("matrix is not symmetric within 1e-12");
            }
        }
    }

    Matrix a = m;
    const int n = a.rows;
    const double off_tol = kJacobiRelTol * std::max(frobenius_norm(a), 1e-300);
    for (int sweep = 0;; ++sweep) {
        if (sweep >= kJacobiMaxSweeps) {
            throw NoConvergence("cyclic Jacobi exceeded the sweep cap");
        }
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= off_tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= off_tol) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                // Rotate rows and columns p,q of the symmetric matrix.
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }

    EigenExtremes out;
    out.lambda_min = a(0, 0);
    out.lambda_max = a(0, 0);
    for (int i = 1; i < n; ++i) {
        out.lambda_min = std::min(out.lambda_min, a(i, i));
        out.lambda_max = std::max(out.lambda_max, a(i, i));
    }
    return out;
}

}  // namespace ranklab
