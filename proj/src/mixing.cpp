#include "ranklab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ranklab/spectral.hpp"

namespace ranklab {

const char* to_string(MixingKind k) {
    switch (k) {
        case MixingKind::Attention: return "attention";
        case MixingKind::LtiScalar: return "lti";
        case MixingKind::StructuredLti: return "structured";
        case MixingKind::Selective: return "selective";
    }
    return "?";
}

MixingSpec MixingSpec::attention(Matrix w_q, Matrix w_k, Matrix w_v, double d_qk) {
    if (d_qk <= 0.0) throw DomainError("attention temperature must be positive");
    MixingSpec s;
    s.kind = MixingKind::Attention;
    s.w_q = std::move(w_q);
    s.w_k = std::move(w_k);
    s.w_v = std::move(w_v);
    s.d_qk = d_qk;
    return s;
}

MixingSpec MixingSpec::lti_scalar(double a, double b, double c) {
    MixingSpec s;
    s.kind = MixingKind::LtiScalar;
    s.a = a;
    s.b = b;
    s.c = c;
    return s;
}

MixingSpec MixingSpec::structured_lti(std::vector<double> decay, Matrix w_c, Matrix w_b) {
    MixingSpec s;
    s.kind = MixingKind::StructuredLti;
    s.decay = std::move(decay);
    s.w_c = std::move(w_c);
    s.w_b = std::move(w_b);
    return s;
}

MixingSpec MixingSpec::selective(double alpha, Matrix w_b, Matrix w_c) {
    MixingSpec s;
    s.kind = MixingKind::Selective;
    s.alpha = alpha;
    s.w_b = std::move(w_b);
    s.w_c = std::move(w_c);
    return s;
}

namespace {

void expect_kind(const MixingSpec& spec, MixingKind want, const char* op) {
    if (spec.kind != want) {
        throw ShapeMismatch(std::string(op) + " called with a " +
                            to_string(spec.kind) + " spec");
    }
}

void expect_square(const Matrix& w, int d, const char* name) {
    if (w.rows != d || w.cols != d) {
        throw ShapeMismatch(std::string(name) + " must be " + std::to_string(d) +
                            "x" + std::to_string(d) + ", got " +
                            std::to_string(w.rows) + "x" + std::to_string(w.cols));
    }
}

}  // namespace

Matrix attention_mixing(const Matrix& x, const MixingSpec& spec) {
    expect_kind(spec, MixingKind::Attention, "attention_mixing");
    const int d = x.cols;
    expect_square(spec.w_q, d, "w_q");
    expect_square(spec.w_k, d, "w_k");
    const Matrix scores =
        (1.0 / std::sqrt(spec.d_qk)) * (x * spec.w_q * transpose(spec.w_k) * transpose(x));
    return row_softmax(scores);
}

Matrix lti_mixing(const MixingSpec& spec, int n) {
    expect_kind(spec, MixingKind::LtiScalar, "lti_mixing");
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) {
        double pow_a = 1.0;  // a^(j-i), built up as i walks down from j
        for (int i = j; i >= 0; --i) {
            m(j, i) = spec.c * pow_a * spec.b;
            pow_a *= spec.a;
        }
    }
    return m;
}

Matrix one_ss(const std::vector<double>& alpha) {
    const int n = static_cast<int>(alpha.size()) + 1;
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) {
        double prod = 1.0;
        m(j, j) = 1.0;
        for (int i = j - 1; i >= 0; --i) {
            prod *= alpha[i];           // alpha[i] * ... * alpha[j-1]
            m(j, i) = prod;
        }
    }
    return m;
}

Matrix structured_lti_mixing(const MixingSpec& spec, int n) {
    expect_kind(spec, MixingKind::StructuredLti, "structured_lti_mixing");
    if (static_cast<int>(spec.decay.size()) != n - 1) {
        throw ShapeMismatch("decay vector must have length N-1");
    }
    if (spec.w_c.rows != n || spec.w_b.rows != n || spec.w_c.cols != spec.w_b.cols) {
        throw ShapeMismatch("structured factors must be N x H with matching H");
    }
    return hadamard(one_ss(spec.decay), spec.w_c * transpose(spec.w_b));
}

Matrix selective_mixing(const Matrix& y, const MixingSpec& spec) {
    expect_kind(spec, MixingKind::Selective, "selective_mixing");
    const int d = y.cols;
    expect_square(spec.w_b, d, "w_b");
    expect_square(spec.w_c, d, "w_c");
    const std::vector<double> alpha(static_cast<std::size_t>(y.rows) - 1, spec.alpha);
    return hadamard(one_ss(alpha), y * spec.w_c * transpose(spec.w_b) * transpose(y));
}

Matrix apply_gating(const Matrix& o, const Matrix& x, const Matrix& w) {
    if (!o.same_shape(x)) throw ShapeMismatch("gating: output/input shapes differ");
    expect_square(w, x.cols, "gate weight");
    Matrix gate = x * w;
    for (double& z : gate.data) z = z / (1.0 + std::exp(-z));  // silu
    return hadamard(o, gate);
}

double c_m_constant(const MixingSpec& spec, int n) {
    switch (spec.kind) {
        case MixingKind::Attention:
            return std::sqrt(static_cast<double>(n));
        case MixingKind::LtiScalar:
            return std::abs(spec.a) * std::abs(spec.b) * std::abs(spec.c);
        case MixingKind::StructuredLti: {
            double amax = 1.0;  // no decay step is applied when N == 1
            if (!spec.decay.empty()) {
                amax = 0.0;
                for (double v : spec.decay) amax = std::max(amax, std::abs(v));
            }
            return amax * singular_extremes(spec.w_b).sigma_max * frobenius_norm(spec.w_c);
        }
        case MixingKind::Selective:
            return singular_extremes(spec.w_b).sigma_max * frobenius_norm(spec.w_c);
    }
    throw DomainError("unknown mixing kind");
}

}  // namespace ranklab
