#pragma once

#include <vector>

#include "ranklab/matrix.hpp"

namespace ranklab {

enum class MixingKind { Attention, LtiScalar, StructuredLti, Selective };

const char* to_string(MixingKind k);

// Which block builds the N x N token-mixing matrix, plus its weights.
// Only the fields of the active kind are meaningful.
struct MixingSpec {
    MixingKind kind = MixingKind::LtiScalar;

    // Attention
    Matrix w_q, w_k, w_v;  // d x d
    double d_qk = 1.0;     // softmax temperature, > 0

    // LtiScalar: one scalar channel, M_ji = c * a^(j-i) * b for j >= i
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    // StructuredLti: per-step decay factors (length N-1) and N x H factors.
    // Selective reuses w_c / w_b as its d x d projections and `alpha` as the
    // shared scalar decay.
    std::vector<double> decay;
    Matrix w_c, w_b;
    double alpha = 1.0;

    static MixingSpec attention(Matrix w_q, Matrix w_k, Matrix w_v, double d_qk);
    static MixingSpec lti_scalar(double a, double b, double c);
    static MixingSpec structured_lti(std::vector<double> decay, Matrix w_c, Matrix w_b);
    static MixingSpec selective(double alpha, Matrix w_b, Matrix w_c);
};

// M = row_softmax(X Wq Wk^T X^T / sqrt(d_qk)); row-stochastic.
Matrix attention_mixing(const Matrix& x, const MixingSpec& spec);

// Lower-triangular scalar-channel mixing; the empty product on the diagonal
// gives c*b.
Matrix lti_mixing(const MixingSpec& spec, int n);

// Lower-triangular 1-semiseparable matrix: entry (j,i), j >= i, is the
// cumulative product alpha[i]*...*alpha[j-1]; diagonal is 1.
Matrix one_ss(const std::vector<double>& alpha);

// M = one_ss(decay) Hadamard (Wc Wb^T).
Matrix structured_lti_mixing(const MixingSpec& spec, int n);

// Input-dependent mixing M = one_ss(alpha,...,alpha) Hadamard (Y Wc Wb^T Y^T).
Matrix selective_mixing(const Matrix& y, const MixingSpec& spec);

// Multiplicative gate applied to the block output before the skip sum:
// o Hadamard silu(x w), silu(z) = z / (1 + exp(-z)).
Matrix apply_gating(const Matrix& o, const Matrix& x, const Matrix& w);

// Operative bound constant for sup_k ||M||_F given unit-row inputs:
// sqrt(N) for attention, |a|*|b|*|c| resp. max|decay|*s_max(Wb)*||Wc||_F for
// the LTI kinds, s_max(Wb)*||Wc||_F for selective.
double c_m_constant(const MixingSpec& spec, int n);

}  // namespace ranklab
