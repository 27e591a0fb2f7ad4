#include "ranklab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ranklab {

namespace {

// Absorb round-off that pushes alpha just below its lower limit 1.
double clamp_alpha(double alpha) {
    if (alpha >= 1.0) return alpha;
    if (alpha > 1.0 - 1e-9) return 1.0;
    throw DomainError("alpha fell below 1: " + std::to_string(alpha));
}

}  // namespace

double lti_pair_alpha_step(double alpha_k, double lambda) {
    if (lambda == -1.0) throw LambdaSingular("skip strength -1 is excluded");
    const double alpha = clamp_alpha(alpha_k);
    const double r = 1.0 + lambda;
    return alpha * (1.0 + 4.0 / (r * r)) +
           (4.0 / r) * std::sqrt(alpha - 1.0) * std::sqrt(alpha);
}

Matrix lti_pair_state(int k, double lambda) {
    if (lambda == -1.0) throw LambdaSingular("skip strength -1 is excluded");
    if (k < 0) throw DomainError("layer index must be >= 0");
    double alpha = 1.0;
    for (int i = 0; i < k; ++i) alpha = clamp_alpha(lti_pair_alpha_step(alpha, lambda));
    return Matrix(2, 2,
                  {1.0, 0.0, std::sqrt((alpha - 1.0) / alpha), 1.0 / std::sqrt(alpha)});
}

Matrix selective_pair_state(int k, double lambda, double alpha0, double beta0) {
    if (!(alpha0 > 0.0)) throw DomainError("alpha0 must be positive");
    if (k < 0) throw DomainError("layer index must be >= 0");
    const double u = 2.0 + lambda;
    const double w = 1.0 + lambda;

    // The second row is (u^k a0, w^k b0) normalised; factor out the larger
    // power so no intermediate overflows however deep the stack is.
    double x, y;
    if (std::abs(u) >= std::abs(w)) {
        // u - w == 1, so u is never 0 on this branch.
        const double r = w / u;
        x = alpha0;
        y = std::pow(r, k) * beta0;
        const double sgn = (u < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
        x *= sgn;
        y *= sgn;
    } else {
        const double r = u / w;
        x = std::pow(r, k) * alpha0;
        y = beta0;
        const double sgn = (w < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
        x *= sgn;
        y *= sgn;
    }
    const double denom = std::hypot(x, y);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        throw DegenerateNorm("second-row norm degenerate at k=" + std::to_string(k));
    }
    const double row_sign = (w < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
    return Matrix(2, 2, {row_sign, 0.0, x / denom, y / denom});
}

Matrix counterexample_input(const CounterexampleSpec& spec) {
    if (spec.system == CounterexampleSystem::StructuredLtiPair) {
        return Matrix::identity(2);
    }
    const double norm = std::hypot(spec.alpha0, spec.beta0);
    if (!(spec.alpha0 > 0.0)) throw DomainError("alpha0 must be positive");
    return Matrix(2, 2, {1.0, 0.0, spec.alpha0 / norm, spec.beta0 / norm});
}

ModelSpec counterexample_model(const CounterexampleSpec& spec, int big_k) {
    if (big_k < 0) throw DomainError("layer count must be >= 0");
    LayerSpec layer;
    layer.lambda = spec.lambda;
    layer.use_layernorm = true;
    if (spec.system == CounterexampleSystem::StructuredLtiPair) {
        if (spec.lambda == -1.0) throw LambdaSingular("skip strength -1 is excluded");
        // one_ss([2]) Hadamard ones(2x2) = [[1,0],[2,1]]
        layer.mixing = MixingSpec::structured_lti(
            {2.0}, Matrix(2, 1, {1.0, 1.0}), Matrix(2, 1, {1.0, 1.0}));
    } else {
        layer.mixing = MixingSpec::selective(1.0, Matrix::identity(2), Matrix::identity(2));
    }
    ModelSpec model;
    model.seq_len = 2;
    model.embed_dim = 2;
    model.layers.assign(static_cast<std::size_t>(big_k), layer);
    return model;
}

double oracle_vs_simulator(const CounterexampleSpec& spec, int big_k) {
    const ModelSpec model = counterexample_model(spec, big_k);
    const RankTrace trace =
        model_forward(counterexample_input(spec), model, /*record_snapshots=*/true);

    double worst = 0.0;
    for (int k = 0; k <= big_k; ++k) {
        const Matrix closed =
            spec.system == CounterexampleSystem::StructuredLtiPair
                ? lti_pair_state(k, spec.lambda)
                : selective_pair_state(k, spec.lambda, spec.alpha0, spec.beta0);
        worst = std::max(worst, max_abs_diff(*trace.entries[k].y, closed));
    }
    return worst;
}

}  // namespace ranklab
