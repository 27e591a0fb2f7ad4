#include "ranklab/modelgen.hpp"

#include <cmath>

#include "ranklab/spectral.hpp"

namespace ranklab {

const char* to_string(InitKind k) {
    return k == InitKind::Gaussian ? "gaussian" : "orthogonal";
}

Matrix random_gaussian(int rows, int cols, double stddev, SplitMix64& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = stddev * rng.gaussian();
    return m;
}

Matrix random_orthogonal(int d, SplitMix64& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        const Matrix draw = random_gaussian(d, d, 1.0, rng);
        const Svd svd = jacobi_svd(draw);
        double smin = svd.sigma.empty() ? 0.0 : svd.sigma[0];
        for (double s : svd.sigma) smin = std::min(smin, s);
        if (smin < 1e-9) continue;  // near-singular draw, try again
        return svd.u * transpose(svd.v);
    }
    throw NoConvergence("could not draw a well-conditioned orthogonal matrix");
}

namespace {

Matrix weight(const GenOptions& opt, int rows, int cols, SplitMix64& rng) {
    if (opt.init == InitKind::Orthogonal && rows == cols) {
        return opt.init_scale * random_orthogonal(rows, rng);
    }
    const double stddev = opt.init_scale / std::sqrt(static_cast<double>(opt.d));
    return random_gaussian(rows, cols, stddev, rng);
}

}  // namespace

MixingSpec random_mixing(const GenOptions& opt, SplitMix64& rng) {
    switch (opt.block) {
        case MixingKind::Attention:
            return MixingSpec::attention(weight(opt, opt.d, opt.d, rng),
                                         weight(opt, opt.d, opt.d, rng),
                                         weight(opt, opt.d, opt.d, rng),
                                         static_cast<double>(opt.d));
        case MixingKind::LtiScalar: {
            const double a = rng.uniform(-1.0, 1.0);
            const double b = opt.init_scale * rng.gaussian();
            const double c = opt.init_scale * rng.gaussian();
            return MixingSpec::lti_scalar(a, b, c);
        }
        case MixingKind::StructuredLti: {
            std::vector<double> decay(static_cast<std::size_t>(opt.n) - 1);
            for (double& v : decay) v = rng.uniform(0.0, 1.0);
            // N x H factors with H = d.
            return MixingSpec::structured_lti(std::move(decay),
                                              weight(opt, opt.n, opt.d, rng),
                                              weight(opt, opt.n, opt.d, rng));
        }
        case MixingKind::Selective: {
            const double alpha = rng.uniform(0.9, 1.0);
            return MixingSpec::selective(alpha, weight(opt, opt.d, opt.d, rng),
                                         weight(opt, opt.d, opt.d, rng));
        }
    }
    throw DomainError("unknown mixing kind");
}

ModelSpec random_model(const GenOptions& opt, SplitMix64& rng) {
    ModelSpec model;
    model.seq_len = opt.n;
    model.embed_dim = opt.d;
    model.layers.reserve(static_cast<std::size_t>(opt.k_layers));

    MixingSpec shared;
    if (opt.shared_weights) shared = random_mixing(opt, rng);

    for (int k = 0; k < opt.k_layers; ++k) {
        LayerSpec layer;
        layer.mixing = opt.shared_weights ? shared : random_mixing(opt, rng);
        layer.lambda = opt.lambda;
        layer.use_layernorm = opt.layernorm;
        layer.use_gating = opt.gating;
        if (opt.gating) layer.gate_weight = weight(opt, opt.d, opt.d, rng);
        if (opt.block == MixingKind::Attention) layer.value_weight = layer.mixing.w_v;
        model.layers.push_back(std::move(layer));
    }
    return model;
}

Matrix random_input(int n, int d, double scale, SplitMix64& rng) {
    return random_gaussian(n, d, scale, rng);
}

}  // namespace ranklab
