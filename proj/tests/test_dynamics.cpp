#include <cmath>

#include "doctest.h"
#include "ranklab/bounds.hpp"
#include "ranklab/dynamics.hpp"
#include "ranklab/metrics.hpp"
#include "ranklab/modelgen.hpp"
#include "ranklab/oracles.hpp"
#include "ranklab/rng.hpp"
#include "ranklab/spectral.hpp"

using namespace ranklab;

namespace {

LayerSpec lti_pair_layer(double lambda) {
    LayerSpec layer;
    layer.mixing = MixingSpec::structured_lti({2.0}, Matrix(2, 1, {1, 1}),
                                              Matrix(2, 1, {1, 1}));
    layer.lambda = lambda;
    layer.use_layernorm = true;
    return layer;
}

LayerSpec identity_layer(double lambda) {
    LayerSpec layer;
    layer.mixing = MixingSpec::lti_scalar(0, 1, 1);
    layer.lambda = lambda;
    layer.use_layernorm = true;
    return layer;
}

}  // namespace

TEST_CASE("layer forward worked examples") {
    // Fixed lower-triangular mixing with unit skip and LayerNorm.
    const Matrix y1 = layer_forward(Matrix::identity(2), lti_pair_layer(1.0));
    CHECK(max_abs_diff(y1, Matrix(2, 2, {1, 0, 0.70710678, 0.70710678})) < 1e-8);

    // Identity mixing with lambda = 0 and LayerNorm is a no-op on unit rows.
    const Matrix u = row_normalize(Matrix(2, 2, {1, 2, -1, 3}));
    CHECK(max_abs_diff(layer_forward(u, identity_layer(0.0)), u) < 1e-12);

    // Input-dependent mixing, no skip.
    LayerSpec sel;
    sel.mixing = MixingSpec::selective(1.0, Matrix::identity(2), Matrix::identity(2));
    sel.lambda = 0.0;
    sel.use_layernorm = true;
    const Matrix y2 =
        layer_forward(Matrix(2, 2, {1, 0, 0.70710678, 0.70710678}), sel);
    CHECK(max_abs_diff(y2, Matrix(2, 2, {1, 0, 0.89442719, 0.44721360})) < 1e-8);
}

TEST_CASE("value weight is rejected outside attention") {
    LayerSpec layer = identity_layer(1.0);
    layer.value_weight = Matrix::identity(2);
    CHECK_THROWS_AS(layer_forward(Matrix::identity(2), layer), ShapeMismatch);
}

TEST_CASE("gating multiplies the block output before the skip") {
    SplitMix64 rng(3);
    const int n = 3, d = 4;
    LayerSpec layer;
    layer.mixing = MixingSpec::selective(0.9, random_gaussian(d, d, 0.5, rng),
                                         random_gaussian(d, d, 0.5, rng));
    layer.lambda = 0.7;
    layer.use_layernorm = false;
    layer.use_gating = true;
    layer.gate_weight = random_gaussian(d, d, 0.5, rng);
    const Matrix y = random_gaussian(n, d, 1.0, rng);

    const Matrix got = layer_forward(y, layer);
    const Matrix o = selective_mixing(y, layer.mixing) * y;
    const Matrix expect = 0.7 * y + apply_gating(o, y, *layer.gate_weight);
    CHECK(max_abs_diff(got, expect) < 1e-12);

    layer.gate_weight.reset();
    CHECK_THROWS_AS(layer_forward(y, layer), ShapeMismatch);
}

TEST_CASE("model forward traces") {
    ModelSpec empty;
    empty.seq_len = 2;
    empty.embed_dim = 2;
    const RankTrace t0 = model_forward(Matrix::identity(2), empty);
    CHECK(t0.entries.size() == 1);
    CHECK(t0.entries[0].mu == doctest::Approx(1.0));

    // Two input-dependent layers reach the closed-form state (4,1)/sqrt(17).
    CounterexampleSpec spec{CounterexampleSystem::SelectivePair, 0.0, 1.0, 1.0};
    const RankTrace t2 =
        model_forward(counterexample_input(spec), counterexample_model(spec, 2), true);
    CHECK((*t2.entries[2].y)(1, 0) == doctest::Approx(0.97014250).epsilon(1e-8));
    CHECK((*t2.entries[2].y)(1, 1) == doctest::Approx(0.24253563).epsilon(1e-8));

    // Twenty layers of the fixed-mixing pair collapse the trace.
    CounterexampleSpec lti{CounterexampleSystem::StructuredLtiPair, 0.0, 1.0, 0.0};
    const RankTrace t20 =
        model_forward(counterexample_input(lti), counterexample_model(lti, 20), false);
    for (std::size_t k = 1; k < t20.entries.size(); ++k) {
        CHECK(t20.entries[k].mu < t20.entries[k - 1].mu);
    }
    CHECK(t20.entries[20].mu < 1e-8);
}

TEST_CASE("LayerNorm models keep unit rows and bounded mu") {
    SplitMix64 rng(41);
    const MixingKind kinds[] = {MixingKind::Attention, MixingKind::LtiScalar,
                                MixingKind::StructuredLti, MixingKind::Selective};
    for (int t = 0; t < 24; ++t) {
        GenOptions opt;
        opt.block = kinds[t % 4];
        opt.n = rng.uniform_int(2, 6);
        opt.d = rng.uniform_int(2, 6);
        opt.k_layers = rng.uniform_int(1, 6);
        opt.lambda = rng.uniform(-2.0, 2.0);
        opt.layernorm = true;
        const ModelSpec model = random_model(opt, rng);
        const Matrix y0 = random_input(opt.n, opt.d, 1.0, rng);
        RankTrace trace;
        try {
            trace = model_forward(y0, model, true);
        } catch (const Error&) {
            continue;  // rare degenerate draw
        }
        const double root_n = std::sqrt(static_cast<double>(opt.n));
        for (std::size_t k = 0; k < trace.entries.size(); ++k) {
            CHECK(trace.entries[k].y_frob == doctest::Approx(root_n).epsilon(1e-10));
            CHECK(trace.entries[k].mu * trace.entries[k].mu <= opt.n + 1e-9);
            const Matrix& y = *trace.entries[k].y;
            for (int i = 0; i < y.rows; ++i) {
                double norm = 0.0;
                for (int j = 0; j < y.cols; ++j) norm += y(i, j) * y(i, j);
                CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("identity mixing with zero skip is the identity for any depth") {
    SplitMix64 rng(43);
    for (int t = 0; t < 10; ++t) {
        const int n = rng.uniform_int(2, 5);
        const int d = rng.uniform_int(2, 5);
        ModelSpec model;
        model.seq_len = n;
        model.embed_dim = d;
        model.layers.assign(static_cast<std::size_t>(rng.uniform_int(1, 12)),
                            identity_layer(0.0));
        const Matrix y0 = row_normalize(random_gaussian(n, d, 1.0, rng));
        const RankTrace trace = model_forward(y0, model, true);
        CHECK(max_abs_diff(*trace.entries.back().y, y0) < 1e-12);
    }
}

TEST_CASE("overflow reports the failing layer") {
    // Selective stack without normalisation blows up doubly exponentially.
    SplitMix64 rng(47);
    ModelSpec model;
    model.seq_len = 4;
    model.embed_dim = 4;
    LayerSpec layer;
    layer.mixing = MixingSpec::selective(1.0, random_gaussian(4, 4, 2.0, rng),
                                         random_gaussian(4, 4, 2.0, rng));
    layer.lambda = 0.0;
    layer.use_layernorm = false;
    model.layers.assign(64, layer);
    const Matrix y0 = 4.0 * Matrix::identity(4);
    try {
        model_forward(y0, model);
        FAIL("expected NonFinite");
    } catch (const NonFinite& e) {
        REQUIRE(e.layer.has_value());
        CHECK(*e.layer >= 1);
        CHECK(*e.layer < 16);
    }
}

TEST_CASE("simulated traces satisfy the one-step mu floor") {
    SplitMix64 rng(53);
    const MixingKind kinds[] = {MixingKind::Attention, MixingKind::LtiScalar,
                                MixingKind::StructuredLti, MixingKind::Selective};
    for (int t = 0; t < 20; ++t) {
        GenOptions opt;
        opt.block = kinds[t % 4];
        opt.n = rng.uniform_int(2, 6);
        opt.d = rng.uniform_int(2, 6);
        opt.k_layers = rng.uniform_int(2, 6);
        opt.lambda = rng.uniform(0.0, 20.0);
        opt.layernorm = true;
        const ModelSpec model = random_model(opt, rng);
        const Matrix y0 = random_input(opt.n, opt.d, 1.0, rng);
        RankTrace trace;
        try {
            trace = model_forward(y0, model, true);
        } catch (const Error&) {
            continue;
        }
        BoundConstants kc;
        kc.n = opt.n;
        kc.a = 0.5;
        kc.c = 1.0;
        kc.s = 1.0;
        if (opt.block == MixingKind::Attention) {
            bool first = true;
            for (const LayerSpec& layer : model.layers) {
                const SingularExtremes se = singular_extremes(*layer.value_weight);
                kc.c = first ? se.sigma_min : std::min(kc.c, se.sigma_min);
                kc.s = first ? se.sigma_max : std::max(kc.s, se.sigma_max);
                first = false;
            }
        }
        double c_m = 0.0;
        for (std::size_t k = 0; k + 1 < trace.entries.size(); ++k) {
            c_m = std::max(c_m, frobenius_norm(mixing_matrix_for(
                                    *trace.entries[k].y, model.layers[k].mixing)));
        }
        kc.c_m = c_m;
        for (std::size_t k = 0; k + 1 < trace.entries.size(); ++k) {
            const double mu_sq = trace.entries[k].mu * trace.entries[k].mu;
            const double next_sq = trace.entries[k + 1].mu * trace.entries[k + 1].mu;
            CHECK(next_sq >= recursion_floor(mu_sq, opt.lambda, kc) - 1e-9);
        }
    }
}
