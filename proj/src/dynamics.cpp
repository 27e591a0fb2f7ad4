#include "ranklab/dynamics.hpp"

#include <algorithm>
#include <string>

#include "ranklab/metrics.hpp"

namespace ranklab {

bool ModelSpec::any_layernorm() const {
    return std::any_of(layers.begin(), layers.end(),
                       [](const LayerSpec& l) { return l.use_layernorm; });
}

Matrix mixing_matrix_for(const Matrix& y_prev, const MixingSpec& spec) {
    switch (spec.kind) {
        case MixingKind::Attention: return attention_mixing(y_prev, spec);
        case MixingKind::LtiScalar: return lti_mixing(spec, y_prev.rows);
        case MixingKind::StructuredLti: return structured_lti_mixing(spec, y_prev.rows);
        case MixingKind::Selective: return selective_mixing(y_prev, spec);
    }
    throw DomainError("unknown mixing kind");
}

Matrix layer_forward(const Matrix& y_prev, const LayerSpec& layer) {
    if (layer.value_weight && layer.mixing.kind != MixingKind::Attention) {
        throw ShapeMismatch("value weight is only valid for attention layers");
    }

    const Matrix m = mixing_matrix_for(y_prev, layer.mixing);
    Matrix o = layer.value_weight ? m * (y_prev * *layer.value_weight) : m * y_prev;

    if (layer.use_gating) {
        if (!layer.gate_weight) throw ShapeMismatch("gating enabled without a gate weight");
        o = apply_gating(o, y_prev, *layer.gate_weight);
    }

    const Matrix skipped = layer.lambda * y_prev + o;
    if (max_abs(skipped) > kOverflowLimit) {
        throw NonFinite("layer output exceeded the overflow limit");
    }
    return layer.use_layernorm ? row_normalize(skipped) : skipped;
}

TraceEntry measure(const Matrix& y, bool keep_snapshot) {
    TraceEntry e;
    e.mu = mu(y);
    e.y_frob = frobenius_norm(y);
    e.normalized_mu = e.y_frob > 0.0 ? e.mu / e.y_frob : 0.0;
    e.phi = phi(y);
    if (keep_snapshot) e.y = y;
    return e;
}

RankTrace model_forward(const Matrix& y0, const ModelSpec& model,
                        bool record_snapshots) {
    if (y0.rows != model.seq_len || y0.cols != model.embed_dim) {
        throw ShapeMismatch("input is " + std::to_string(y0.rows) + "x" +
                            std::to_string(y0.cols) + ", model expects " +
                            std::to_string(model.seq_len) + "x" +
                            std::to_string(model.embed_dim));
    }

    Matrix y = (model.normalize_input && model.any_layernorm())
                   ? row_normalize(y0)
                   : y0;

    RankTrace trace;
    trace.entries.reserve(model.layers.size() + 1);
    trace.entries.push_back(measure(y, record_snapshots));

    for (std::size_t k = 0; k < model.layers.size(); ++k) {
        try {
            y = layer_forward(y, model.layers[k]);
        } catch (const NonFinite& e) {
            throw NonFinite("layer " + std::to_string(k + 1) + ": " + e.what(),
                            static_cast<int>(k + 1));
        } catch (const ZeroRow& e) {
            throw ZeroRow("layer " + std::to_string(k + 1) + ": " + e.what());
        }
        trace.entries.push_back(measure(y, record_snapshots));
    }
    return trace;
}

}  // namespace ranklab
