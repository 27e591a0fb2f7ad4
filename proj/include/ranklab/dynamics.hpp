#pragma once

#include <optional>
#include <vector>

#include "ranklab/matrix.hpp"
#include "ranklab/mixing.hpp"

namespace ranklab {

// Entries past this magnitude raise NonFinite with the layer index instead
// of propagating into infinities.
inline constexpr double kOverflowLimit = 1e308;

// One layer: mixing -> optional gating -> lambda-skip -> optional
// normalisation-only LayerNorm.
struct LayerSpec {
    MixingSpec mixing;
    double lambda = 1.0;
    bool use_layernorm = true;
    bool use_gating = false;
    std::optional<Matrix> gate_weight;   // required iff use_gating
    std::optional<Matrix> value_weight;  // C_V; identity when absent (attention only)
};

struct ModelSpec {
    std::vector<LayerSpec> layers;
    int seq_len = 0;
    int embed_dim = 0;
    // Row-normalise the input before layer 1 when any layer uses LayerNorm,
    // so unit rows enter every layer. Disable to feed the raw input.
    bool normalize_input = true;

    bool any_layernorm() const;
};

struct TraceEntry {
    double mu = 0.0;
    double normalized_mu = 0.0;  // 0 when y_frob == 0
    double phi = 0.0;
    double y_frob = 0.0;
    std::optional<Matrix> y;  // snapshot when requested
};

// Per-layer record; entries[k] describes Y^(k), entry 0 the input as it
// enters layer 1 (after the optional input normalisation).
struct RankTrace {
    std::vector<TraceEntry> entries;
};

// Builds the mixing matrix a layer would apply to y_prev. Exposed so
// checks can reconstruct M from trace snapshots.
Matrix mixing_matrix_for(const Matrix& y_prev, const MixingSpec& spec);

Matrix layer_forward(const Matrix& y_prev, const LayerSpec& layer);

RankTrace model_forward(const Matrix& y0, const ModelSpec& model,
                        bool record_snapshots = false);

TraceEntry measure(const Matrix& y, bool keep_snapshot = false);

}  // namespace ranklab
