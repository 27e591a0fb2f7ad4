#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranklab/bounds.hpp"
#include "ranklab/dynamics.hpp"
#include "ranklab/modelgen.hpp"
#include "ranklab/oracles.hpp"

namespace ranklab {

// One experiment configuration as assembled from the config file and CLI
// flags. Identical configs (seed included) produce byte-identical artifacts.
struct RunConfig {
    std::uint64_t seed = 0;
    MixingKind block = MixingKind::Selective;
    int n = 8;
    int d = 8;
    int k_layers = 24;
    std::vector<double> lambda_list = {-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0};
    bool layernorm = true;
    bool gating = false;
    InitKind init = InitKind::Gaussian;
    double init_scale = 1.0;
    std::string output_path;

    void validate() const;
};

// One CSV row per (run, layer). Metric fields are absent when the run
// overflowed at this layer; such rows carry the literal token `overflow`
// in the CSV and terminate their series.
struct SweepRow {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string block;
    int layer = 0;
    double lambda = 0.0;
    std::optional<double> mu;
    std::optional<double> normalized_mu;
    std::optional<double> phi;
    std::optional<double> y_frob;
};

inline constexpr const char* kCsvHeader =
    "run_id,seed,block,layer,lambda,mu,normalized_mu,phi,y_frob";

std::string format_double(double v);  // shortest exact %.17g form

std::string emit_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

// Layer-by-layer forward pass that reports an overflow instead of throwing,
// so a sweep can flag the failing layer and move on.
struct TracedRun {
    std::vector<TraceEntry> entries;
    std::optional<int> overflow_layer;
};

TracedRun run_traced(const Matrix& y0, const ModelSpec& model,
                     bool record_snapshots = false);

// Sweep over lambda_list with one set of weights: the same seed yields the
// same weights for every lambda, and weights/input streams are derived from
// tagged forks so the list's composition never shifts other rows.
std::vector<SweepRow> run_lambda_sweep(const RunConfig& config);

// 2x2 {gating on/off} x {layernorm on/off} grid for a selective block with
// identical weights in every cell. Input rows are normalised so the
// no-LayerNorm cells start from unit rows. lambda is lambda_list.front().
std::vector<SweepRow> run_ablation(const RunConfig& config);

struct Report {
    std::string text;
    std::string json;
};

Report run_bound_report(const BoundConstants& constants,
                        const std::vector<double>& lambdas, int big_k);

Report run_counterexample(const CounterexampleSpec& spec, int big_k);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace ranklab
