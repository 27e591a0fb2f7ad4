#include "ranklab/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ranklab/metrics.hpp"

namespace ranklab {

using ordered_json = nlohmann::ordered_json;

void RunConfig::validate() const {
    if (n < 1 || d < 1 || k_layers < 0) {
        throw ConfigError("n and d must be >= 1, layers >= 0");
    }
    if (lambda_list.empty()) throw ConfigError("lambda list must not be empty");
    if (!(init_scale > 0.0)) throw ConfigError("init scale must be positive");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("overflow");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_cell(const std::string& s) {
    if (s == "overflow") return std::nullopt;
    return std::stod(s);
}

}  // namespace

std::string emit_csv(const std::vector<SweepRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SweepRow& r : rows) {
        out += r.run_id;
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.block;
        out += ',';
        out += std::to_string(r.layer);
        out += ',';
        out += format_double(r.lambda);
        out += ',';
        out += cell(r.mu);
        out += ',';
        out += cell(r.normalized_mu);
        out += ',';
        out += cell(r.phi);
        out += ',';
        out += cell(r.y_frob);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw IoError("unexpected CSV header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 9) throw IoError("CSV row with " + std::to_string(f.size()) + " fields");
        SweepRow r;
        r.run_id = f[0];
        r.seed = std::stoull(f[1]);
        r.block = f[2];
        r.layer = std::stoi(f[3]);
        r.lambda = std::stod(f[4]);
        r.mu = parse_cell(f[5]);
        r.normalized_mu = parse_cell(f[6]);
        r.phi = parse_cell(f[7]);
        r.y_frob = parse_cell(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

TracedRun run_traced(const Matrix& y0, const ModelSpec& model, bool record_snapshots) {
    TracedRun out;
    Matrix y = (model.normalize_input && model.any_layernorm()) ? row_normalize(y0) : y0;
    out.entries.push_back(measure(y, record_snapshots));
    for (std::size_t k = 0; k < model.layers.size(); ++k) {
        try {
            y = layer_forward(y, model.layers[k]);
        } catch (const NonFinite&) {
            out.overflow_layer = static_cast<int>(k + 1);
            return out;
        }
        out.entries.push_back(measure(y, record_snapshots));
    }
    return out;
}

namespace {

// Stream tags for deriving independent generators from one user seed.
constexpr std::uint64_t kTagModel = 0x6d6f64656cull;   // "model"
constexpr std::uint64_t kTagInput = 0x696e707574ull;   // "input"

void append_rows(std::vector<SweepRow>& rows, const std::string& run_id,
                 const RunConfig& config, double lambda, const TracedRun& run) {
    // A metric that is not representable (e.g. phi of a state whose row
    // inner products square past the double range) gets the overflow token
    // for just that cell.
    const auto keep = [](double v) {
        return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
    };
    for (std::size_t k = 0; k < run.entries.size(); ++k) {
        const TraceEntry& e = run.entries[k];
        SweepRow r;
        r.run_id = run_id;
        r.seed = config.seed;
        r.block = to_string(config.block);
        r.layer = static_cast<int>(k);
        r.lambda = lambda;
        r.mu = keep(e.mu);
        r.normalized_mu = keep(e.normalized_mu);
        r.phi = keep(e.phi);
        r.y_frob = keep(e.y_frob);
        rows.push_back(std::move(r));
    }
    if (run.overflow_layer) {
        SweepRow r;
        r.run_id = run_id;
        r.seed = config.seed;
        r.block = to_string(config.block);
        r.layer = *run.overflow_layer;
        r.lambda = lambda;
        rows.push_back(std::move(r));
    }
}

GenOptions gen_options(const RunConfig& config) {
    GenOptions opt;
    opt.block = config.block;
    opt.n = config.n;
    opt.d = config.d;
    opt.k_layers = config.k_layers;
    opt.layernorm = config.layernorm;
    opt.gating = config.gating;
    opt.init = config.init;
    opt.init_scale = config.init_scale;
    return opt;
}

}  // namespace

std::vector<SweepRow> run_lambda_sweep(const RunConfig& config) {
    config.validate();
    SplitMix64 model_rng(mix64(config.seed, kTagModel));
    SplitMix64 input_rng(mix64(config.seed, kTagInput));

    const ModelSpec base = random_model(gen_options(config), model_rng);
    const Matrix y0 = random_input(config.n, config.d, 1.0, input_rng);

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < config.lambda_list.size(); ++i) {
        const double lambda = config.lambda_list[i];
        ModelSpec model = base;
        for (LayerSpec& layer : model.layers) layer.lambda = lambda;
        const TracedRun run = run_traced(y0, model);
        append_rows(rows, "sweep-" + std::to_string(config.seed) + "-" + std::to_string(i),
                    config, lambda, run);
    }
    return rows;
}

std::vector<SweepRow> run_ablation(const RunConfig& config) {
    config.validate();
    if (config.block != MixingKind::Selective) {
        throw ConfigError("the ablation grid is defined for the selective block");
    }
    const double lambda = config.lambda_list.front();

    SplitMix64 model_rng(mix64(config.seed, kTagModel));
    SplitMix64 input_rng(mix64(config.seed, kTagInput));

    // Draw one set of weights with gating weights included, then reuse it in
    // every cell so the grid is an ablation and not a reroll.
    GenOptions opt = gen_options(config);
    opt.gating = true;
    opt.layernorm = true;
    const ModelSpec base = random_model(opt, model_rng);
    const Matrix y0 = row_normalize(random_input(config.n, config.d, 1.0, input_rng));

    std::vector<SweepRow> rows;
    const bool flags[4][2] = {{true, true}, {true, false}, {false, true}, {false, false}};
    for (const auto& f : flags) {
        const bool gating = f[0];
        const bool layernorm = f[1];
        ModelSpec model = base;
        for (LayerSpec& layer : model.layers) {
            layer.lambda = lambda;
            layer.use_gating = gating;
            layer.use_layernorm = layernorm;
        }
        const std::string run_id = std::string("ablate-") + std::to_string(config.seed) +
                                   "-gating_" + (gating ? "on" : "off") + "-ln_" +
                                   (layernorm ? "on" : "off");
        append_rows(rows, run_id, config, lambda, run_traced(y0, model));
    }
    return rows;
}

Report run_bound_report(const BoundConstants& constants,
                        const std::vector<double>& lambdas, int big_k) {
    constants.validate();
    if (big_k < 0) throw ConfigError("layer count must be >= 0");

    const std::optional<double> threshold = lambda_threshold(constants);

    ordered_json j;
    j["constants"] = {{"c", constants.c},
                      {"s", constants.s},
                      {"c_m", constants.c_m},
                      {"n", constants.n},
                      {"a", constants.a}};
    j["lambda_threshold"] =
        threshold ? ordered_json(*threshold) : ordered_json("infeasible");

    std::ostringstream text;
    text << "bound report\n";
    text << "  constants: c=" << format_double(constants.c)
         << " s=" << format_double(constants.s)
         << " c_m=" << format_double(constants.c_m) << " n=" << constants.n
         << " a=" << format_double(constants.a) << "\n";
    if (threshold) {
        text << "  lambda threshold: |lambda| > " << format_double(*threshold) << "\n";
    } else {
        text << "  lambda threshold: infeasible (c^2 - a s^2 <= 0)\n";
    }

    ordered_json per_lambda = ordered_json::array();
    for (double lambda : lambdas) {
        const double margin = thm1_margin(lambda, constants);
        ordered_json entry;
        entry["lambda"] = lambda;
        entry["feasibility_margin"] = margin;
        text << "  lambda=" << format_double(lambda)
             << "  margin=" << format_double(margin);
        if (margin > 0.0) {
            const double b = input_floor_b(lambda, constants, big_k);
            entry["input_floor_b"] = b;
            text << "  input_floor_b=" << format_double(b)
                 << (b <= 0.0 ? " (vacuous)" : "");
        } else {
            entry["input_floor_b"] = nullptr;
            text << "  input_floor_b=n/a (margin not positive)";
        }
        text << "\n";
        per_lambda.push_back(std::move(entry));
    }
    j["per_lambda"] = std::move(per_lambda);

    ordered_json envelope = ordered_json::array();
    for (int k = 0; k <= big_k; ++k) envelope.push_back(std::pow(constants.a, k));
    j["envelope"] = std::move(envelope);
    text << "  envelope a^k: k=0 -> 1, k=" << big_k << " -> "
         << format_double(std::pow(constants.a, big_k)) << "\n";

    return Report{text.str(), j.dump(2) + "\n"};
}

Report run_counterexample(const CounterexampleSpec& spec, int big_k) {
    const TracedRun sim =
        run_traced(counterexample_input(spec), counterexample_model(spec, big_k), true);

    std::ostringstream text;
    const char* name =
        spec.system == CounterexampleSystem::StructuredLtiPair ? "lti-pair" : "selective-pair";
    text << "counterexample " << name << " lambda=" << format_double(spec.lambda) << "\n";

    ordered_json j;
    j["system"] = name;
    j["lambda"] = spec.lambda;
    j["layers"] = big_k;

    ordered_json per_k = ordered_json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < sim.entries.size(); ++k) {
        const Matrix closed =
            spec.system == CounterexampleSystem::StructuredLtiPair
                ? lti_pair_state(static_cast<int>(k), spec.lambda)
                : selective_pair_state(static_cast<int>(k), spec.lambda, spec.alpha0,
                                       spec.beta0);
        const double dev = max_abs_diff(*sim.entries[k].y, closed);
        worst = std::max(worst, dev);
        ordered_json entry;
        entry["k"] = k;
        entry["mu_closed_form"] = mu(closed);
        entry["mu_simulated"] = sim.entries[k].mu;
        entry["max_entry_deviation"] = dev;
        per_k.push_back(std::move(entry));
        text << "  k=" << k << "  mu_closed=" << format_double(mu(closed))
             << "  mu_sim=" << format_double(sim.entries[k].mu)
             << "  dev=" << format_double(dev) << "\n";
    }
    j["per_layer"] = std::move(per_k);
    j["max_deviation"] = worst;

    const double final_mu = sim.entries.back().mu;
    const char* verdict = final_mu < 1e-6 ? "collapse" : "no-collapse";
    j["final_mu"] = final_mu;
    j["verdict"] = verdict;
    text << "  max deviation: " << format_double(worst) << "\n";
    text << "  verdict: " << verdict << " (final mu=" << format_double(final_mu) << ")\n";

    return Report{text.str(), j.dump(2) + "\n"};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ranklab
