#include "ranklab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ranklab/artifacts.hpp"
#include "ranklab/verify.hpp"

namespace ranklab {

namespace {

MixingKind block_from_string(const std::string& s) {
    if (s == "attention") return MixingKind::Attention;
    if (s == "lti") return MixingKind::LtiScalar;
    if (s == "structured") return MixingKind::StructuredLti;
    if (s == "selective") return MixingKind::Selective;
    throw ConfigError("unknown block '" + s + "'");
}

InitKind init_from_string(const std::string& s) {
    if (s == "gaussian") return InitKind::Gaussian;
    if (s == "orthogonal") return InitKind::Orthogonal;
    throw ConfigError("unknown init '" + s + "'");
}

bool onoff(const std::string& s) {
    if (s == "on") return true;
    if (s == "off") return false;
    throw ConfigError("expected on|off, got '" + s + "'");
}

std::vector<double> parse_lambda_list(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(std::stod(cur));
    if (out.empty()) throw ConfigError("empty lambda list");
    return out;
}

// Mutable flag-shaped view of a RunConfig; the config file fills it first,
// then parsed flags overwrite individual fields.
struct FlagState {
    std::uint64_t seed = 0;
    std::string block = "selective";
    int seq_len = 8;
    int dim = 8;
    int layers = 24;
    std::string lambda = "-5,-2,-1,-0.5,0,0.5,1,2,5";
    std::string layernorm = "on";
    std::string gating = "off";
    std::string init = "gaussian";
    double init_scale = 1.0;
    std::string out;
};

void apply_config_file(const std::string& path, FlagState& st) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") st.seed = value.get<std::uint64_t>();
        else if (key == "block") st.block = value.get<std::string>();
        else if (key == "seq_len") st.seq_len = value.get<int>();
        else if (key == "dim") st.dim = value.get<int>();
        else if (key == "layers") st.layers = value.get<int>();
        else if (key == "lambda") {
            if (value.is_array()) {
                std::string list;
                for (const auto& v : value) {
                    if (!list.empty()) list += ',';
                    list += format_double(v.get<double>());
                }
                st.lambda = list;
            } else {
                st.lambda = value.get<std::string>();
            }
        } else if (key == "layernorm") {
            st.layernorm = value.is_boolean() ? (value.get<bool>() ? "on" : "off")
                                              : value.get<std::string>();
        } else if (key == "gating") {
            st.gating = value.is_boolean() ? (value.get<bool>() ? "on" : "off")
                                           : value.get<std::string>();
        } else if (key == "init") {
            st.init = value.get<std::string>();
        } else if (key == "init_scale") {
            st.init_scale = value.get<double>();
        } else if (key == "out") {
            st.out = value.get<std::string>();
        } else {
            throw ConfigError("config file key '" + key + "' is not recognised");
        }
    }
}

RunConfig to_run_config(const FlagState& st) {
    RunConfig c;
    c.seed = st.seed;
    c.block = block_from_string(st.block);
    c.n = st.seq_len;
    c.d = st.dim;
    c.k_layers = st.layers;
    c.lambda_list = parse_lambda_list(st.lambda);
    c.layernorm = onoff(st.layernorm);
    c.gating = onoff(st.gating);
    c.init = init_from_string(st.init);
    c.init_scale = st.init_scale;
    c.output_path = st.out;
    c.validate();
    return c;
}

void add_model_flags(CLI::App* cmd, FlagState& st) {
    cmd->add_option("--seed", st.seed, "random seed (u64)");
    cmd->add_option("--block", st.block, "attention|lti|structured|selective");
    cmd->add_option("--seq-len", st.seq_len, "sequence length N");
    cmd->add_option("--dim", st.dim, "embedding dimension d");
    cmd->add_option("--layers", st.layers, "layer count K");
    cmd->add_option("--lambda", st.lambda, "comma-separated skip strengths");
    cmd->add_option("--layernorm", st.layernorm, "on|off");
    cmd->add_option("--gating", st.gating, "on|off");
    cmd->add_option("--init", st.init, "gaussian|orthogonal");
    cmd->add_option("--init-scale", st.init_scale, "weight scale");
    cmd->add_option("--out", st.out, "output path");
}

// Config file first, then any flag that was explicitly passed wins.
FlagState merge_flags(const CLI::App* cmd, const FlagState& parsed,
                      const FlagState& from_file) {
    FlagState merged = from_file;
    if (cmd->count("--seed")) merged.seed = parsed.seed;
    if (cmd->count("--block")) merged.block = parsed.block;
    if (cmd->count("--seq-len")) merged.seq_len = parsed.seq_len;
    if (cmd->count("--dim")) merged.dim = parsed.dim;
    if (cmd->count("--layers")) merged.layers = parsed.layers;
    if (cmd->count("--lambda")) merged.lambda = parsed.lambda;
    if (cmd->count("--layernorm")) merged.layernorm = parsed.layernorm;
    if (cmd->count("--gating")) merged.gating = parsed.gating;
    if (cmd->count("--init")) merged.init = parsed.init;
    if (cmd->count("--init-scale")) merged.init_scale = parsed.init_scale;
    if (cmd->count("--out")) merged.out = parsed.out;
    return merged;
}

std::string report_base(std::string path) {
    for (const char* ext : {".txt", ".json"}) {
        const std::string e(ext);
        if (path.size() > e.size() &&
            path.compare(path.size() - e.size(), e.size(), e) == 0) {
            return path.substr(0, path.size() - e.size());
        }
    }
    return path;
}

void emit_report(const Report& report, const std::string& out) {
    std::cout << report.text;
    if (!out.empty()) {
        const std::string base = report_base(out);
        write_file(base + ".txt", report.text);
        write_file(base + ".json", report.json);
        std::cout << "wrote " << base << ".txt and " << base << ".json\n";
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"numerical laboratory for rank-collapse dynamics of token-mixing layer stacks"};
    app.require_subcommand(1);

    int exit_code = 0;

    // --- sweep ---------------------------------------------------------
    FlagState sweep_flags;
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "lambda sweep, CSV per (lambda, layer)");
    sweep->add_option("--config", sweep_config, "JSON config file (flags override)");
    add_model_flags(sweep, sweep_flags);
    sweep->parse_complete_callback([&] {
        FlagState st = sweep_flags;
        if (!sweep_config.empty()) {
            FlagState from_file;
            apply_config_file(sweep_config, from_file);
            st = merge_flags(sweep, sweep_flags, from_file);
        }
        RunConfig config = to_run_config(st);
        if (config.output_path.empty()) config.output_path = "sweep.csv";
        const std::vector<SweepRow> rows = run_lambda_sweep(config);
        write_file(config.output_path, emit_csv(rows));
        std::cout << "wrote " << rows.size() << " rows to " << config.output_path << "\n";
    });

    // --- ablate --------------------------------------------------------
    FlagState ablate_flags;
    ablate_flags.lambda = "1";
    ablate_flags.init_scale = 0.1;
    std::string ablate_config;
    auto* ablate = app.add_subcommand(
        "ablate", "2x2 gating/LayerNorm ablation for the selective block");
    ablate->add_option("--config", ablate_config, "JSON config file (flags override)");
    add_model_flags(ablate, ablate_flags);
    ablate->parse_complete_callback([&] {
        FlagState st = ablate_flags;
        if (!ablate_config.empty()) {
            FlagState from_file;
            from_file.lambda = "1";
            from_file.init_scale = 0.1;
            apply_config_file(ablate_config, from_file);
            st = merge_flags(ablate, ablate_flags, from_file);
        }
        RunConfig config = to_run_config(st);
        if (config.output_path.empty()) config.output_path = "ablate.csv";
        const std::vector<SweepRow> rows = run_ablation(config);
        write_file(config.output_path, emit_csv(rows));
        std::cout << "wrote " << rows.size() << " rows to " << config.output_path << "\n";
    });

    // --- bounds --------------------------------------------------------
    BoundConstants bc;
    bc.c = 1.0;
    bc.s = 1.0;
    bc.c_m = 2.0;
    bc.n = 8;
    bc.a = 0.9999;
    std::string bounds_lambda = "-5,-2,-1,-0.5,0,0.5,1,2,5";
    int bounds_k = 64;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds", "feasibility margins, threshold and envelopes");
    bounds->add_option("--c", bc.c, "inf of value-transform sigma_min");
    bounds->add_option("--s", bc.s, "sup of value-transform sigma_max");
    bounds->add_option("--cm", bc.c_m, "sup of mixing Frobenius norms");
    bounds->add_option("--n", bc.n, "sequence length");
    bounds->add_option("--a", bc.a, "collapse rate in (0,1]");
    bounds->add_option("--lambda", bounds_lambda, "comma-separated skip strengths");
    bounds->add_option("--layers", bounds_k, "layer count K");
    bounds->add_option("--out", bounds_out, "report base path (.txt/.json)");
    bounds->parse_complete_callback([&] {
        emit_report(run_bound_report(bc, parse_lambda_list(bounds_lambda), bounds_k),
                    bounds_out);
    });

    // --- counterexample -------------------------------------------------
    std::string ce_system = "lti";
    CounterexampleSpec ce;
    int ce_k = 50;
    std::string ce_out;
    auto* counter = app.add_subcommand(
        "counterexample", "closed form vs simulation for the two-token systems");
    counter->add_option("--system", ce_system, "lti|selective");
    counter->add_option("--lambda", ce.lambda, "skip strength");
    counter->add_option("--alpha0", ce.alpha0, "selective pair: first input weight (> 0)");
    counter->add_option("--beta0", ce.beta0, "selective pair: second input weight");
    counter->add_option("--layers", ce_k, "layer count K");
    counter->add_option("--out", ce_out, "report base path (.txt/.json)");
    counter->parse_complete_callback([&] {
        if (ce_system == "lti") {
            ce.system = CounterexampleSystem::StructuredLtiPair;
        } else if (ce_system == "selective") {
            ce.system = CounterexampleSystem::SelectivePair;
            if (!counter->count("--alpha0") && !counter->count("--beta0")) {
                ce.alpha0 = 1.0;
                ce.beta0 = 1.0;
            }
        } else {
            throw ConfigError("unknown system '" + ce_system + "'");
        }
        emit_report(run_counterexample(ce, ce_k), ce_out);
    });

    // --- verify ----------------------------------------------------------
    std::string suite_name = "all";
    std::uint64_t verify_seed = 0;
    int verify_trials = 25;
    bool negative_control = false;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "property suites with random configurations");
    verify->add_option("--suite", suite_name, "thm1|thm3|lti|selective|lemmas|oracles|all");
    verify->add_option("--seed", verify_seed, "random seed (u64)");
    verify->add_option("--trials", verify_trials, "random configurations per property");
    verify->add_option("--out", verify_out, "write the summary to a file as well");
    verify->add_flag("--negative-control", negative_control,
                     "inject a deliberately failing check");
    verify->parse_complete_callback([&] {
        const std::vector<SuiteResult> results =
            run_suites(suite_from_string(suite_name), verify_seed, verify_trials,
                       negative_control);
        const std::string summary = summarize(results);
        std::cout << summary;
        if (!verify_out.empty()) write_file(verify_out, summary);
        const bool ok = std::all_of(results.begin(), results.end(),
                                    [](const SuiteResult& r) { return r.passed(); });
        if (!ok) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace ranklab
