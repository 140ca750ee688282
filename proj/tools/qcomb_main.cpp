/*
 * Copyright 2025 the qcomb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qcomb/pipeline.hpp"

// Subcommands: stats, graph-stats, proximity, calibrate, spectrum, sample,
// predict, pipeline. A config file carries every knob; flags override.

namespace {

using nlohmann::json;
using qcomb::cfg::PipelineConfig;
using qcomb::pipeline::Context;

struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> disease;
    std::optional<std::string> out_dir;
    std::optional<double> gamma;
    std::optional<double> beta;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint32_t> sweeps;
    std::optional<std::uint32_t> slices;
    std::optional<std::size_t> pool_size;
    std::optional<int> k1;
    std::optional<int> k2;
    std::optional<unsigned> threads;
    int verbosity = 1;
};

PipelineConfig resolve_config(const GlobalFlags& flags) {
    PipelineConfig cfg;
    if (!flags.config_path.empty()) cfg = qcomb::cfg::load_config(flags.config_path);
    if (flags.seed) {
        cfg.master_seed = *flags.seed;
        cfg.seed_set = true;
    }
    if (flags.disease) cfg.disease = *flags.disease;
    if (flags.out_dir) cfg.out_dir = *flags.out_dir;
    if (flags.runs) cfg.runs = *flags.runs;
    if (flags.sweeps) cfg.sqa.schedule.total_sweeps = *flags.sweeps;
    if (flags.slices) cfg.sqa.trotter_slices = *flags.slices;
    if (flags.pool_size) cfg.pool_size = *flags.pool_size;
    if (flags.k1) cfg.k1 = *flags.k1;
    if (flags.k2) cfg.k2 = *flags.k2;
    qcomb::log::verbosity() = flags.verbosity;
    if (flags.threads) qcomb::thread_count() = std::max(1u, *flags.threads);
    return cfg;
}

void print_summary(const json& j) { std::cout << j.dump() << std::endl; }

/// Calibrated (gamma, beta): explicit flags win, else the calibration
/// artifact from a previous run.
std::pair<double, double> resolve_hyperparameters(const GlobalFlags& flags, const Context& ctx) {
    if (flags.gamma && flags.beta) return {*flags.gamma, *flags.beta};
    qcomb::require(!flags.gamma && !flags.beta,
                   "provide both --gamma and --beta, or neither (to reuse a calibration artifact)");
    const auto path = qcomb::pipeline::out_path(
        ctx, "calibration_" + qcomb::pipeline::slug(ctx.config.disease) + ".json");
    qcomb::require(std::filesystem::exists(path),
                   "no --gamma/--beta given and no calibration artifact at ", path.string(),
                   "; run the calibrate subcommand first");
    json j = qcomb::io::load_json_file(path.string());
    return {j.at("best").at("gamma").get<double>(), j.at("best").at("beta").get<double>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network-proximity QUBO drug-combination prediction"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "configuration file (key = value with [sections])");
    app.add_option("--seed", flags.seed, "master seed (overrides run.master_seed)");
    app.add_option("--disease", flags.disease, "disease id (overrides run.disease)");
    app.add_option("--out", flags.out_dir, "output directory (overrides run.out)");
    app.add_option("--gamma", flags.gamma, "pair-coupling hyperparameter");
    app.add_option("--beta", flags.beta, "cardinality-bias hyperparameter");
    app.add_option("--runs", flags.runs, "sampler runs R");
    app.add_option("--sweeps", flags.sweeps, "annealing sweeps per run");
    app.add_option("--slices", flags.slices, "Trotter slices P");
    app.add_option("--pool-size", flags.pool_size, "enlarged candidate pool size");
    app.add_option("--k1", flags.k1, "first allowed combination size");
    app.add_option("--k2", flags.k2, "second allowed combination size");
    app.add_option("--threads", flags.threads, "worker threads");
    app.add_option("--verbosity", flags.verbosity, "0 silent, 1 warnings, 2 info");

    auto* cmd_stats = app.add_subcommand("stats", "dataset row/node/edge counts as JSON");
    auto* cmd_graph_stats = app.add_subcommand("graph-stats", "graph size and component stats");
    auto* cmd_proximity = app.add_subcommand("proximity", "z-scores and separation matrix");
    auto* cmd_calibrate = app.add_subcommand("calibrate", "(gamma, beta) grid search by AP");
    auto* cmd_spectrum = app.add_subcommand("spectrum", "exact ranked spectrum and PR data");
    auto* cmd_sample = app.add_subcommand("sample", "run the SQA sampler on a serialized instance");
    auto* cmd_predict = app.add_subcommand("predict", "enlarged-pool sampling and ranked predictions");
    auto* cmd_pipeline = app.add_subcommand("pipeline", "all stages in order with cached intermediates");

    std::string qubo_path;
    cmd_sample->add_option("--qubo", qubo_path, "serialized QUBO instance (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        PipelineConfig config = resolve_config(flags);

        if (cmd_sample->parsed() && !qubo_path.empty()) {
            // standalone sampling of a serialized instance; no datasets needed
            config.validate(/*need_data_paths=*/false);
            auto q = qcomb::io::qubo_from_json(qcomb::io::load_json_file(qubo_path));
            auto sqa_cfg = config.sqa;
            sqa_cfg.master_seed = qcomb::derive_seed(config.master_seed, qcomb::pipeline::kSeedSqa);
            auto samples = qcomb::sqa::sample(q, sqa_cfg, config.runs);
            auto list = qcomb::predict::rank_samples(samples, q.labels, {});
            std::filesystem::create_directories(config.out_dir);
            const auto base = std::filesystem::path(config.out_dir);
            json sj = qcomb::io::to_json(samples, q.labels);
            sj["master_seed"] = config.master_seed;
            qcomb::io::write_json_file((base / "sampleset.json").string(), sj);
            qcomb::io::write_text_file((base / "samples.csv").string(), qcomb::io::sample_csv(list));
            print_summary(json{{"status", "ok"},
                               {"subcommand", "sample"},
                               {"runs", config.runs},
                               {"distinct_configurations", samples.records.size()},
                               {"outputs", {(base / "sampleset.json").string(),
                                            (base / "samples.csv").string()}}});
            return 0;
        }

        Context ctx = qcomb::pipeline::load_context(config);

        if (cmd_stats->parsed()) {
            json j = qcomb::pipeline::stats_json(ctx);
            qcomb::io::write_json_file(qcomb::pipeline::out_path(ctx, "stats.json").string(), j);
            print_summary(j);
        } else if (cmd_graph_stats->parsed()) {
            json j = qcomb::pipeline::graph_stats_json(ctx);
            qcomb::io::write_json_file(qcomb::pipeline::out_path(ctx, "graph_stats.json").string(), j);
            print_summary(j);
        } else if (cmd_proximity->parsed()) {
            bool cache_hit = false;
            auto table = qcomb::pipeline::proximity_stage(ctx, &cache_hit);
            print_summary(json{{"status", "ok"},
                               {"subcommand", "proximity"},
                               {"disease", ctx.config.disease},
                               {"drugs", table.drug_count()},
                               {"cache_hit", cache_hit}});
        } else if (cmd_calibrate->parsed()) {
            auto table = qcomb::pipeline::proximity_stage(ctx);
            auto result = qcomb::pipeline::calibrate_stage(ctx, table);
            print_summary(json{{"status", "ok"},
                               {"subcommand", "calibrate"},
                               {"disease", ctx.config.disease},
                               {"gamma", result.best_gamma},
                               {"beta", result.best_beta},
                               {"ap", result.best_ap}});
        } else if (cmd_spectrum->parsed()) {
            auto table = qcomb::pipeline::proximity_stage(ctx);
            auto [gamma, beta] = resolve_hyperparameters(flags, ctx);
            auto artifacts = qcomb::pipeline::spectrum_stage(ctx, table, gamma, beta);
            print_summary(json{{"status", "ok"},
                               {"subcommand", "spectrum"},
                               {"disease", ctx.config.disease},
                               {"gamma", gamma},
                               {"beta", beta},
                               {"ap", artifacts.ap},
                               {"positives", artifacts.positives}});
        } else if (cmd_sample->parsed()) {
            qcomb::fail("sample requires --qubo <path> (a serialized instance)");
        } else if (cmd_predict->parsed()) {
            auto [gamma, beta] = resolve_hyperparameters(flags, ctx);
            auto pool = qcomb::pipeline::pool_stage(ctx);
            auto pool_table = qcomb::pipeline::pool_proximity_stage(ctx, pool);
            auto list = qcomb::pipeline::predict_stage(ctx, pool_table, gamma, beta);
            print_summary(json{{"status", "ok"},
                               {"subcommand", "predict"},
                               {"disease", ctx.config.disease},
                               {"pool", pool.all().size()},
                               {"runs", list.runs},
                               {"distinct_configurations", list.entries.size()},
                               {"novel", list.novel_only().size()}});
        } else if (cmd_pipeline->parsed()) {
            auto result = qcomb::pipeline::run_pipeline(ctx);
            print_summary(json{{"status", "ok"},
                               {"subcommand", "pipeline"},
                               {"disease", ctx.config.disease},
                               {"gamma", result.calibration.best_gamma},
                               {"beta", result.calibration.best_beta},
                               {"ap", result.calibration.best_ap},
                               {"pool", result.pool_size},
                               {"predictions", result.prediction_entries}});
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_summary(json{{"status", "error"}, {"message", e.what()}});
        return 1;
    }
}
