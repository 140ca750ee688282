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

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "qcomb/config.hpp"
#include "qcomb/graph.hpp"
#include "qcomb/ingest.hpp"
#include "qcomb/jsonio.hpp"
#include "qcomb/predict.hpp"

// Pipeline stages behind the CLI subcommands. Every artifact embeds the
// resolved configuration and a config hash; the proximity tables double as
// cached intermediates keyed on that hash.

namespace qcomb::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

// Seed stream indices per stage; stage seeds derive from run.master_seed.
constexpr std::uint64_t kSeedProximity = 1;
constexpr std::uint64_t kSeedPool = 2;
constexpr std::uint64_t kSeedSqa = 3;
constexpr std::uint64_t kSeedPoolProximity = 4;

struct Context {
    cfg::PipelineConfig config;
    ingest::RawEdgeList edges;
    ingest::DrugTargetMap drug_targets;      // filtered to graph nodes
    ingest::DiseaseGeneMap disease_genes;    // filtered to graph nodes
    ingest::ValidatedCombinations combos;    // filtered to surviving drugs
    graph::Interactome graph;
    std::size_t nodes_before_restriction = 0;
    std::string data_hash;                   // content hash of the four inputs
};

inline std::string slug(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "unnamed" : out;
}

inline Context load_context(const cfg::PipelineConfig& config) {
    config.validate();
    Context ctx;
    ctx.config = config;
    ctx.data_hash = io::fnv1a_hex(io::read_text_file(config.interactome_path) +
                                  io::read_text_file(config.drug_targets_path) +
                                  io::read_text_file(config.disease_genes_path) +
                                  io::read_text_file(config.combinations_path));
    ctx.edges = ingest::load_interactome(config.interactome_path);
    ctx.drug_targets = ingest::load_drug_targets(config.drug_targets_path);
    ctx.disease_genes = ingest::load_disease_genes(config.disease_genes_path);
    ctx.combos = ingest::load_validated_combinations(config.combinations_path);

    {
        auto unrestricted = graph::Interactome::build(ctx.edges, /*restrict_to_lcc=*/false);
        ctx.nodes_before_restriction = unrestricted.node_count();
    }
    ctx.graph = graph::Interactome::build(ctx.edges, config.restrict_to_lcc);

    const auto nodes = ctx.graph.node_names();
    ingest::filter_to_nodes(ctx.drug_targets, nodes, "drug");
    ingest::filter_to_nodes(ctx.disease_genes, nodes, "disease");
    ingest::filter_combinations(ctx.combos, ctx.drug_targets);
    return ctx;
}

/// Dotted-key object of the full resolved configuration, embedded in every
/// JSON artifact.
inline json resolved_config_json(const cfg::PipelineConfig& config) {
    json out = json::object();
    for (const auto& line : text::split(cfg::canonical_string(config), '\n')) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

/// Hash of everything that affects the computation; the output location
/// deliberately does not participate.
inline std::string config_hash(const Context& ctx) {
    std::string canon;
    for (const auto& line : text::split(cfg::canonical_string(ctx.config), '\n'))
        if (!line.empty() && line.rfind("run.out=", 0) != 0) canon += line + "\n";
    return io::fnv1a_hex(canon + ctx.data_hash);
}

/// Comment preamble for CSV artifacts: config hash, seed, resolved config.
inline std::string csv_preamble(const Context& ctx) {
    std::string out = "# config_hash=" + config_hash(ctx) + "\n";
    for (const auto& line : text::split(cfg::canonical_string(ctx.config), '\n'))
        if (!line.empty()) out += "# " + line + "\n";
    return out;
}

inline void stamp(json& artifact, const Context& ctx) {
    artifact["resolved_config"] = resolved_config_json(ctx.config);
    artifact["config_hash"] = config_hash(ctx);
    artifact["master_seed"] = ctx.config.master_seed;
}

inline fs::path out_path(const Context& ctx, const std::string& filename) {
    fs::path dir(ctx.config.out_dir);
    fs::create_directories(dir);
    return dir / filename;
}

// ---- stats ----

inline json stats_json(const Context& ctx) {
    std::size_t two_drug = 0;
    std::set<std::string> combo_drugs, combo_diseases;
    const auto raw_combos =
        ingest::load_validated_combinations(ctx.config.combinations_path);
    for (const auto& c : raw_combos.entries) {
        if (c.drugs.size() == 2) ++two_drug;
        combo_diseases.insert(c.disease_id);
        for (const auto& d : c.drugs) combo_drugs.insert(d);
    }
    const auto raw_drugs = ingest::load_drug_targets(ctx.config.drug_targets_path);
    const auto raw_diseases = ingest::load_disease_genes(ctx.config.disease_genes_path);
    std::size_t associations = 0;
    std::set<std::string> distinct_genes;
    for (const auto& [dis, genes] : raw_diseases.entries) {
        associations += genes.size();
        distinct_genes.insert(genes.begin(), genes.end());
    }
    json j{{"kind", "stats"},
           {"interactome_rows", ctx.edges.rows.size()},
           {"nodes", ctx.nodes_before_restriction},
           {"graph_nodes", ctx.graph.node_count()},
           {"graph_edges", ctx.graph.edge_count()},
           {"drugs", raw_drugs.entries.size()},
           {"diseases", raw_diseases.entries.size()},
           {"disease_gene_associations", associations},
           {"distinct_disease_genes", distinct_genes.size()},
           {"combinations", raw_combos.entries.size()},
           {"combinations_two_drug", two_drug},
           {"combination_drugs", combo_drugs.size()},
           {"combination_diseases", combo_diseases.size()}};
    stamp(j, ctx);
    return j;
}

inline json graph_stats_json(const Context& ctx) {
    auto unrestricted = graph::Interactome::build(ctx.edges, /*restrict_to_lcc=*/false);
    auto lcc = graph::Interactome::build(ctx.edges, /*restrict_to_lcc=*/true);
    json j{{"kind", "graph_stats"},
           {"nodes", unrestricted.node_count()},
           {"edges", unrestricted.edge_count()},
           {"components", unrestricted.component_count()},
           {"lcc_nodes", lcc.node_count()},
           {"lcc_edges", lcc.edge_count()}};
    stamp(j, ctx);
    return j;
}

// ---- proximity ----

/// Unique drugs appearing in the disease's validated combinations, sorted.
inline std::vector<std::string> candidate_drugs(const Context& ctx, const std::string& disease) {
    std::set<std::string> drugs;
    for (const auto& c : ctx.combos.entries)
        if (c.disease_id == disease)
            for (const auto& d : c.drugs) drugs.insert(d);
    require(!drugs.empty(), "no validated combinations found for disease '", disease, "'");
    return {drugs.begin(), drugs.end()};
}

inline graph::NodeSet disease_module(const Context& ctx, const std::string& disease) {
    auto it = ctx.disease_genes.entries.find(disease);
    require(it != ctx.disease_genes.entries.end(), "disease '", disease,
            "' not present (or empty after filtering) in the disease-gene map");
    return ctx.graph.node_set(disease, it->second);
}

inline std::vector<graph::NodeSet> target_sets(const Context& ctx,
                                               const std::vector<std::string>& drugs) {
    std::vector<graph::NodeSet> sets;
    sets.reserve(drugs.size());
    for (const auto& d : drugs) {
        auto it = ctx.drug_targets.entries.find(d);
        require(it != ctx.drug_targets.entries.end(), "drug '", d,
                "' not present (or empty after filtering) in the drug-target map");
        sets.push_back(ctx.graph.node_set(d, it->second));
    }
    return sets;
}

/// Hash over everything a proximity table depends on.
inline std::string proximity_cache_hash(const Context& ctx, const std::vector<std::string>& drugs,
                                        std::uint64_t seed) {
    std::ostringstream ss;
    ss << "data=" << ctx.data_hash << "\ndisease=" << ctx.config.disease
       << "\nlcc=" << ctx.config.restrict_to_lcc
       << "\nnum_samples=" << ctx.config.null_model.num_samples
       << "\nbin_min=" << ctx.config.null_model.degree_bin_min_size
       << "\nrandomize_both=" << ctx.config.null_model.randomize_both << "\nseed=" << seed
       << "\ndrugs=";
    for (const auto& d : drugs) ss << d << ",";
    return io::fnv1a_hex(ss.str());
}

/// Build (or reuse from cache) the proximity table for a drug list.
inline proximity::ProximityTable proximity_table_cached(const Context& ctx,
                                                        const std::vector<std::string>& drugs,
                                                        std::uint64_t seed,
                                                        const std::string& artifact_name,
                                                        bool* cache_hit = nullptr) {
    const std::string hash = proximity_cache_hash(ctx, drugs, seed);
    const fs::path path = out_path(ctx, artifact_name);
    if (cache_hit) *cache_hit = false;
    if (fs::exists(path)) {
        try {
            json j = io::load_json_file(path.string());
            if (j.value("config_hash", "") == hash) {
                log::info("proximity: cache hit for ", path.string());
                if (cache_hit) *cache_hit = true;
                return io::proximity_table_from_json(j);
            }
        } catch (const std::exception& e) {
            log::warn("proximity: ignoring unreadable cache ", path.string(), ": ", e.what());
        }
    }
    auto null_cfg = ctx.config.null_model;
    null_cfg.master_seed = seed;
    auto module = disease_module(ctx, ctx.config.disease);
    auto sets = target_sets(ctx, drugs);
    auto table = proximity::build_proximity_table(ctx.graph, module, sets, null_cfg);
    json j = io::to_json(table, hash);
    stamp(j, ctx);
    j["config_hash"] = hash;  // cache key, overrides the run-level hash
    io::write_json_file(path.string(), j);
    return table;
}

inline proximity::ProximityTable proximity_stage(const Context& ctx, bool* cache_hit = nullptr) {
    const auto drugs = candidate_drugs(ctx, ctx.config.disease);
    return proximity_table_cached(ctx, drugs,
                                  derive_seed(ctx.config.master_seed, kSeedProximity),
                                  "proximity_" + slug(ctx.config.disease) + ".json", cache_hit);
}

// ---- calibrate ----

inline calibrate::CalibrationResult calibrate_stage(const Context& ctx,
                                                    const proximity::ProximityTable& table) {
    const auto validated = ctx.combos.for_disease(ctx.config.disease);
    auto result = calibrate::grid_search(table, validated, ctx.config.grid, ctx.config.k1,
                                         ctx.config.k2);
    json j = io::to_json(result);
    j["disease"] = ctx.config.disease;
    stamp(j, ctx);
    io::write_json_file(out_path(ctx, "calibration_" + slug(ctx.config.disease) + ".json").string(), j);
    io::write_text_file(out_path(ctx, "ap_surface_" + slug(ctx.config.disease) + ".csv").string(),
                        csv_preamble(ctx) + io::ap_surface_csv(result));
    return result;
}

// ---- spectrum ----

struct SpectrumArtifacts {
    double ap = 0.0;
    std::size_t positives = 0;
};

inline qubo::QuboInstance build_instance(const Context& ctx,
                                         const proximity::ProximityTable& table, double gamma,
                                         double beta) {
    auto q = qubo::build_hamiltonian(table, gamma, beta);
    const double lambda = ctx.config.lambda_includes_beta
                              ? qubo::default_lambda_with_beta(table, gamma, beta)
                              : qubo::default_lambda(table, gamma);
    if (lambda <= 0.0) {
        log::warn("degenerate penalty: lambda rule yields 0; no window penalty applied");
        return q;
    }
    return qubo::add_window_penalty(std::move(q), ctx.config.k1, ctx.config.k2, lambda);
}

inline SpectrumArtifacts spectrum_stage(const Context& ctx,
                                        const proximity::ProximityTable& table, double gamma,
                                        double beta) {
    const auto validated = ctx.combos.for_disease(ctx.config.disease);
    const auto masks = spectrum::validated_masks(table.drugs, validated);
    auto q = build_instance(ctx, table, gamma, beta);
    auto spec = spectrum::enumerate(q, masks);
    const double ap = spectrum::average_precision(spec);
    const auto curve = spectrum::pr_curve(spec);

    const std::string s = slug(ctx.config.disease);
    io::write_text_file(out_path(ctx, "spectrum_" + s + ".csv").string(),
                        csv_preamble(ctx) +
                            io::spectrum_csv(spec, table.drugs, ctx.config.spectrum_bottom_k));
    io::write_text_file(out_path(ctx, "pr_curve_" + s + ".csv").string(),
                        csv_preamble(ctx) + io::pr_curve_csv(curve));
    json j{{"kind", "spectrum_summary"},
           {"disease", ctx.config.disease},
           {"gamma", gamma},
           {"beta", beta},
           {"ap", ap},
           {"positives", spec.positives},
           {"pr_area", curve.area()}};
    stamp(j, ctx);
    io::write_json_file(out_path(ctx, "spectrum_" + s + ".json").string(), j);
    return SpectrumArtifacts{ap, spec.positives};
}

// ---- pool + predict ----

inline predict::EnlargedPool pool_stage(const Context& ctx) {
    const auto base = candidate_drugs(ctx, ctx.config.disease);
    predict::OverlapRule rule;
    rule.enabled = ctx.config.pool_overlap_rule;
    rule.separation_threshold = ctx.config.pool_overlap_threshold;
    auto pool = predict::build_enlarged_pool(ctx.graph, base, ctx.drug_targets,
                                             ctx.config.pool_size,
                                             derive_seed(ctx.config.master_seed, kSeedPool),
                                             ctx.combos.entries, rule);
    json exclusions = json::array();
    for (const auto& e : pool.exclusion_log)
        exclusions.push_back(json{{"candidate", e.candidate}, {"against", e.against}, {"reason", e.reason}});
    json j{{"kind", "enlarged_pool"},
           {"disease", ctx.config.disease},
           {"base_drugs", pool.base_drugs},
           {"padding_drugs", pool.padding_drugs},
           {"exclusions", exclusions},
           {"size", pool.target_size}};
    stamp(j, ctx);
    io::write_json_file(out_path(ctx, "pool_" + slug(ctx.config.disease) + ".json").string(), j);
    return pool;
}

inline proximity::ProximityTable pool_proximity_stage(const Context& ctx,
                                                      const predict::EnlargedPool& pool,
                                                      bool* cache_hit = nullptr) {
    return proximity_table_cached(
        ctx, pool.all(), derive_seed(ctx.config.master_seed, kSeedPoolProximity),
        "proximity_pool_" + slug(ctx.config.disease) + ".json", cache_hit);
}

inline predict::PredictionList predict_stage(const Context& ctx,
                                             const proximity::ProximityTable& pool_table,
                                             double gamma, double beta) {
    const auto validated = ctx.combos.for_disease(ctx.config.disease);
    auto sqa_cfg = ctx.config.sqa;
    sqa_cfg.master_seed = derive_seed(ctx.config.master_seed, kSeedSqa);
    auto q = build_instance(ctx, pool_table, gamma, beta);
    const auto samples = sqa::sample(q, sqa_cfg, ctx.config.runs);
    auto list = predict::rank_samples(samples, pool_table.drugs, validated);

    json sj = io::to_json(samples, pool_table.drugs);
    stamp(sj, ctx);
    io::write_json_file(out_path(ctx, "sampleset_" + slug(ctx.config.disease) + ".json").string(),
                        sj);
    const std::string s = slug(ctx.config.disease);
    io::write_text_file(out_path(ctx, "samples_" + s + ".csv").string(),
                        csv_preamble(ctx) + io::sample_csv(list));
    json all = io::to_json(list, /*novel_only=*/false);
    all["disease"] = ctx.config.disease;
    all["gamma"] = gamma;
    all["beta"] = beta;
    stamp(all, ctx);
    io::write_json_file(out_path(ctx, "predictions_" + s + ".json").string(), all);
    json novel = io::to_json(list, /*novel_only=*/true);
    novel["disease"] = ctx.config.disease;
    novel["gamma"] = gamma;
    novel["beta"] = beta;
    stamp(novel, ctx);
    io::write_json_file(out_path(ctx, "predictions_novel_" + s + ".json").string(), novel);
    return list;
}

/// The full chain: proximity -> calibrate -> spectrum -> pool -> predict.
struct PipelineResult {
    calibrate::CalibrationResult calibration;
    SpectrumArtifacts spectrum;
    std::size_t pool_size = 0;
    std::size_t prediction_entries = 0;
};

inline PipelineResult run_pipeline(const Context& ctx) {
    PipelineResult result;
    auto table = proximity_stage(ctx);
    result.calibration = calibrate_stage(ctx, table);
    result.spectrum =
        spectrum_stage(ctx, table, result.calibration.best_gamma, result.calibration.best_beta);
    auto pool = pool_stage(ctx);
    result.pool_size = pool.all().size();
    auto pool_table = pool_proximity_stage(ctx, pool);
    auto predictions = predict_stage(ctx, pool_table, result.calibration.best_gamma,
                                     result.calibration.best_beta);
    result.prediction_entries = predictions.entries.size();
    return result;
}

}  // namespace qcomb::pipeline
