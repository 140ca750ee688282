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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "qcomb/calibrate.hpp"
#include "qcomb/common.hpp"
#include "qcomb/predict.hpp"
#include "qcomb/proximity.hpp"
#include "qcomb/sqa.hpp"
#include "qcomb/text.hpp"

// Flat key-value configuration with [sections]. Every knob the pipeline
// uses lives here so a single file reproduces a run; command-line flags
// override individual values.

namespace qcomb::cfg {

struct PipelineConfig {
    // [data]
    std::string interactome_path;
    std::string drug_targets_path;
    std::string disease_genes_path;
    std::string combinations_path;
    // [run]
    std::string disease;
    std::string out_dir = "out";
    std::uint64_t master_seed = 0;
    bool seed_set = false;
    bool restrict_to_lcc = true;
    // [null_model]
    proximity::NullModelConfig null_model;
    // [grid]
    calibrate::GridSpec grid;
    // [penalty]
    int k1 = 2;
    int k2 = 3;
    bool lambda_includes_beta = false;
    // [spectrum]
    std::uint32_t spectrum_bottom_k = 15;
    // [sqa]
    sqa::SqaConfig sqa;
    std::uint64_t runs = 1024;
    // [pool]
    std::size_t pool_size = 50;
    bool pool_overlap_rule = true;
    double pool_overlap_threshold = 0.0;

    void validate(bool need_data_paths = true) const {
        require(seed_set, "config: master_seed must be set (no silent nondeterminism)");
        if (need_data_paths) {
            for (const auto& [field, path] :
                 std::initializer_list<std::pair<const char*, const std::string&>>{
                     {"data.interactome", interactome_path},
                     {"data.drug_targets", drug_targets_path},
                     {"data.disease_genes", disease_genes_path},
                     {"data.combinations", combinations_path}}) {
                require(!path.empty(), "config: field '", field, "' is missing");
                require(std::filesystem::exists(path), "config: field '", field,
                        "' points to a missing file: ", path);
            }
        }
        null_model.validate();
        grid.validate();
        sqa.validate();
        require(std::abs(k1 - k2) <= 1, "config: penalty window needs |k1-k2| <= 1");
        require(runs >= 1, "config: sqa.runs must be >= 1");
    }
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail("config: field '", key, "' expects a boolean, got '", value, "'");
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        require(pos == value.size(), "trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("config: field '", key, "' expects a number, got '", value, "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(value, &pos);
        require(pos == value.size(), "trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("config: field '", key, "' expects a non-negative integer, got '", value, "'");
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(value, &pos);
        require(pos == value.size(), "trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("config: field '", key, "' expects an integer, got '", value, "'");
    }
}

/// "lo:hi:steps"
inline calibrate::AxisSpec parse_axis(const std::string& key, const std::string& value) {
    auto parts = text::split(value, ':');
    require(parts.size() == 3, "config: field '", key, "' expects lo:hi:steps, got '", value, "'");
    calibrate::AxisSpec a;
    a.lo = parse_double(key, text::trim(parts[0]));
    a.hi = parse_double(key, text::trim(parts[1]));
    a.steps = static_cast<std::uint32_t>(parse_u64(key, text::trim(parts[2])));
    return a;
}

}  // namespace detail

/// Apply one dotted key. Unknown keys are errors so typos never pass silently.
inline void apply_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "data.interactome") cfg.interactome_path = value;
    else if (key == "data.drug_targets") cfg.drug_targets_path = value;
    else if (key == "data.disease_genes") cfg.disease_genes_path = value;
    else if (key == "data.combinations") cfg.combinations_path = value;
    else if (key == "run.disease") cfg.disease = value;
    else if (key == "run.out") cfg.out_dir = value;
    else if (key == "run.master_seed") { cfg.master_seed = parse_u64(key, value); cfg.seed_set = true; }
    else if (key == "run.restrict_to_lcc") cfg.restrict_to_lcc = parse_bool(key, value);
    else if (key == "null_model.num_samples") cfg.null_model.num_samples = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "null_model.degree_bin_min_size") cfg.null_model.degree_bin_min_size = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "null_model.randomize_both") cfg.null_model.randomize_both = parse_bool(key, value);
    else if (key == "grid.gamma") cfg.grid.gamma = parse_axis(key, value);
    else if (key == "grid.beta") cfg.grid.beta = parse_axis(key, value);
    else if (key == "penalty.k1") cfg.k1 = parse_int(key, value);
    else if (key == "penalty.k2") cfg.k2 = parse_int(key, value);
    else if (key == "penalty.lambda_includes_beta") cfg.lambda_includes_beta = parse_bool(key, value);
    else if (key == "spectrum.bottom_k") cfg.spectrum_bottom_k = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "sqa.trotter_slices") cfg.sqa.trotter_slices = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "sqa.inverse_temperature") cfg.sqa.inverse_temperature = parse_double(key, value);
    else if (key == "sqa.sweeps") cfg.sqa.schedule.total_sweeps = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "sqa.schedule") {
        if (value == "linear") cfg.sqa.schedule.shape = sqa::AnnealSchedule::Shape::Linear;
        else if (value == "exponential") cfg.sqa.schedule.shape = sqa::AnnealSchedule::Shape::Exponential;
        else fail("config: field 'sqa.schedule' expects linear|exponential, got '", value, "'");
    }
    else if (key == "sqa.alpha") cfg.sqa.schedule.alpha = parse_double(key, value);
    else if (key == "sqa.gamma0") cfg.sqa.schedule.gamma0 = parse_double(key, value);
    else if (key == "sqa.gamma_min") cfg.sqa.schedule.gamma_min = parse_double(key, value);
    else if (key == "sqa.runs") cfg.runs = parse_u64(key, value);
    else if (key == "pool.size") cfg.pool_size = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "pool.overlap_rule") cfg.pool_overlap_rule = parse_bool(key, value);
    else if (key == "pool.overlap_threshold") cfg.pool_overlap_threshold = parse_double(key, value);
    else fail("config: unknown field '", key, "'");
}

/// Parse an INI-style file: [section] headers, key = value lines,
/// '#' or ';' comments.
inline PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file: ", path);
    PipelineConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = text::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = text::trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        require(eq != std::string::npos, "config syntax error at ", path, ":", lineno,
                ": expected key = value");
        std::string key = text::trim(t.substr(0, eq));
        std::string value = text::trim(t.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        apply_key(cfg, key, value);
    }
    return cfg;
}

/// Canonical render of every resolved setting; embedded in artifacts and
/// hashed for cache validation.
inline std::string canonical_string(const PipelineConfig& cfg) {
    std::ostringstream ss;
    ss << "data.interactome=" << cfg.interactome_path << "\n"
       << "data.drug_targets=" << cfg.drug_targets_path << "\n"
       << "data.disease_genes=" << cfg.disease_genes_path << "\n"
       << "data.combinations=" << cfg.combinations_path << "\n"
       << "run.disease=" << cfg.disease << "\n"
       << "run.out=" << cfg.out_dir << "\n"
       << "run.master_seed=" << cfg.master_seed << "\n"
       << "run.restrict_to_lcc=" << (cfg.restrict_to_lcc ? "true" : "false") << "\n"
       << "null_model.num_samples=" << cfg.null_model.num_samples << "\n"
       << "null_model.degree_bin_min_size=" << cfg.null_model.degree_bin_min_size << "\n"
       << "null_model.randomize_both=" << (cfg.null_model.randomize_both ? "true" : "false") << "\n"
       << "grid.gamma=" << text::format_double(cfg.grid.gamma.lo) << ":"
       << text::format_double(cfg.grid.gamma.hi) << ":" << cfg.grid.gamma.steps << "\n"
       << "grid.beta=" << text::format_double(cfg.grid.beta.lo) << ":"
       << text::format_double(cfg.grid.beta.hi) << ":" << cfg.grid.beta.steps << "\n"
       << "penalty.k1=" << cfg.k1 << "\n"
       << "penalty.k2=" << cfg.k2 << "\n"
       << "penalty.lambda_includes_beta=" << (cfg.lambda_includes_beta ? "true" : "false") << "\n"
       << "spectrum.bottom_k=" << cfg.spectrum_bottom_k << "\n"
       << "sqa.trotter_slices=" << cfg.sqa.trotter_slices << "\n"
       << "sqa.inverse_temperature=" << text::format_double(cfg.sqa.inverse_temperature) << "\n"
       << "sqa.sweeps=" << cfg.sqa.schedule.total_sweeps << "\n"
       << "sqa.schedule="
       << (cfg.sqa.schedule.shape == sqa::AnnealSchedule::Shape::Linear ? "linear" : "exponential")
       << "\n"
       << "sqa.alpha=" << text::format_double(cfg.sqa.schedule.alpha) << "\n"
       << "sqa.gamma0=" << text::format_double(cfg.sqa.schedule.gamma0) << "\n"
       << "sqa.gamma_min=" << text::format_double(cfg.sqa.schedule.gamma_min) << "\n"
       << "sqa.runs=" << cfg.runs << "\n"
       << "pool.size=" << cfg.pool_size << "\n"
       << "pool.overlap_rule=" << (cfg.pool_overlap_rule ? "true" : "false") << "\n"
       << "pool.overlap_threshold=" << text::format_double(cfg.pool_overlap_threshold) << "\n";
    return ss.str();
}

}  // namespace qcomb::cfg
