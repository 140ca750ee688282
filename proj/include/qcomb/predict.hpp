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

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcomb/calibrate.hpp"
#include "qcomb/common.hpp"
#include "qcomb/graph.hpp"
#include "qcomb/ingest.hpp"
#include "qcomb/proximity.hpp"
#include "qcomb/qubo.hpp"
#include "qcomb/rng.hpp"
#include "qcomb/spectrum.hpp"
#include "qcomb/sqa.hpp"

// Candidate-pool enlargement and the final ranked prediction list.

namespace qcomb::predict {

struct OverlapRule {
    bool enabled = true;
    double separation_threshold = 0.0;  // exclude when s < threshold
};

struct Exclusion {
    std::string candidate;
    std::string against;
    std::string reason;
};

struct EnlargedPool {
    std::vector<std::string> base_drugs;
    std::vector<std::string> padding_drugs;  // in selection order
    std::vector<Exclusion> exclusion_log;
    std::size_t target_size = 0;

    std::vector<std::string> all() const {
        std::vector<std::string> out = base_drugs;
        out.insert(out.end(), padding_drugs.begin(), padding_drugs.end());
        return out;
    }
};

/// Pad `base` with randomly selected universe drugs up to `size`. A
/// candidate is skipped when, against any already-selected drug, its
/// separation falls below the threshold or its target set is identical
/// (maximal overlap) - unless that pair occurs together in a validated
/// combination. Selection order is deterministic given `seed`.
inline EnlargedPool build_enlarged_pool(const graph::Interactome& g,
                                        const std::vector<std::string>& base,
                                        const ingest::DrugTargetMap& universe, std::size_t size,
                                        std::uint64_t seed,
                                        const std::vector<ingest::Combination>& validated,
                                        const OverlapRule& rule = {}) {
    require(size >= base.size(), "pool size ", size, " is smaller than the base drug set (",
            base.size(), ")");
    for (const auto& d : base)
        require(universe.entries.count(d), "base drug '", d, "' missing from drug-target map");

    std::set<std::pair<std::string, std::string>> validated_pairs;
    for (const auto& combo : validated)
        for (std::size_t i = 0; i < combo.drugs.size(); ++i)
            for (std::size_t j = i + 1; j < combo.drugs.size(); ++j)
                validated_pairs.emplace(std::min(combo.drugs[i], combo.drugs[j]),
                                        std::max(combo.drugs[i], combo.drugs[j]));
    auto pair_validated = [&](const std::string& a, const std::string& b) {
        return validated_pairs.count({std::min(a, b), std::max(a, b)}) > 0;
    };

    EnlargedPool pool;
    pool.base_drugs = base;
    pool.target_size = size;

    std::vector<std::string> candidates;
    for (const auto& [drug, targets] : universe.entries)
        if (std::find(base.begin(), base.end(), drug) == base.end() && !targets.empty())
            candidates.push_back(drug);
    Rng rng(seed);
    rng.shuffle(candidates);

    std::vector<std::string> selected = base;
    auto targets_of = [&](const std::string& d) {
        return g.node_set(d, universe.entries.at(d));
    };
    for (const auto& cand : candidates) {
        if (selected.size() >= size) break;
        const auto& cand_targets = universe.entries.at(cand);
        bool ok = true;
        for (const auto& sel : selected) {
            if (pair_validated(cand, sel)) continue;
            if (universe.entries.at(sel) == cand_targets) {
                pool.exclusion_log.push_back({cand, sel, "identical target set"});
                ok = false;
                break;
            }
            if (rule.enabled) {
                const double s = proximity::separation(g, targets_of(cand), targets_of(sel));
                if (s < rule.separation_threshold) {
                    pool.exclusion_log.push_back(
                        {cand, sel, "separation " + text::format_double(s) + " below threshold"});
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            selected.push_back(cand);
            pool.padding_drugs.push_back(cand);
        }
    }
    if (selected.size() < size)
        fail("enlarged pool: only ", selected.size(), " of ", size,
             " drugs could be selected (", pool.exclusion_log.size(),
             " candidates excluded by the overlap rule, ", candidates.size(),
             " candidates available)");
    return pool;
}

struct PredictionEntry {
    std::uint64_t mask = 0;
    std::vector<std::string> drugs;  // sorted ids
    double frequency = 0.0;          // n_c / R
    double energy = 0.0;
    bool is_validated = false;
};

struct PredictionList {
    std::vector<PredictionEntry> entries;  // descending frequency
    std::uint64_t runs = 0;
    std::string instance_fingerprint;

    /// The prediction output: everything not already validated.
    std::vector<PredictionEntry> novel_only() const {
        std::vector<PredictionEntry> out;
        for (const auto& e : entries)
            if (!e.is_validated) out.push_back(e);
        return out;
    }
};

struct PredictionRun {
    PredictionList list;
    sqa::SampleSet samples;
};

/// Rank an existing sample set by frequency (ties: ascending energy, then
/// lexicographic bitstring). Validated combinations stay in the list,
/// flagged, as positive controls.
inline PredictionList rank_samples(const sqa::SampleSet& samples,
                                   const std::vector<std::string>& labels,
                                   const std::vector<ingest::Combination>& validated) {
    const auto masks = spectrum::validated_masks(labels, validated);
    PredictionList out;
    out.runs = samples.runs;
    out.instance_fingerprint = samples.instance_fingerprint;
    out.entries.reserve(samples.records.size());
    for (const auto& [mask, rec] : samples.records) {
        PredictionEntry e;
        e.mask = mask;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if ((mask >> i) & 1u) e.drugs.push_back(labels[i]);
        std::sort(e.drugs.begin(), e.drugs.end());
        e.frequency = static_cast<double>(rec.count) / static_cast<double>(samples.runs);
        e.energy = rec.energy;
        e.is_validated = masks.count(mask) > 0;
        out.entries.push_back(std::move(e));
    }
    const std::size_t n = labels.size();
    std::sort(out.entries.begin(), out.entries.end(),
              [n](const PredictionEntry& a, const PredictionEntry& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  if (a.energy != b.energy) return a.energy < b.energy;
                  return qubo::lex_key(a.mask, n) < qubo::lex_key(b.mask, n);
              });
    return out;
}

/// Build the calibrated Hamiltonian over the pool, sample it R times, and
/// rank the observed configurations.
inline PredictionRun run_prediction(const proximity::ProximityTable& pool_table, double gamma,
                                    double beta, int k1, int k2, const sqa::SqaConfig& sqa_cfg,
                                    std::uint64_t runs,
                                    const std::vector<ingest::Combination>& validated) {
    auto q = qubo::build_hamiltonian(pool_table, gamma, beta);
    q = calibrate::apply_default_window_penalty(std::move(q), pool_table, gamma, k1, k2);
    PredictionRun out;
    out.samples = sqa::sample(q, sqa_cfg, runs);
    out.list = rank_samples(out.samples, pool_table.drugs, validated);
    return out;
}

}  // namespace qcomb::predict
