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

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/graph.hpp"
#include "qcomb/parallel.hpp"
#include "qcomb/rng.hpp"

// Network proximity between node sets on the interactome:
//
//   d(X,Y)  = mean over y in Y of the hop distance to the nearest x in X
//   z(X,Y)  = (d(X,Y) - mu) / sigma against a degree-matched random null
//   s(A,B)  = <d_AB> - (<d_AA> + <d_BB>) / 2
//
// All "nearest member" terms in s take the nearest *distinct* node: a node
// never pairs with itself, which makes s(A,A) identically zero and keeps
// s symmetric. Unreachable terms (cross-component pairs) are excluded from
// averages and logged rather than treated as a large constant.

namespace qcomb::proximity {

using graph::Interactome;
using graph::NodeId;
using graph::NodeSet;

struct NullModelConfig {
    std::uint32_t num_samples = 1000;
    std::uint32_t degree_bin_min_size = 100;
    std::uint64_t master_seed = 0;
    bool randomize_both = true;  // false: keep the disease side fixed per draw

    void validate() const {
        require(num_samples >= 2, "null model: num_samples must be >= 2");
        require(degree_bin_min_size >= 1, "null model: degree_bin_min_size must be >= 1");
    }
};

struct ProximityTable {
    std::string disease_id;
    std::vector<std::string> drugs;
    std::vector<double> z;                  // per drug, dimensionless
    std::vector<std::vector<double>> s;     // symmetric, hops, s[i][i] = 0
    NullModelConfig config;

    double s_at(std::size_t i, std::size_t j) const { return s[i][j]; }
    std::size_t drug_count() const { return drugs.size(); }
};

/// Exact-degree bins merged upward until every bin holds at least
/// `min_size` candidate nodes; the trailing remainder merges into the
/// previous bin. Sampling degree-matched sets replaces each node with a
/// uniform draw from its bin, without replacement within a set.
class DegreeBins {
public:
    DegreeBins(const Interactome& g, std::uint32_t min_size) {
        const std::size_t n = g.node_count();
        std::uint32_t max_deg = 0;
        for (NodeId v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
        std::vector<std::vector<NodeId>> by_degree(max_deg + 1);
        for (NodeId v = 0; v < n; ++v) by_degree[g.degree(v)].push_back(v);

        bin_of_degree_.assign(max_deg + 1, 0);
        std::vector<NodeId> current;
        std::uint32_t first_deg_in_bin = 0;
        for (std::uint32_t d = 0; d <= max_deg; ++d) {
            if (by_degree[d].empty() && d > 0) {
                bin_of_degree_[d] = static_cast<std::uint32_t>(bins_.size());
                continue;
            }
            if (current.empty()) first_deg_in_bin = d;
            current.insert(current.end(), by_degree[d].begin(), by_degree[d].end());
            bin_of_degree_[d] = static_cast<std::uint32_t>(bins_.size());
            if (current.size() >= min_size) {
                bins_.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty()) {
            if (bins_.empty()) {
                bins_.push_back(std::move(current));
            } else {
                // merge the short tail into the last full bin
                auto& last = bins_.back();
                last.insert(last.end(), current.begin(), current.end());
                for (std::uint32_t d = first_deg_in_bin; d <= max_deg; ++d)
                    if (bin_of_degree_[d] == bins_.size()) bin_of_degree_[d] = static_cast<std::uint32_t>(bins_.size() - 1);
            }
        }
        // degrees past the last closed bin all map into it
        for (std::uint32_t d = 0; d <= max_deg; ++d)
            if (bin_of_degree_[d] >= bins_.size()) bin_of_degree_[d] = static_cast<std::uint32_t>(bins_.size() - 1);
    }

    std::uint32_t bin_of(std::uint32_t degree) const {
        if (degree >= bin_of_degree_.size()) return static_cast<std::uint32_t>(bins_.size() - 1);
        return bin_of_degree_[degree];
    }

    const std::vector<NodeId>& candidates(std::uint32_t bin) const { return bins_[bin]; }

    /// Degree-matched random replacement for `set`: same size, same bins.
    std::vector<NodeId> sample_matched(const Interactome& g, const std::vector<NodeId>& set,
                                       Rng& rng) const {
        std::map<std::uint32_t, std::uint32_t> need;  // bin -> count, ordered for determinism
        for (NodeId v : set) ++need[bin_of(g.degree(v))];
        std::vector<NodeId> out;
        out.reserve(set.size());
        for (const auto& [bin, k] : need) {
            const auto& pool = bins_[bin];
            if (k > pool.size())
                fail("degree bin for degree ", first_degree_of(bin), " holds ", pool.size(),
                     " candidates but ", k, " are required; raise degree_bin_min_size");
            sample_distinct(pool, k, rng, out);
        }
        return out;
    }

private:
    std::uint32_t first_degree_of(std::uint32_t bin) const {
        for (std::uint32_t d = 0; d < bin_of_degree_.size(); ++d)
            if (bin_of_degree_[d] == bin) return d;
        return 0;
    }

    /// Floyd's algorithm: k distinct draws from pool without copying it.
    static void sample_distinct(const std::vector<NodeId>& pool, std::uint32_t k, Rng& rng,
                                std::vector<NodeId>& out) {
        const std::size_t n = pool.size();
        std::unordered_set<std::size_t> chosen;
        chosen.reserve(k * 2);
        for (std::size_t i = n - k; i < n; ++i) {
            std::size_t j = rng.index(i + 1);
            if (!chosen.insert(j).second) {
                chosen.insert(i);
                out.push_back(pool[i]);
            } else {
                out.push_back(pool[j]);
            }
        }
    }

    std::vector<std::vector<NodeId>> bins_;
    std::vector<std::uint32_t> bin_of_degree_;
};

namespace detail {

/// Mean over `targets` of dist[t], skipping unreachable entries.
/// Returns NaN when no target is reachable.
inline double mean_reachable(const std::vector<std::int32_t>& dist,
                             const std::vector<NodeId>& targets, std::size_t* excluded = nullptr) {
    double sum = 0.0;
    std::size_t used = 0;
    for (NodeId t : targets) {
        if (dist[t] >= 0) {
            sum += dist[t];
            ++used;
        }
    }
    if (excluded) *excluded = targets.size() - used;
    if (used == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / static_cast<double>(used);
}

/// Per-member nearest-distinct-member distances within one set.
inline std::vector<std::int32_t> within_set_terms(const Interactome& g,
                                                  const std::vector<NodeId>& set,
                                                  graph::BfsScratch& scratch) {
    std::vector<std::int32_t> terms(set.size(), graph::kUnreachable);
    if (set.size() < 2) return terms;
    std::vector<bool> is_member(g.node_count(), false);
    for (NodeId v : set) is_member[v] = true;
    for (std::size_t i = 0; i < set.size(); ++i)
        terms[i] = graph::nearest_other_distance(g, set[i], is_member, scratch);
    return terms;
}

inline double mean_within(const std::vector<std::int32_t>& terms) {
    if (terms.empty()) return 0.0;
    double sum = 0.0;
    std::size_t used = 0;
    for (auto t : terms) {
        if (t >= 0) {
            sum += t;
            ++used;
        }
    }
    if (used == 0) return 0.0;  // singleton or fully disconnected set
    return sum / static_cast<double>(used);
}

}  // namespace detail

/// Eq-style closest distance d(X,Y): one multi-source BFS from X, averaged
/// over the disease proteins reachable from X.
inline double closest_distance(const Interactome& g, const NodeSet& X, const NodeSet& Y) {
    require(!X.empty(), "closest_distance: X is empty");
    require(!Y.empty(), "closest_distance: Y is empty");
    auto field = graph::multi_source_bfs(g, X);
    std::size_t excluded = 0;
    double d = detail::mean_reachable(field.dist, Y.members, &excluded);
    if (excluded > 0)
        log::info("closest_distance: ", excluded, " of ", Y.size(),
                  " targets unreachable from '", X.name, "'; excluded from the average");
    require(!std::isnan(d), "no reachable disease proteins: every member of '", Y.name,
            "' is unreachable from '", X.name, "'");
    return d;
}

struct NullSummary {
    double mean = 0.0;
    double stddev = 0.0;   // sample standard deviation (n-1)
    std::size_t valid_draws = 0;
};

/// mu and sigma of d(X~,Y~) over degree-matched random draws. Draw i uses an
/// RNG stream derived from (seed, i), so the ensemble is identical however
/// the draws are scheduled.
inline NullSummary null_distribution(const Interactome& g, const DegreeBins& bins,
                                     const NodeSet& X, const NodeSet& Y,
                                     const NullModelConfig& cfg, std::uint64_t seed) {
    std::vector<double> draws(cfg.num_samples, std::numeric_limits<double>::quiet_NaN());
    parallel_for(cfg.num_samples, [&](std::size_t i) {
        thread_local graph::BfsScratch scratch;
        Rng rng(derive_seed(seed, i));
        std::vector<NodeId> xs = bins.sample_matched(g, X.members, rng);
        std::vector<NodeId> ys = cfg.randomize_both ? bins.sample_matched(g, Y.members, rng)
                                                    : Y.members;
        graph::multi_source_bfs_into(g, xs, scratch);
        draws[i] = detail::mean_reachable(scratch.dist, ys);
    });
    NullSummary out;
    double sum = 0.0;
    for (double d : draws) {
        if (!std::isnan(d)) {
            sum += d;
            ++out.valid_draws;
        }
    }
    if (out.valid_draws < cfg.num_samples)
        log::warn("null model: ", cfg.num_samples - out.valid_draws,
                  " draws had no reachable targets and were discarded");
    require(out.valid_draws >= 2, "degenerate null distribution: fewer than 2 valid draws");
    out.mean = sum / static_cast<double>(out.valid_draws);
    double ss = 0.0;
    for (double d : draws) {
        if (!std::isnan(d)) {
            const double delta = d - out.mean;
            ss += delta * delta;
        }
    }
    out.stddev = std::sqrt(ss / static_cast<double>(out.valid_draws - 1));
    return out;
}

/// z(X,Y) = (d(X,Y) - mu) / sigma under the degree-matched null.
inline double z_score(const Interactome& g, const DegreeBins& bins, const NodeSet& X,
                      const NodeSet& Y, const NullModelConfig& cfg, std::uint64_t seed) {
    const double d = closest_distance(g, X, Y);
    const NullSummary null = null_distribution(g, bins, X, Y, cfg, seed);
    require(null.stddev > 1e-12, "degenerate null distribution: sigma = ", null.stddev,
            " for sets '", X.name, "' / '", Y.name, "'");
    return (d - null.mean) / null.stddev;
}

inline double z_score(const Interactome& g, const NodeSet& X, const NodeSet& Y,
                      const NullModelConfig& cfg) {
    cfg.validate();
    DegreeBins bins(g, cfg.degree_bin_min_size);
    return z_score(g, bins, X, Y, cfg, cfg.master_seed);
}

/// Separation s(A,B). Cross terms pair each node with the nearest distinct
/// member of the other set; within terms with the nearest distinct member of
/// its own set. Unreachable terms are excluded and logged.
inline double separation(const Interactome& g, const NodeSet& A, const NodeSet& B) {
    require(!A.empty(), "separation: A is empty");
    require(!B.empty(), "separation: B is empty");
    graph::BfsScratch scratch;

    auto field_a = graph::multi_source_bfs(g, A);
    auto field_b = graph::multi_source_bfs(g, B);
    auto within_a = detail::within_set_terms(g, A.members, scratch);
    auto within_b = detail::within_set_terms(g, B.members, scratch);

    std::vector<bool> in_a(g.node_count(), false), in_b(g.node_count(), false);
    for (NodeId v : A.members) in_a[v] = true;
    for (NodeId v : B.members) in_b[v] = true;

    // For a node belonging to both sets the nearest distinct member of the
    // other set is exactly its within-set term there.
    double cross_sum = 0.0;
    std::size_t cross_used = 0, cross_total = 0;
    auto add_cross = [&](NodeId /*v*/, std::int32_t term) {
        ++cross_total;
        if (term >= 0) {
            cross_sum += term;
            ++cross_used;
        }
    };
    for (std::size_t i = 0; i < A.members.size(); ++i) {
        const NodeId a = A.members[i];
        if (in_b[a]) {
            if (B.size() == 1) {
                add_cross(a, 0);  // B = {a}: the shared node itself
            } else {
                // nearest member of B other than a
                std::size_t j = std::lower_bound(B.members.begin(), B.members.end(), a) -
                                B.members.begin();
                add_cross(a, within_b[j]);
            }
        } else {
            add_cross(a, field_b.dist[a]);
        }
    }
    for (std::size_t j = 0; j < B.members.size(); ++j) {
        const NodeId b = B.members[j];
        if (in_a[b]) {
            if (A.size() == 1) {
                add_cross(b, 0);
            } else {
                std::size_t i = std::lower_bound(A.members.begin(), A.members.end(), b) -
                                A.members.begin();
                add_cross(b, within_a[i]);
            }
        } else {
            add_cross(b, field_a.dist[b]);
        }
    }
    require(cross_used > 0, "separation: all cross-set distances between '", A.name, "' and '",
            B.name, "' are unreachable");
    if (cross_used < cross_total)
        log::info("separation: excluded ", cross_total - cross_used, " unreachable cross terms");

    const double d_ab = cross_sum / static_cast<double>(cross_used);
    const double d_aa = detail::mean_within(within_a);
    const double d_bb = detail::mean_within(within_b);
    return d_ab - 0.5 * (d_aa + d_bb);
}

/// z vector and full symmetric separation matrix for one disease and a drug
/// list. Per-drug null seeds derive from (master_seed, drug index).
inline ProximityTable build_proximity_table(const Interactome& g, const NodeSet& disease,
                                            const std::vector<NodeSet>& drugs,
                                            const NullModelConfig& cfg) {
    cfg.validate();
    require(drugs.size() >= 2, "proximity table needs at least 2 drugs");
    DegreeBins bins(g, cfg.degree_bin_min_size);

    ProximityTable table;
    table.disease_id = disease.name;
    table.config = cfg;
    table.drugs.reserve(drugs.size());
    for (const auto& d : drugs) table.drugs.push_back(d.name);

    table.z.resize(drugs.size());
    for (std::size_t i = 0; i < drugs.size(); ++i)
        table.z[i] = z_score(g, bins, drugs[i], disease, cfg, derive_seed(cfg.master_seed, i));

    const std::size_t n = drugs.size();
    table.s.assign(n, std::vector<double>(n, 0.0));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> s_flat(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        s_flat[k] = separation(g, drugs[pairs[k].first], drugs[pairs[k].second]);
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        table.s[pairs[k].first][pairs[k].second] = s_flat[k];
        table.s[pairs[k].second][pairs[k].first] = s_flat[k];
    }
    for (std::size_t i = 0; i < n; ++i)
        require(std::isfinite(table.z[i]), "z-score for drug '", table.drugs[i], "' is not finite");
    return table;
}

}  // namespace qcomb::proximity
