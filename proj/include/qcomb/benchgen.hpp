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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "qcomb/common.hpp"
#include "qcomb/jsonio.hpp"
#include "qcomb/rng.hpp"

// Deterministic synthetic benchmark with the same schema and scale as the
// public interactome / drug-target / disease-gene / combination datasets.
// Four named diseases carry planted structure: localized disease modules,
// drugs whose targets hug distinct sub-regions of their module, and
// validated combinations split between well-separated ("good") drug pairs
// and uninformative noise pairs. The noise fraction controls how cleanly a
// calibrated model can concentrate the validated combinations at the bottom
// of the spectrum.

namespace qcomb::benchgen {

struct DiseaseSpec {
    std::string name;
    std::size_t n_drugs = 10;
    std::size_t module_size = 110;
    std::size_t good_pairs = 10;
    std::size_t noise_pairs = 5;
    std::size_t triples = 3;
    double target_noise = 0.15;  // probability of an unrelated target per slot
};

struct BenchmarkSpec {
    std::uint64_t seed = 20250810;
    std::size_t nodes = 16677;
    std::size_t edges = 243603;
    std::size_t attach_per_node = 14;
    std::size_t diseases = 519;
    std::size_t associations = 21357;
    std::size_t gene_pool = 7294;
    std::size_t drugs = 136;
    std::size_t other_pairs = 189;
    std::size_t other_triples = 30;
    std::size_t other_quads = 13;
    std::size_t other_combo_diseases = 31;
    std::vector<DiseaseSpec> benchmark = {
        {"Diabetes Mellitus", 10, 110, 10, 5, 3, 0.15},
        {"Rheumatoid Arthritis", 10, 100, 8, 3, 3, 0.15},
        {"Asthma", 9, 90, 7, 2, 3, 0.15},
        {"Brain Neoplasms", 9, 95, 7, 3, 1, 0.15},
    };

    /// Reduced scale for unit tests; same structure, seconds to analyse.
    static BenchmarkSpec small() {
        BenchmarkSpec s;
        s.nodes = 1500;
        s.edges = 9000;
        s.attach_per_node = 5;
        s.diseases = 30;
        s.associations = 1200;
        s.gene_pool = 600;
        s.drugs = 40;
        s.other_pairs = 20;
        s.other_triples = 4;
        s.other_quads = 2;
        s.other_combo_diseases = 8;
        s.benchmark = {
            {"Diabetes Mellitus", 6, 60, 5, 2, 1, 0.15},
            {"Rheumatoid Arthritis", 6, 55, 4, 2, 1, 0.15},
            {"Asthma", 5, 50, 4, 1, 1, 0.15},
            {"Brain Neoplasms", 5, 50, 4, 1, 1, 0.15},
        };
        return s;
    }
};

struct GeneratedFiles {
    std::string interactome;
    std::string drug_targets;
    std::string disease_genes;
    std::string combinations;
    std::string manifest;
};

namespace detail {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

inline std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t{u} << 32) | v;
}

/// Preferential-attachment graph padded with uniform random edges to hit the
/// exact edge count. Connected by construction.
inline Adjacency generate_graph(const BenchmarkSpec& spec, Rng& rng,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    const std::size_t n = spec.nodes;
    const std::size_t m = spec.attach_per_node;
    require(n > m + 1, "benchgen: node count too small for attachment parameter");
    std::unordered_set<std::uint64_t> seen;
    edges.clear();
    edges.reserve(spec.edges);
    std::vector<std::uint32_t> endpoints;
    endpoints.reserve(2 * spec.edges);
    auto add_edge = [&](std::uint32_t u, std::uint32_t v) {
        if (u == v) return false;
        if (!seen.insert(edge_key(u, v)).second) return false;
        edges.emplace_back(u, v);
        endpoints.push_back(u);
        endpoints.push_back(v);
        return true;
    };
    const std::size_t core = m + 1;
    for (std::uint32_t u = 0; u < core; ++u)
        for (std::uint32_t v = u + 1; v < core; ++v) add_edge(u, v);
    for (std::uint32_t v = static_cast<std::uint32_t>(core); v < n; ++v) {
        std::size_t attached = 0;
        std::size_t guard = 0;
        while (attached < m) {
            std::uint32_t u = (++guard > 50 * m)
                                  ? static_cast<std::uint32_t>(rng.index(v))
                                  : endpoints[rng.index(endpoints.size())];
            if (u < v && add_edge(u, v)) ++attached;
        }
    }
    require(edges.size() <= spec.edges, "benchgen: attachment already exceeds target edge count");
    while (edges.size() < spec.edges) {
        auto u = static_cast<std::uint32_t>(rng.index(n));
        auto v = static_cast<std::uint32_t>(rng.index(n));
        add_edge(u, v);
    }
    Adjacency adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

inline std::vector<std::int32_t> bfs(const Adjacency& adj, std::uint32_t start) {
    std::vector<std::int32_t> dist(adj.size(), -1);
    std::vector<std::uint32_t> queue{start};
    dist[start] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        for (std::uint32_t w : adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

/// Nodes within `radius` hops of `start`, nearest first.
inline std::vector<std::uint32_t> ball(const Adjacency& adj, std::uint32_t start, int radius) {
    std::vector<std::uint32_t> queue{start};
    std::vector<std::int32_t> dist(adj.size(), -1);
    dist[start] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        if (dist[u] >= radius) continue;
        for (std::uint32_t w : adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return queue;
}

/// Greedy max-min-distance selection of k sub-anchors out of `pool`.
inline std::vector<std::uint32_t> spread_anchors(const Adjacency& adj,
                                                 const std::vector<std::uint32_t>& pool,
                                                 std::size_t k, Rng& rng) {
    require(pool.size() >= k, "benchgen: anchor pool smaller than requested anchors");
    std::vector<std::uint32_t> chosen{pool[rng.index(pool.size())]};
    std::vector<std::vector<std::int32_t>> dists{bfs(adj, chosen[0])};
    while (chosen.size() < k) {
        std::uint32_t best = pool[0];
        std::int64_t best_score = -1;
        for (std::uint32_t cand : pool) {
            if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end()) continue;
            std::int32_t mind = INT32_MAX;
            for (const auto& d : dists) mind = std::min(mind, d[cand] < 0 ? INT32_MAX : d[cand]);
            if (static_cast<std::int64_t>(mind) > best_score) {
                best_score = mind;
                best = cand;
            }
        }
        chosen.push_back(best);
        dists.push_back(bfs(adj, best));
    }
    return chosen;
}

}  // namespace detail

/// Generate the four dataset files plus a manifest of expected counts into
/// `out_dir`. Fully deterministic under spec.seed.
inline GeneratedFiles generate(const BenchmarkSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    using detail::Adjacency;
    fs::create_directories(out_dir);

    // --- interactome ---
    Rng graph_rng(derive_seed(spec.seed, 1));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    Adjacency adj = detail::generate_graph(spec, graph_rng, edges);
    const std::size_t n = spec.nodes;
    auto protein_name = [](std::uint32_t v) { return std::to_string(10001 + v); };

    // --- planted disease modules ---
    Rng plant_rng(derive_seed(spec.seed, 2));
    std::vector<std::uint32_t> moderate;
    for (std::uint32_t v = 0; v < n; ++v)
        if (adj[v].size() >= 8 && adj[v].size() <= 60) moderate.push_back(v);
    require(moderate.size() >= spec.benchmark.size() * 4,
            "benchgen: not enough moderate-degree nodes for module anchors");
    auto anchors = detail::spread_anchors(adj, moderate, spec.benchmark.size(), plant_rng);

    struct PlantedDisease {
        std::vector<std::uint32_t> module_genes;
        std::vector<std::uint32_t> drug_anchors;
        std::vector<std::vector<std::uint32_t>> drug_targets;
        std::vector<std::vector<std::size_t>> combos;  // drug indices
    };
    std::vector<PlantedDisease> planted(spec.benchmark.size());

    for (std::size_t d = 0; d < spec.benchmark.size(); ++d) {
        const auto& ds = spec.benchmark[d];
        auto& p = planted[d];
        auto region = detail::ball(adj, anchors[d], 2);
        require(region.size() >= ds.module_size, "benchgen: module region too small for '",
                ds.name, "'");
        p.module_genes.assign(region.begin(), region.begin() + ds.module_size);

        // drug anchors spread across the module
        std::vector<std::uint32_t> pool(p.module_genes.begin() + 1, p.module_genes.end());
        p.drug_anchors = detail::spread_anchors(adj, pool, ds.n_drugs, plant_rng);

        std::unordered_set<std::uint32_t> in_module(p.module_genes.begin(), p.module_genes.end());
        for (std::size_t i = 0; i < ds.n_drugs; ++i) {
            const std::uint32_t a = p.drug_anchors[i];
            std::set<std::uint32_t> targets{a};
            const std::size_t want = 4 + plant_rng.index(6);  // 4..9 targets
            auto near = detail::ball(adj, a, 2);
            std::size_t guard = 0;
            while (targets.size() < want && ++guard < 500) {
                if (plant_rng.next_unit() < ds.target_noise) {
                    targets.insert(static_cast<std::uint32_t>(plant_rng.index(n)));
                } else if (plant_rng.next_unit() < 0.65 && adj[a].size() > 0) {
                    targets.insert(adj[a][plant_rng.index(adj[a].size())]);
                } else {
                    targets.insert(near[plant_rng.index(near.size())]);
                }
            }
            p.drug_targets.emplace_back(targets.begin(), targets.end());
        }

        // pair quality = hop distance between drug anchors
        std::vector<std::vector<std::int32_t>> anchor_dist;
        for (auto a : p.drug_anchors) anchor_dist.push_back(detail::bfs(adj, a));
        std::vector<std::pair<std::size_t, std::size_t>> all_pairs;
        for (std::size_t i = 0; i < ds.n_drugs; ++i)
            for (std::size_t j = i + 1; j < ds.n_drugs; ++j) all_pairs.emplace_back(i, j);
        std::stable_sort(all_pairs.begin(), all_pairs.end(), [&](const auto& x, const auto& y) {
            return anchor_dist[x.first][p.drug_anchors[x.second]] >
                   anchor_dist[y.first][p.drug_anchors[y.second]];
        });

        std::set<std::vector<std::size_t>> combo_set;
        std::vector<bool> covered(ds.n_drugs, false);
        auto add_combo = [&](std::vector<std::size_t> combo) {
            std::sort(combo.begin(), combo.end());
            if (!combo_set.insert(combo).second) return false;
            for (auto i : combo) covered[i] = true;
            p.combos.push_back(std::move(combo));
            return true;
        };
        // good pairs from the most-separated end, covering every drug first
        std::size_t good_added = 0;
        for (const auto& [i, j] : all_pairs) {
            if (good_added >= ds.good_pairs) break;
            if (good_added < ds.n_drugs / 2 + 1 && covered[i] && covered[j]) continue;
            if (add_combo({i, j})) ++good_added;
        }
        for (const auto& [i, j] : all_pairs) {
            if (good_added >= ds.good_pairs) break;
            if (add_combo({i, j})) ++good_added;
        }
        // noise pairs from the least-separated end
        std::size_t noise_added = 0;
        for (auto it = all_pairs.rbegin(); it != all_pairs.rend() && noise_added < ds.noise_pairs;
             ++it) {
            if (add_combo({it->first, it->second})) ++noise_added;
        }
        // triples of well-separated anchors
        std::size_t triples_added = 0;
        std::size_t guard = 0;
        while (triples_added < ds.triples && ++guard < 1000) {
            std::size_t i = plant_rng.index(ds.n_drugs);
            std::size_t j = plant_rng.index(ds.n_drugs);
            std::size_t k = plant_rng.index(ds.n_drugs);
            if (i == j || j == k || i == k) continue;
            const auto dij = anchor_dist[i][p.drug_anchors[j]];
            const auto djk = anchor_dist[j][p.drug_anchors[k]];
            const auto dik = anchor_dist[i][p.drug_anchors[k]];
            if (dij < 2 || djk < 2 || dik < 2) continue;
            if (add_combo({i, j, k})) ++triples_added;
        }
        // any drug still uncovered joins its best partner
        for (std::size_t i = 0; i < ds.n_drugs; ++i) {
            if (covered[i]) continue;
            for (const auto& [x, y] : all_pairs) {
                if (x == i || y == i) {
                    add_combo({x, y});
                    break;
                }
            }
        }
    }

    // --- drug universe ---
    Rng drug_rng(derive_seed(spec.seed, 3));
    std::size_t bench_drug_count = 0;
    for (const auto& ds : spec.benchmark) bench_drug_count += ds.n_drugs;
    require(spec.drugs >= bench_drug_count + 2, "benchgen: drug universe smaller than benchmark drugs");
    const std::size_t n_other_drugs = spec.drugs - bench_drug_count;

    std::vector<std::string> drug_names(spec.drugs);
    for (std::size_t i = 0; i < spec.drugs; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "D%04zu", i + 1);
        drug_names[i] = buf;
    }
    Rng name_rng(derive_seed(spec.seed, 4));
    name_rng.shuffle(drug_names);

    std::map<std::string, std::vector<std::uint32_t>> drug_targets;
    std::size_t name_cursor = 0;
    std::vector<std::vector<std::string>> bench_drug_ids(spec.benchmark.size());
    for (std::size_t d = 0; d < spec.benchmark.size(); ++d) {
        for (std::size_t i = 0; i < spec.benchmark[d].n_drugs; ++i) {
            const auto& id = drug_names[name_cursor++];
            bench_drug_ids[d].push_back(id);
            drug_targets[id] = planted[d].drug_targets[i];
        }
    }
    std::vector<std::string> other_drug_ids;
    for (std::size_t i = 0; i < n_other_drugs; ++i) {
        const auto& id = drug_names[name_cursor++];
        other_drug_ids.push_back(id);
        const std::uint32_t anchor = static_cast<std::uint32_t>(drug_rng.index(n));
        auto near = detail::ball(adj, anchor, 2);
        std::set<std::uint32_t> targets{anchor};
        const std::size_t want = 3 + drug_rng.index(8);  // 3..10
        std::size_t guard = 0;
        while (targets.size() < want && ++guard < 500) {
            if (drug_rng.next_unit() < 0.2)
                targets.insert(static_cast<std::uint32_t>(drug_rng.index(n)));
            else
                targets.insert(near[drug_rng.index(near.size())]);
        }
        drug_targets[id].assign(targets.begin(), targets.end());
    }

    // --- combinations ---
    Rng combo_rng(derive_seed(spec.seed, 5));
    struct ComboRow {
        std::string disease;
        std::vector<std::string> drugs;
    };
    std::vector<ComboRow> combo_rows;
    std::size_t bench_pairs = 0, bench_triples = 0;
    for (std::size_t d = 0; d < spec.benchmark.size(); ++d) {
        for (const auto& combo : planted[d].combos) {
            ComboRow row;
            row.disease = spec.benchmark[d].name;
            for (auto i : combo) row.drugs.push_back(bench_drug_ids[d][i]);
            std::sort(row.drugs.begin(), row.drugs.end());
            combo_rows.push_back(std::move(row));
            (combo.size() == 2 ? bench_pairs : bench_triples) += 1;
        }
    }

    // other combos: cover every non-benchmark drug, then fill quotas
    std::vector<std::string> disease_names(spec.diseases);
    for (std::size_t i = 0; i < spec.benchmark.size(); ++i)
        disease_names[i] = spec.benchmark[i].name;
    for (std::size_t i = spec.benchmark.size(); i < spec.diseases; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "Disease_%03zu", i + 1);
        disease_names[i] = buf;
    }
    require(spec.other_combo_diseases + spec.benchmark.size() <= spec.diseases,
            "benchgen: not enough disease names for combination diseases");
    std::vector<std::string> other_combo_diseases(
        disease_names.begin() + spec.benchmark.size(),
        disease_names.begin() + spec.benchmark.size() + spec.other_combo_diseases);

    std::set<std::pair<std::string, std::vector<std::string>>> other_combo_seen;
    std::vector<std::vector<std::string>> other_combos;
    auto add_other_combo = [&](std::vector<std::string> drugs) {
        std::sort(drugs.begin(), drugs.end());
        drugs.erase(std::unique(drugs.begin(), drugs.end()), drugs.end());
        return other_combos.emplace_back(std::move(drugs)), true;
    };
    {
        // coverage pairs
        std::vector<std::string> shuffled = other_drug_ids;
        combo_rng.shuffle(shuffled);
        std::size_t made = 0;
        for (std::size_t i = 0; i + 1 < shuffled.size(); i += 2, ++made)
            add_other_combo({shuffled[i], shuffled[i + 1]});
        if (shuffled.size() % 2 == 1)
            add_other_combo({shuffled.back(), shuffled[0]}), ++made;
        require(made <= spec.other_pairs, "benchgen: other_pairs quota below coverage minimum");
        std::size_t guard = 0;
        while (made < spec.other_pairs && ++guard < 100000) {
            auto a = other_drug_ids[combo_rng.index(other_drug_ids.size())];
            auto b = other_drug_ids[combo_rng.index(other_drug_ids.size())];
            if (a == b) continue;
            std::vector<std::string> c{std::min(a, b), std::max(a, b)};
            bool dup = false;
            for (const auto& existing : other_combos) dup = dup || existing == c;
            if (dup) continue;
            add_other_combo(std::move(c));
            ++made;
        }
        auto draw_k = [&](std::size_t k) {
            std::set<std::string> picked;
            while (picked.size() < k)
                picked.insert(other_drug_ids[combo_rng.index(other_drug_ids.size())]);
            return std::vector<std::string>(picked.begin(), picked.end());
        };
        for (std::size_t t = 0; t < spec.other_triples; ++t) {
            for (std::size_t guard2 = 0; guard2 < 1000; ++guard2) {
                auto c = draw_k(3);
                bool dup = false;
                for (const auto& existing : other_combos) dup = dup || existing == c;
                if (!dup) {
                    add_other_combo(std::move(c));
                    break;
                }
            }
        }
        for (std::size_t t = 0; t < spec.other_quads; ++t) {
            for (std::size_t guard2 = 0; guard2 < 1000; ++guard2) {
                auto c = draw_k(4);
                bool dup = false;
                for (const auto& existing : other_combos) dup = dup || existing == c;
                if (!dup) {
                    add_other_combo(std::move(c));
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < other_combos.size(); ++i) {
        ComboRow row;
        row.disease = other_combo_diseases[i % other_combo_diseases.size()];
        row.drugs = other_combos[i];
        if (!other_combo_seen.emplace(row.disease, row.drugs).second) continue;
        combo_rows.push_back(std::move(row));
    }

    // --- disease-gene associations ---
    Rng gene_rng(derive_seed(spec.seed, 6));
    std::set<std::uint32_t> pool_set;
    for (const auto& p : planted) pool_set.insert(p.module_genes.begin(), p.module_genes.end());
    require(pool_set.size() <= spec.gene_pool, "benchgen: gene pool smaller than planted modules");
    while (pool_set.size() < spec.gene_pool)
        pool_set.insert(static_cast<std::uint32_t>(gene_rng.index(n)));
    std::vector<std::uint32_t> gene_pool(pool_set.begin(), pool_set.end());

    std::map<std::string, std::set<std::uint32_t>> disease_genes;
    for (std::size_t d = 0; d < spec.benchmark.size(); ++d)
        disease_genes[spec.benchmark[d].name] = {planted[d].module_genes.begin(),
                                                 planted[d].module_genes.end()};
    std::size_t assoc_total = 0;
    for (const auto& [name, genes] : disease_genes) assoc_total += genes.size();
    require(assoc_total < spec.associations, "benchgen: association quota below module totals");

    const std::size_t n_other_diseases = spec.diseases - spec.benchmark.size();
    const std::size_t remaining = spec.associations - assoc_total;
    for (std::size_t i = 0; i < n_other_diseases; ++i) {
        const auto& name = disease_names[spec.benchmark.size() + i];
        // even split with mild size variation, corrected exactly below
        std::size_t base = remaining / n_other_diseases;
        std::size_t want = std::max<std::size_t>(3, base / 2 + gene_rng.index(std::max<std::size_t>(base, 2)));
        auto& genes = disease_genes[name];
        std::size_t guard = 0;
        while (genes.size() < want && ++guard < want * 20)
            genes.insert(gene_pool[gene_rng.index(gene_pool.size())]);
    }
    // every pool gene must appear somewhere
    {
        std::map<std::uint32_t, std::size_t> gene_uses;
        for (const auto& [name, genes] : disease_genes)
            for (auto g : genes) ++gene_uses[g];
        std::vector<std::string> other_names(disease_names.begin() + spec.benchmark.size(),
                                             disease_names.end());
        for (auto g : gene_pool)
            if (!gene_uses.count(g))
                disease_genes[other_names[gene_rng.index(other_names.size())]].insert(g);
    }
    // exact association total: trim duplicates from the largest non-benchmark
    // sets, or pad with fresh pairs
    {
        auto is_benchmark = [&](const std::string& name) {
            for (const auto& ds : spec.benchmark)
                if (ds.name == name) return true;
            return false;
        };
        std::map<std::uint32_t, std::size_t> gene_uses;
        auto recount = [&] {
            gene_uses.clear();
            assoc_total = 0;
            for (const auto& [name, genes] : disease_genes) {
                assoc_total += genes.size();
                for (auto g : genes) ++gene_uses[g];
            }
        };
        recount();
        std::size_t guard = 0;
        while (assoc_total > spec.associations && ++guard < 10 * spec.associations) {
            // remove one removable association from the largest other-disease set
            std::string victim;
            std::size_t best = 0;
            for (const auto& [name, genes] : disease_genes)
                if (!is_benchmark(name) && genes.size() > best && genes.size() > 3) {
                    best = genes.size();
                    victim = name;
                }
            require(!victim.empty(), "benchgen: cannot trim associations to quota");
            auto& genes = disease_genes[victim];
            bool removed = false;
            for (auto it = genes.begin(); it != genes.end(); ++it) {
                if (gene_uses[*it] >= 2) {
                    --gene_uses[*it];
                    genes.erase(it);
                    --assoc_total;
                    removed = true;
                    break;
                }
            }
            if (!removed) {
                // every gene here is a sole owner; move one association elsewhere
                auto g = *genes.begin();
                genes.erase(genes.begin());
                --assoc_total;
                --gene_uses[g];
                if (gene_uses[g] == 0) {
                    disease_genes[victim].insert(g);  // revert; try another victim next loop
                    ++assoc_total;
                    ++gene_uses[g];
                    break;
                }
            }
        }
        guard = 0;
        while (assoc_total < spec.associations && ++guard < 10 * spec.associations) {
            const auto& name =
                disease_names[spec.benchmark.size() +
                              gene_rng.index(spec.diseases - spec.benchmark.size())];
            auto g = gene_pool[gene_rng.index(gene_pool.size())];
            if (disease_genes[name].insert(g).second) {
                ++assoc_total;
                ++gene_uses[g];
            }
        }
        require(assoc_total == spec.associations, "benchgen: association quota not met (",
                assoc_total, " vs ", spec.associations, ")");
    }

    // --- write files ---
    Rng shuffle_rng(derive_seed(spec.seed, 7));
    GeneratedFiles files;
    namespace io2 = qcomb::io;

    {
        std::vector<std::string> lines;
        lines.reserve(edges.size());
        for (const auto& [u, v] : edges)
            lines.push_back(protein_name(u) + "\t" + protein_name(v));
        shuffle_rng.shuffle(lines);
        std::string body = "protein_a\tprotein_b\n";
        for (const auto& l : lines) body += l + "\n";
        files.interactome = (std::filesystem::path(out_dir) / "interactome.tsv").string();
        io2::write_text_file(files.interactome, body);
    }
    {
        std::vector<std::string> lines;
        for (const auto& [drug, targets] : drug_targets)
            for (auto t : targets) lines.push_back(drug + "\t" + protein_name(t));
        shuffle_rng.shuffle(lines);
        std::string body;
        for (const auto& l : lines) body += l + "\n";
        files.drug_targets = (std::filesystem::path(out_dir) / "drug_targets.tsv").string();
        io2::write_text_file(files.drug_targets, body);
    }
    {
        std::vector<std::string> lines;
        for (const auto& [disease, genes] : disease_genes)
            for (auto g : genes) lines.push_back(disease + "\t" + protein_name(g));
        shuffle_rng.shuffle(lines);
        std::string body;
        for (const auto& l : lines) body += l + "\n";
        files.disease_genes = (std::filesystem::path(out_dir) / "disease_genes.tsv").string();
        io2::write_text_file(files.disease_genes, body);
    }
    {
        std::vector<std::string> lines;
        for (const auto& row : combo_rows) {
            std::string l = row.disease;
            for (const auto& d : row.drugs) l += "\t" + d;
            lines.push_back(l);
        }
        shuffle_rng.shuffle(lines);
        std::string body;
        for (const auto& l : lines) body += l + "\n";
        files.combinations = (std::filesystem::path(out_dir) / "combinations.tsv").string();
        io2::write_text_file(files.combinations, body);
    }
    {
        std::size_t two = 0, three = 0, more = 0;
        std::set<std::string> combo_drugs, combo_diseases;
        for (const auto& row : combo_rows) {
            (row.drugs.size() == 2 ? two : row.drugs.size() == 3 ? three : more) += 1;
            combo_diseases.insert(row.disease);
            for (const auto& d : row.drugs) combo_drugs.insert(d);
        }
        nlohmann::json bench = nlohmann::json::array();
        for (std::size_t d = 0; d < spec.benchmark.size(); ++d)
            bench.push_back({{"disease", spec.benchmark[d].name},
                             {"drugs", bench_drug_ids[d]},
                             {"combinations", planted[d].combos.size()},
                             {"module_size", spec.benchmark[d].module_size}});
        nlohmann::json manifest{{"kind", "benchmark_manifest"},
                                {"seed", spec.seed},
                                {"nodes", spec.nodes},
                                {"edges", spec.edges},
                                {"diseases", spec.diseases},
                                {"associations", spec.associations},
                                {"gene_pool", spec.gene_pool},
                                {"drugs", spec.drugs},
                                {"combinations", combo_rows.size()},
                                {"combinations_two_drug", two},
                                {"combinations_three_drug", three},
                                {"combinations_larger", more},
                                {"combination_drugs", combo_drugs.size()},
                                {"combination_diseases", combo_diseases.size()},
                                {"benchmark", bench}};
        files.manifest = (std::filesystem::path(out_dir) / "manifest.json").string();
        io2::write_json_file(files.manifest, manifest);
    }
    return files;
}

}  // namespace qcomb::benchgen
