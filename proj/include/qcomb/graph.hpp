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
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/ingest.hpp"

namespace qcomb::graph {

using NodeId = std::uint32_t;

/// A named set of interactome nodes (drug-target set or disease module),
/// held as sorted dense indices.
struct NodeSet {
    std::string name;
    std::vector<NodeId> members;  // sorted, unique

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
};

constexpr std::int32_t kUnreachable = -1;

/// Hop distances from a source set; kUnreachable marks nodes in other components.
struct DistanceField {
    std::string source_name;
    std::vector<std::int32_t> dist;

    bool reachable(NodeId v) const { return dist[v] >= 0; }
};

/// Immutable undirected simple graph in CSR form. Safe to share across
/// threads once built.
class Interactome {
public:
    /// Deduplicate edges, drop self-loops, optionally restrict to the largest
    /// connected component.
    static Interactome build(const ingest::RawEdgeList& edges, bool restrict_to_lcc = true) {
        require(!edges.rows.empty(), "graph build: empty edge list");
        Interactome g;
        std::vector<std::pair<NodeId, NodeId>> pairs;
        pairs.reserve(edges.rows.size());
        std::size_t self_loops = 0;
        for (const auto& [a, b] : edges.rows) {
            NodeId u = g.intern(a);
            NodeId v = g.intern(b);
            if (u == v) {
                ++self_loops;
                continue;
            }
            pairs.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        require(!pairs.empty(), "graph build: zero edges survive dedup/self-loop removal");
        if (self_loops > 0) log::info("graph build: dropped ", self_loops, " self-loop rows");
        g.build_csr(pairs);
        if (restrict_to_lcc) g = g.largest_component();
        return g;
    }

    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    std::uint32_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    const std::string& name(NodeId v) const { return names_[v]; }

    bool contains(const std::string& id) const { return index_.count(id) > 0; }

    std::optional<NodeId> find(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Dense indices for a set of identifiers; errors on any id missing
    /// from the graph.
    NodeSet node_set(const std::string& name, const std::set<std::string>& ids) const {
        NodeSet s;
        s.name = name;
        s.members.reserve(ids.size());
        for (const auto& id : ids) {
            auto idx = find(id);
            require(idx.has_value(), "node '", id, "' (in set '", name, "') is not in the graph");
            s.members.push_back(*idx);
        }
        std::sort(s.members.begin(), s.members.end());
        s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
        return s;
    }

    std::unordered_set<std::string> node_names() const {
        std::unordered_set<std::string> out;
        out.reserve(names_.size());
        for (const auto& n : names_) out.insert(n);
        return out;
    }

    const std::uint32_t* neighbors_begin(NodeId v) const { return neighbors_.data() + offsets_[v]; }
    const std::uint32_t* neighbors_end(NodeId v) const { return neighbors_.data() + offsets_[v + 1]; }

    std::size_t component_count() const { return component_count_; }

    /// Degree multiset, primarily for order-independence checks.
    std::vector<std::uint32_t> degree_multiset() const {
        std::vector<std::uint32_t> ds(node_count());
        for (NodeId v = 0; v < node_count(); ++v) ds[v] = degree(v);
        std::sort(ds.begin(), ds.end());
        return ds;
    }

private:
    NodeId intern(const std::string& id) {
        auto it = index_.find(id);
        if (it != index_.end()) return it->second;
        NodeId v = static_cast<NodeId>(names_.size());
        index_.emplace(id, v);
        names_.push_back(id);
        return v;
    }

    void build_csr(const std::vector<std::pair<NodeId, NodeId>>& pairs) {
        const std::size_t n = names_.size();
        offsets_.assign(n + 1, 0);
        for (const auto& [u, v] : pairs) {
            ++offsets_[u + 1];
            ++offsets_[v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
        neighbors_.resize(pairs.size() * 2);
        std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const auto& [u, v] : pairs) {
            neighbors_[cursor[u]++] = v;
            neighbors_[cursor[v]++] = u;
        }
        for (std::size_t v = 0; v < n; ++v)
            std::sort(neighbors_.begin() + offsets_[v], neighbors_.begin() + offsets_[v + 1]);
        component_count_ = count_components();
    }

    std::size_t count_components() {
        const std::size_t n = names_.size();
        component_of_.assign(n, UINT32_MAX);
        std::size_t comps = 0;
        std::vector<NodeId> queue;
        for (NodeId start = 0; start < n; ++start) {
            if (component_of_[start] != UINT32_MAX) continue;
            queue.clear();
            queue.push_back(start);
            component_of_[start] = static_cast<std::uint32_t>(comps);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                NodeId u = queue[head];
                for (auto it = neighbors_begin(u); it != neighbors_end(u); ++it) {
                    if (component_of_[*it] == UINT32_MAX) {
                        component_of_[*it] = static_cast<std::uint32_t>(comps);
                        queue.push_back(*it);
                    }
                }
            }
            ++comps;
        }
        return comps;
    }

    Interactome largest_component() const {
        if (component_count_ <= 1) return *this;
        std::vector<std::size_t> sizes(component_count_, 0);
        for (auto c : component_of_) ++sizes[c];
        const std::uint32_t keep = static_cast<std::uint32_t>(
            std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        log::info("graph build: restricting to largest component (", sizes[keep], " of ",
                  names_.size(), " nodes)");
        ingest::RawEdgeList kept;
        for (NodeId u = 0; u < names_.size(); ++u) {
            if (component_of_[u] != keep) continue;
            for (auto it = neighbors_begin(u); it != neighbors_end(u); ++it)
                if (u < *it) kept.rows.emplace_back(names_[u], names_[*it]);
        }
        return build(kept, /*restrict_to_lcc=*/false);
    }

    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::string> names_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<std::uint32_t> component_of_;
    std::size_t component_count_ = 0;
};

/// Reusable BFS scratch so hot loops do not reallocate. One per thread.
struct BfsScratch {
    std::vector<std::int32_t> dist;
    std::vector<NodeId> queue;
};

/// dist(v) = min over sources of hop distance; kUnreachable elsewhere.
inline void multi_source_bfs_into(const Interactome& g, const std::vector<NodeId>& sources,
                                  BfsScratch& scratch) {
    const std::size_t n = g.node_count();
    scratch.dist.assign(n, kUnreachable);
    scratch.queue.clear();
    for (NodeId s : sources) {
        require(s < n, "BFS source index out of range");
        if (scratch.dist[s] == kUnreachable) {
            scratch.dist[s] = 0;
            scratch.queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < scratch.queue.size(); ++head) {
        NodeId u = scratch.queue[head];
        const std::int32_t du = scratch.dist[u];
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it) {
            if (scratch.dist[*it] == kUnreachable) {
                scratch.dist[*it] = du + 1;
                scratch.queue.push_back(*it);
            }
        }
    }
}

inline DistanceField multi_source_bfs(const Interactome& g, const NodeSet& sources) {
    require(!sources.empty(), "BFS: source set '", sources.name, "' is empty");
    for (NodeId s : sources.members)
        require(s < g.node_count(), "BFS: source node index ", s, " not in graph");
    BfsScratch scratch;
    multi_source_bfs_into(g, sources.members, scratch);
    DistanceField out;
    out.source_name = sources.name;
    out.dist = std::move(scratch.dist);
    return out;
}

/// BFS from `source` that stops as soon as a member of `targets` other than
/// the source is reached; returns that hop distance or kUnreachable.
inline std::int32_t nearest_other_distance(const Interactome& g, NodeId source,
                                           const std::vector<bool>& is_target,
                                           BfsScratch& scratch) {
    const std::size_t n = g.node_count();
    scratch.dist.assign(n, kUnreachable);
    scratch.queue.clear();
    scratch.dist[source] = 0;
    scratch.queue.push_back(source);
    for (std::size_t head = 0; head < scratch.queue.size(); ++head) {
        NodeId u = scratch.queue[head];
        const std::int32_t du = scratch.dist[u];
        if (u != source && is_target[u]) return du;
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it) {
            if (scratch.dist[*it] == kUnreachable) {
                scratch.dist[*it] = du + 1;
                scratch.queue.push_back(*it);
            }
        }
    }
    return kUnreachable;
}

}  // namespace qcomb::graph
