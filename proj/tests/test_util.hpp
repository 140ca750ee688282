#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qcomb/graph.hpp"
#include "qcomb/ingest.hpp"
#include "qcomb/rng.hpp"

// Shared helpers for the unit suite: scratch directories, file fixtures,
// random graphs, and an all-pairs shortest-path oracle independent of the
// library's BFS.

namespace testutil {

namespace fs = std::filesystem;

inline fs::path scratch_dir(const std::string& tag) {
    static const fs::path root = [] {
        auto p = fs::temp_directory_path() /
                 ("qcomb_tests_" + std::to_string(static_cast<unsigned>(::getpid())));
        fs::create_directories(p);
        return p;
    }();
    auto dir = root / tag;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline std::string write_file(const fs::path& dir, const std::string& name,
                              const std::string& content) {
    auto path = dir / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

/// Random simple connected-ish graph as an edge list over nodes "N0".."N{n-1}".
/// Guarantees at least a spanning path so most nodes are reachable.
inline qcomb::ingest::RawEdgeList random_graph(std::size_t n, std::size_t extra_edges,
                                               std::uint64_t seed, bool spanning_path = true) {
    qcomb::Rng rng(seed);
    qcomb::ingest::RawEdgeList edges;
    auto name = [](std::size_t i) { return "N" + std::to_string(i); };
    if (spanning_path)
        for (std::size_t i = 0; i + 1 < n; ++i) edges.rows.emplace_back(name(i), name(i + 1));
    for (std::size_t e = 0; e < extra_edges; ++e) {
        auto u = rng.index(n);
        auto v = rng.index(n);
        if (u == v) continue;
        edges.rows.emplace_back(name(u), name(v));
    }
    if (edges.rows.empty()) edges.rows.emplace_back(name(0), name(1 % n));
    return edges;
}

constexpr int kInf = 1 << 28;

/// Floyd-Warshall all-pairs distances; the independent oracle for every
/// distance-based metric.
inline std::vector<std::vector<int>> all_pairs_oracle(const qcomb::graph::Interactome& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (std::size_t u = 0; u < n; ++u)
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it) {
            d[u][*it] = 1;
            d[*it][u] = 1;
        }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Oracle closest-distance d(X,Y) from the all-pairs matrix, excluding
/// unreachable targets.
inline double oracle_closest_distance(const std::vector<std::vector<int>>& d,
                                      const std::vector<std::uint32_t>& X,
                                      const std::vector<std::uint32_t>& Y) {
    double sum = 0.0;
    std::size_t used = 0;
    for (auto y : Y) {
        int best = kInf;
        for (auto x : X) best = std::min(best, d[x][y]);
        if (best < kInf) {
            sum += best;
            ++used;
        }
    }
    return used ? sum / static_cast<double>(used) : -1.0;
}

/// Oracle separation with the same nearest-distinct-member convention.
inline double oracle_separation(const std::vector<std::vector<int>>& d,
                                const std::vector<std::uint32_t>& A,
                                const std::vector<std::uint32_t>& B) {
    auto nearest_distinct = [&](std::uint32_t v, const std::vector<std::uint32_t>& S) {
        int best = kInf;
        for (auto s : S)
            if (s != v) best = std::min(best, d[v][s]);
        return best;
    };
    auto within_mean = [&](const std::vector<std::uint32_t>& S) {
        if (S.size() < 2) return 0.0;
        double sum = 0.0;
        std::size_t used = 0;
        for (auto v : S) {
            int t = nearest_distinct(v, S);
            if (t < kInf) {
                sum += t;
                ++used;
            }
        }
        return used ? sum / static_cast<double>(used) : 0.0;
    };
    auto contains = [](const std::vector<std::uint32_t>& S, std::uint32_t v) {
        for (auto s : S)
            if (s == v) return true;
        return false;
    };
    double cross = 0.0;
    std::size_t used = 0;
    auto cross_term = [&](std::uint32_t v, const std::vector<std::uint32_t>& other) {
        int t;
        if (contains(other, v))
            t = (other.size() == 1) ? 0 : nearest_distinct(v, other);
        else
            t = nearest_distinct(v, other);
        if (t < kInf) {
            cross += t;
            ++used;
        }
    };
    for (auto a : A) cross_term(a, B);
    for (auto b : B) cross_term(b, A);
    if (used == 0) return -1e300;
    return cross / static_cast<double>(used) - 0.5 * (within_mean(A) + within_mean(B));
}

/// Random node subset of size k (distinct, sorted).
inline std::vector<std::uint32_t> random_subset(std::size_t n, std::size_t k, qcomb::Rng& rng) {
    std::vector<std::uint32_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(all);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

inline qcomb::graph::NodeSet make_set(const std::string& name, std::vector<std::uint32_t> members) {
    qcomb::graph::NodeSet s;
    s.name = name;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    s.members = std::move(members);
    return s;
}

}  // namespace testutil
