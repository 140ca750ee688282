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
#include <string>
#include <unordered_set>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/ingest.hpp"
#include "qcomb/parallel.hpp"
#include "qcomb/qubo.hpp"

// Exact enumeration of small instances and ranking metrics over the result.
// Entries sort by energy, ties broken by lexicographic bitstring order, so
// every downstream metric is deterministic.

namespace qcomb::spectrum {

constexpr std::size_t kMaxEnumerationBits = 25;

struct Entry {
    double energy;
    std::uint32_t mask;
    std::uint8_t label;  // 1 iff the selected drug set is a validated combination
};

struct RankedSpectrum {
    std::size_t n = 0;
    std::vector<Entry> entries;  // size 2^n, ascending energy
    std::size_t positives = 0;

    std::size_t size() const { return entries.size(); }
};

/// Masks of the validated combinations representable in this variable
/// labelling (combinations containing foreign drugs cannot appear and are
/// skipped).
inline std::unordered_set<std::uint64_t> validated_masks(
    const std::vector<std::string>& labels, const std::vector<ingest::Combination>& combos) {
    std::unordered_set<std::uint64_t> out;
    for (const auto& combo : combos) {
        std::uint64_t mask = 0;
        bool representable = true;
        for (const auto& drug : combo.drugs) {
            auto it = std::find(labels.begin(), labels.end(), drug);
            if (it == labels.end()) {
                representable = false;
                break;
            }
            mask |= 1ull << (it - labels.begin());
        }
        if (representable) out.insert(mask);
    }
    return out;
}

/// Enumerate all 2^n configurations, exactly. Guarded at n <= 25; larger
/// instances belong to the sqa sampler.
inline RankedSpectrum enumerate(const qubo::QuboInstance& q,
                                const std::unordered_set<std::uint64_t>& validated) {
    q.validate();
    require(q.n >= 1, "enumerate: empty instance");
    require(q.n <= kMaxEnumerationBits, "enumerate: 2^", q.n,
            " configurations exceed the exhaustive limit (n <= ", kMaxEnumerationBits,
            "); use the sqa sampler instead");

    // dense coefficient rows for O(popcount^2) per-mask evaluation
    const std::size_t n = q.n;
    std::vector<double> quad(n * n, 0.0);
    for (const auto& [key, v] : q.quadratic) quad[key.first * n + key.second] = v;

    RankedSpectrum out;
    out.n = n;
    const std::size_t total = std::size_t{1} << n;
    out.entries.resize(total);
    const std::size_t block = 1 << 12;
    const std::size_t blocks = (total + block - 1) / block;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(total, lo + block);
        std::uint32_t bits[kMaxEnumerationBits];
        for (std::size_t m = lo; m < hi; ++m) {
            int k = 0;
            for (std::uint32_t i = 0; i < n; ++i)
                if ((m >> i) & 1u) bits[k++] = i;
            double e = q.offset;
            for (int a = 0; a < k; ++a) {
                e += q.linear[bits[a]];
                const double* row = quad.data() + bits[a] * n;
                for (int bidx = a + 1; bidx < k; ++bidx) e += row[bits[bidx]];
            }
            out.entries[m] = Entry{e, static_cast<std::uint32_t>(m),
                                   static_cast<std::uint8_t>(validated.count(m) ? 1 : 0)};
        }
    });

    std::sort(out.entries.begin(), out.entries.end(), [n](const Entry& a, const Entry& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return qubo::lex_key(a.mask, n) < qubo::lex_key(b.mask, n);
    });
    for (const auto& e : out.entries) out.positives += e.label;
    return out;
}

/// Fraction of the top-k entries that are validated.
inline double precision_at_k(const RankedSpectrum& spec, std::size_t k) {
    require(k >= 1 && k <= spec.size(), "precision_at_k: k = ", k, " outside [1, ", spec.size(), "]");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += spec.entries[i].label;
    return static_cast<double>(hits) / static_cast<double>(k);
}

/// Mean of P(k) over the ranks holding validated combinations.
inline double average_precision(const RankedSpectrum& spec) {
    require(spec.positives > 0, "undefined AP: spectrum has no positive labels");
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec.entries[i].label) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(spec.positives);
}

struct PrPoint {
    double recall;
    double precision;
};

struct PrCurve {
    std::vector<PrPoint> points;  // one per rank

    /// Area under the curve as sum of precision * delta-recall; matches the
    /// average-precision sum by construction.
    double area() const {
        double a = 0.0;
        double prev_recall = 0.0;
        for (const auto& p : points) {
            a += p.precision * (p.recall - prev_recall);
            prev_recall = p.recall;
        }
        return a;
    }
};

inline PrCurve pr_curve(const RankedSpectrum& spec) {
    require(spec.positives > 0, "undefined PR curve: spectrum has no positive labels");
    PrCurve out;
    out.points.reserve(spec.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        hits += spec.entries[i].label;
        out.points.push_back(PrPoint{
            static_cast<double>(hits) / static_cast<double>(spec.positives),
            static_cast<double>(hits) / static_cast<double>(i + 1),
        });
    }
    return out;
}

}  // namespace qcomb::spectrum
