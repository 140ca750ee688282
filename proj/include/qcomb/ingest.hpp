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

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/text.hpp"

// Loaders for the four plain-text inputs: interactome edge list,
// drug->target associations, disease->gene associations, and the validated
// drug-combination benchmark. TSV or CSV, auto-detected per file; an optional
// header row is recognised when the data columns are numeric IDs but the
// first row is not. Identifiers are trimmed and gene/protein symbols
// uppercased; beyond that they are opaque strings.

namespace qcomb::ingest {

struct RawEdgeList {
    std::vector<std::pair<std::string, std::string>> rows;
};

struct DrugTargetMap {
    std::map<std::string, std::set<std::string>> entries;
};

struct DiseaseGeneMap {
    std::map<std::string, std::set<std::string>> entries;
};

struct Combination {
    std::string disease_id;
    std::vector<std::string> drugs;  // sorted, unique, size >= 2
};

struct ValidatedCombinations {
    std::vector<Combination> entries;

    std::vector<Combination> for_disease(const std::string& disease_id) const {
        std::vector<Combination> out;
        for (const auto& c : entries)
            if (c.disease_id == disease_id) out.push_back(c);
        return out;
    }
};

namespace detail {

struct ParsedFile {
    std::vector<std::vector<std::string>> rows;  // trimmed fields, blank lines skipped
    std::vector<std::size_t> line_numbers;       // 1-based, for error reporting
    char delimiter = '\t';
    bool had_header = false;
};

inline bool looks_like_header(const std::vector<std::vector<std::string>>& rows) {
    // Header heuristic: data columns are numeric IDs but the first row is not.
    if (rows.size() < 2) return false;
    auto all_int = [](const std::vector<std::string>& row) {
        for (const auto& f : row)
            if (!text::is_integer(f)) return false;
        return true;
    };
    if (all_int(rows[0])) return false;
    const std::size_t probe = std::min<std::size_t>(rows.size(), 20);
    for (std::size_t i = 1; i < probe; ++i)
        if (!all_int(rows[i])) return false;
    return true;
}

inline ParsedFile parse_delimited(const std::string& path, std::size_t min_columns,
                                  std::size_t max_columns) {
    std::ifstream in(path);
    require(in.good(), "cannot open file: ", path);
    ParsedFile out;
    std::string line;
    std::size_t lineno = 0;
    bool delim_known = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        if (!delim_known) {
            out.delimiter = text::detect_delimiter(line);
            delim_known = true;
        }
        auto fields = text::split(line, out.delimiter);
        for (auto& f : fields) f = text::trim(f);
        while (!fields.empty() && fields.back().empty()) fields.pop_back();
        if (fields.size() < min_columns || fields.size() > max_columns)
            fail("malformed row at ", path, ":", lineno, ": expected ", min_columns,
                 (max_columns == min_columns ? "" : "+"), " columns, got ", fields.size());
        for (const auto& f : fields)
            require(!f.empty(), "malformed row at ", path, ":", lineno, ": empty identifier");
        out.rows.push_back(std::move(fields));
        out.line_numbers.push_back(lineno);
    }
    if (looks_like_header(out.rows)) {
        out.rows.erase(out.rows.begin());
        out.line_numbers.erase(out.line_numbers.begin());
        out.had_header = true;
    }
    return out;
}

inline std::string norm_symbol(const std::string& s) { return text::upper(s); }

}  // namespace detail

/// Parse the interactome edge list. Duplicates and self-loops are kept;
/// the graph builder deduplicates.
inline RawEdgeList load_interactome(const std::string& path) {
    auto parsed = detail::parse_delimited(path, 2, 2);
    RawEdgeList out;
    out.rows.reserve(parsed.rows.size());
    for (auto& row : parsed.rows)
        out.rows.emplace_back(detail::norm_symbol(row[0]), detail::norm_symbol(row[1]));
    return out;
}

inline DrugTargetMap load_drug_targets(const std::string& path) {
    auto parsed = detail::parse_delimited(path, 2, 2);
    require(!parsed.rows.empty(), "drug-target file is empty: ", path);
    DrugTargetMap out;
    for (auto& row : parsed.rows) out.entries[row[0]].insert(detail::norm_symbol(row[1]));
    return out;
}

inline DiseaseGeneMap load_disease_genes(const std::string& path) {
    auto parsed = detail::parse_delimited(path, 2, 2);
    require(!parsed.rows.empty(), "disease-gene file is empty: ", path);
    DiseaseGeneMap out;
    for (auto& row : parsed.rows) out.entries[row[0]].insert(detail::norm_symbol(row[1]));
    return out;
}

/// Parse the validated-combination benchmark: disease_id followed by >=2
/// drug ids per row. Rows with fewer drugs are rejected with a warning;
/// duplicate combinations are counted once per disease.
inline ValidatedCombinations load_validated_combinations(const std::string& path) {
    auto parsed = detail::parse_delimited(path, 2, 64);
    require(!parsed.rows.empty(), "combination file is empty: ", path);
    std::set<std::pair<std::string, std::vector<std::string>>> seen;
    ValidatedCombinations out;
    for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
        const auto& row = parsed.rows[r];
        std::set<std::string> drugs(row.begin() + 1, row.end());
        if (drugs.size() < 2) {
            log::warn("combination with <2 drugs rejected at ", path, ":",
                      parsed.line_numbers[r]);
            continue;
        }
        Combination c;
        c.disease_id = row[0];
        c.drugs.assign(drugs.begin(), drugs.end());
        if (seen.emplace(c.disease_id, c.drugs).second) out.entries.push_back(std::move(c));
    }
    return out;
}

struct FilterStats {
    std::size_t ids_dropped = 0;   // member proteins/genes absent from the node set
    std::size_t sets_dropped = 0;  // entries left empty after filtering
};

/// Drop member ids absent from `nodes`; drop entries that become empty.
template <typename MapT>
inline FilterStats filter_to_nodes(MapT& m, const std::unordered_set<std::string>& nodes,
                                   const char* what) {
    FilterStats stats;
    for (auto it = m.entries.begin(); it != m.entries.end();) {
        auto& members = it->second;
        for (auto mit = members.begin(); mit != members.end();) {
            if (!nodes.count(*mit)) {
                mit = members.erase(mit);
                ++stats.ids_dropped;
            } else {
                ++mit;
            }
        }
        if (members.empty()) {
            log::warn(what, " '", it->first, "' has no members left after interactome filtering; excluded");
            it = m.entries.erase(it);
            ++stats.sets_dropped;
        } else {
            ++it;
        }
    }
    if (stats.ids_dropped > 0)
        log::info(what, " filtering dropped ", stats.ids_dropped,
                  " identifiers absent from the interactome");
    return stats;
}

/// Keep only combinations whose drugs all survive in `universe`.
inline std::size_t filter_combinations(ValidatedCombinations& c, const DrugTargetMap& universe) {
    std::size_t dropped = 0;
    std::vector<Combination> kept;
    for (auto& combo : c.entries) {
        bool ok = true;
        for (const auto& d : combo.drugs)
            if (!universe.entries.count(d)) { ok = false; break; }
        if (ok) {
            kept.push_back(std::move(combo));
        } else {
            ++dropped;
        }
    }
    if (dropped > 0)
        log::warn(dropped, " validated combinations dropped: member drug missing from drug-target map");
    c.entries = std::move(kept);
    return dropped;
}

}  // namespace qcomb::ingest
