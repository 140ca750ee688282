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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcomb/calibrate.hpp"
#include "qcomb/common.hpp"
#include "qcomb/predict.hpp"
#include "qcomb/proximity.hpp"
#include "qcomb/qubo.hpp"
#include "qcomb/spectrum.hpp"
#include "qcomb/sqa.hpp"

// JSON and CSV artifact formats. nlohmann::json keeps object keys sorted and
// renders doubles with shortest round-trip notation, so identical inputs
// always produce byte-identical files.

namespace qcomb::io {

using nlohmann::json;

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open for writing: ", path);
    out << content;
    require(out.good(), "write failed: ", path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open file: ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline json load_json_file(const std::string& path) {
    json j = json::parse(read_text_file(path));
    return j;
}

/// FNV-1a of a string; used for config/cache fingerprints.
inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string file_content_hash(const std::string& path) {
    return fnv1a_hex(read_text_file(path));
}

// ---- null-model config ----

inline json to_json(const proximity::NullModelConfig& cfg) {
    return json{{"num_samples", cfg.num_samples},
                {"degree_bin_min_size", cfg.degree_bin_min_size},
                {"master_seed", cfg.master_seed},
                {"randomize_both", cfg.randomize_both}};
}

inline proximity::NullModelConfig null_config_from_json(const json& j) {
    proximity::NullModelConfig cfg;
    cfg.num_samples = j.at("num_samples").get<std::uint32_t>();
    cfg.degree_bin_min_size = j.at("degree_bin_min_size").get<std::uint32_t>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.randomize_both = j.at("randomize_both").get<bool>();
    return cfg;
}

// ---- proximity table ----

inline json to_json(const proximity::ProximityTable& t, const std::string& config_hash = "") {
    json j{{"kind", "proximity_table"},
           {"disease", t.disease_id},
           {"drugs", t.drugs},
           {"z", t.z},
           {"s", t.s},
           {"null_model", to_json(t.config)}};
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    return j;
}

inline proximity::ProximityTable proximity_table_from_json(const json& j) {
    require(j.value("kind", "") == std::string("proximity_table"),
            "not a proximity_table document");
    proximity::ProximityTable t;
    t.disease_id = j.at("disease").get<std::string>();
    t.drugs = j.at("drugs").get<std::vector<std::string>>();
    t.z = j.at("z").get<std::vector<double>>();
    t.s = j.at("s").get<std::vector<std::vector<double>>>();
    t.config = null_config_from_json(j.at("null_model"));
    require(t.z.size() == t.drugs.size(), "proximity table: z length mismatch");
    require(t.s.size() == t.drugs.size(), "proximity table: s row count mismatch");
    for (const auto& row : t.s)
        require(row.size() == t.drugs.size(), "proximity table: s column count mismatch");
    return t;
}

// ---- qubo instance ----

inline json to_json(const qubo::QuboInstance& q) {
    json quad = json::array();
    for (const auto& [key, v] : q.quadratic) quad.push_back(json::array({key.first, key.second, v}));
    return json{{"kind", "qubo"},     {"n", q.n},          {"labels", q.labels},
                {"linear", q.linear}, {"quadratic", quad}, {"offset", q.offset}};
}

inline qubo::QuboInstance qubo_from_json(const json& j) {
    require(j.value("kind", "") == std::string("qubo"), "not a qubo document");
    qubo::QuboInstance q;
    q.n = j.at("n").get<std::size_t>();
    q.labels = j.at("labels").get<std::vector<std::string>>();
    q.linear = j.at("linear").get<std::vector<double>>();
    q.offset = j.at("offset").get<double>();
    for (const auto& triplet : j.at("quadratic")) {
        require(triplet.is_array() && triplet.size() == 3, "qubo quadratic entry must be [i,j,v]");
        q.add_quadratic(triplet[0].get<std::uint32_t>(), triplet[1].get<std::uint32_t>(),
                        triplet[2].get<double>());
    }
    q.validate();
    return q;
}

// ---- sample set ----

inline json to_json(const sqa::SampleSet& s, const std::vector<std::string>& labels) {
    json records = json::array();
    for (const auto& [mask, rec] : s.records) {
        json r{{"bitstring", qubo::bitstring(mask, labels.size())},
               {"count", rec.count},
               {"energy", rec.energy}};
        json names = json::array();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if ((mask >> i) & 1u) names.push_back(labels[i]);
        r["drugs"] = names;
        records.push_back(r);
    }
    return json{{"kind", "sample_set"},
                {"runs", s.runs},
                {"instance_fingerprint", s.instance_fingerprint},
                {"records", records}};
}

// ---- calibration ----

inline json to_json(const calibrate::CalibrationResult& r) {
    return json{{"kind", "calibration"},
                {"grid",
                 {{"gamma", {{"lo", r.grid.gamma.lo}, {"hi", r.grid.gamma.hi}, {"steps", r.grid.gamma.steps}}},
                  {"beta", {{"lo", r.grid.beta.lo}, {"hi", r.grid.beta.hi}, {"steps", r.grid.beta.steps}}}}},
                {"best", {{"gamma", r.best_gamma}, {"beta", r.best_beta}, {"ap", r.best_ap}}},
                {"k1", r.k1},
                {"k2", r.k2},
                {"lambda_rule", r.lambda_rule},
                {"proximity_seed", r.proximity_seed},
                {"positives", r.positives}};
}

// ---- CSV emitters ----

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string ap_surface_csv(const calibrate::CalibrationResult& r) {
    std::string out = "gamma,beta,ap\n";
    for (std::uint32_t gi = 0; gi < r.grid.gamma.steps; ++gi)
        for (std::uint32_t bi = 0; bi < r.grid.beta.steps; ++bi)
            out += text::format_double(r.grid.gamma.value(gi)) + "," +
                   text::format_double(r.grid.beta.value(bi)) + "," +
                   text::format_double(r.ap_surface[gi][bi]) + "\n";
    return out;
}

inline std::string spectrum_csv(const spectrum::RankedSpectrum& spec,
                                const std::vector<std::string>& labels, std::size_t bottom_k) {
    const std::size_t limit = (bottom_k == 0) ? spec.size() : std::min(bottom_k, spec.size());
    std::string out = "rank,bitstring,drugs,energy,label\n";
    for (std::size_t i = 0; i < limit; ++i) {
        const auto& e = spec.entries[i];
        std::string names;
        for (std::size_t v = 0; v < labels.size(); ++v) {
            if ((e.mask >> v) & 1u) {
                if (!names.empty()) names += "|";
                names += labels[v];
            }
        }
        out += std::to_string(i + 1) + "," + qubo::bitstring(e.mask, labels.size()) + "," +
               csv_field(names) + "," + text::format_double(e.energy) + "," +
               std::to_string(int(e.label)) + "\n";
    }
    return out;
}

inline std::string pr_curve_csv(const spectrum::PrCurve& curve) {
    std::string out = "rank,recall,precision\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i)
        out += std::to_string(i + 1) + "," + text::format_double(curve.points[i].recall) + "," +
               text::format_double(curve.points[i].precision) + "\n";
    return out;
}

/// Frequency-vs-energy table over the sampled configurations, ranked.
inline std::string sample_csv(const predict::PredictionList& list) {
    std::string out = "rank,energy,frequency,validated,drugs\n";
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& e = list.entries[i];
        std::string names;
        for (const auto& d : e.drugs) {
            if (!names.empty()) names += "|";
            names += d;
        }
        out += std::to_string(i + 1) + "," + text::format_double(e.energy) + "," +
               text::format_double(e.frequency) + "," + (e.is_validated ? "1" : "0") + "," +
               csv_field(names) + "\n";
    }
    return out;
}

inline json to_json(const predict::PredictionList& list, bool novel_only) {
    json entries = json::array();
    std::size_t rank = 0;
    for (const auto& e : list.entries) {
        if (novel_only && e.is_validated) continue;
        ++rank;
        entries.push_back(json{{"rank", rank},
                               {"drugs", e.drugs},
                               {"frequency", e.frequency},
                               {"energy", e.energy},
                               {"validated", e.is_validated}});
    }
    return json{{"kind", novel_only ? "predictions_novel" : "predictions_all"},
                {"runs", list.runs},
                {"instance_fingerprint", list.instance_fingerprint},
                {"entries", entries}};
}

}  // namespace qcomb::io
