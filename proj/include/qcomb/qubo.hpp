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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/proximity.hpp"

// Binary quadratic model over drug-inclusion variables:
//
//   H = sum_i (z_i + beta) b_i  -  gamma * sum_{i<j} s_ij b_i b_j
//
// plus an optional cardinality-window penalty
//
//   lambda * (sum_i b_i - k1) * (sum_i b_i - k2),   |k1 - k2| <= 1,
//
// which vanishes exactly on selections of k1 or k2 drugs. The equivalent
// Ising form uses b_i = (1 + sigma_i) / 2 with spins in {-1, +1}.

namespace qcomb::qubo {

/// One selection of drugs; bits[i] = 1 means variable i is included.
using Configuration = std::vector<std::uint8_t>;

inline Configuration config_from_mask(std::uint64_t mask, std::size_t n) {
    Configuration c(n, 0);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1u;
    return c;
}

inline std::uint64_t mask_from_config(const Configuration& c) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) m |= (1ull << i);
    return m;
}

inline std::string bitstring(std::uint64_t mask, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) s[i] = '1';
    return s;
}

/// Key that orders masks by their bitstring (variable 0 most significant).
inline std::uint64_t lex_key(std::uint64_t mask, std::size_t n) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) k |= (1ull << (n - 1 - i));
    return k;
}

struct QuboInstance {
    std::size_t n = 0;
    std::vector<double> linear;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> quadratic;  // strictly i < j
    double offset = 0.0;
    std::vector<std::string> labels;  // drug id per variable

    /// Fold a (possibly symmetric or lower-triangular) coefficient into the
    /// upper-triangular store by summation.
    void add_quadratic(std::uint32_t i, std::uint32_t j, double value) {
        require(i != j, "quadratic term on the diagonal (", i, ",", j, ")");
        require(i < n && j < n, "quadratic index out of range");
        if (value == 0.0) return;
        auto key = std::make_pair(std::min(i, j), std::max(i, j));
        auto [it, inserted] = quadratic.emplace(key, value);
        if (!inserted) {
            it->second += value;
            if (it->second == 0.0) quadratic.erase(it);
        }
    }

    void validate() const {
        require(linear.size() == n, "linear size mismatch");
        require(labels.size() == n, "labels size mismatch");
        for (double v : linear) require(std::isfinite(v), "non-finite linear coefficient");
        require(std::isfinite(offset), "non-finite offset");
        for (const auto& [key, v] : quadratic) {
            require(key.first < key.second && key.second < n, "quadratic key not upper-triangular");
            require(std::isfinite(v), "non-finite quadratic coefficient");
        }
    }
};

struct IsingInstance {
    std::size_t n = 0;
    std::vector<double> h;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> j;  // strictly i < j
    double offset = 0.0;
};

/// Assemble the problem Hamiltonian from a proximity table:
/// linear[i] = z_i + beta, quadratic[(i,j)] = -gamma * s_ij.
inline QuboInstance build_hamiltonian(const proximity::ProximityTable& table, double gamma,
                                      double beta) {
    require(std::isfinite(gamma) && std::isfinite(beta), "gamma/beta must be finite");
    const std::size_t n = table.drug_count();
    require(n >= 1, "proximity table has no drugs");
    QuboInstance q;
    q.n = n;
    q.labels = table.drugs;
    q.linear.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(std::isfinite(table.z[i]), "non-finite z-score for '", table.drugs[i], "'");
        q.linear[i] = table.z[i] + beta;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            require(std::isfinite(table.s[i][j]), "non-finite separation for pair (", i, ",", j, ")");
            q.add_quadratic(i, j, -gamma * table.s[i][j]);
        }
    }
    q.validate();
    return q;
}

/// Penalty vanishing exactly on selections of k1 or k2 drugs. Expanding with
/// b_i^2 = b_i gives: linear += lambda*(1 - k1 - k2), quadratic += 2*lambda
/// on every pair, offset += lambda*k1*k2.
inline QuboInstance add_window_penalty(QuboInstance q, int k1, int k2, double lambda) {
    require(std::abs(k1 - k2) <= 1, "window penalty requires |k1 - k2| <= 1, got k1=", k1,
            " k2=", k2);
    require(k1 >= 0 && k2 >= 0, "window penalty requires k1, k2 >= 0");
    require(lambda > 0.0 && std::isfinite(lambda), "window penalty requires lambda > 0");
    const double lin = lambda * (1.0 - k1 - k2);
    for (std::size_t i = 0; i < q.n; ++i) q.linear[i] += lin;
    for (std::uint32_t i = 0; i < q.n; ++i)
        for (std::uint32_t j = i + 1; j < q.n; ++j) q.add_quadratic(i, j, 2.0 * lambda);
    q.offset += lambda * static_cast<double>(k1) * static_cast<double>(k2);
    q.validate();
    return q;
}

/// Exact-cardinality penalty lambda * (sum b_i - k)^2.
inline QuboInstance add_cardinality_penalty(QuboInstance q, int k, double lambda) {
    require(k >= 0 && static_cast<std::size_t>(k) <= q.n, "cardinality k out of range");
    return add_window_penalty(std::move(q), k, k, lambda);
}

/// Penalty scale rule: 10 * max(max_i |z_i|, max_{i<j} |gamma * s_ij|).
/// beta does not participate; the variant below folds it into the linear
/// magnitudes for callers that want it to.
inline double default_lambda(const proximity::ProximityTable& table, double gamma) {
    double m = 0.0;
    for (double z : table.z) m = std::max(m, std::abs(z));
    for (std::size_t i = 0; i < table.drug_count(); ++i)
        for (std::size_t j = i + 1; j < table.drug_count(); ++j)
            m = std::max(m, std::abs(gamma * table.s[i][j]));
    return 10.0 * m;
}

inline double default_lambda_with_beta(const proximity::ProximityTable& table, double gamma,
                                       double beta) {
    double m = 0.0;
    for (double z : table.z) m = std::max(m, std::abs(z + beta));
    for (std::size_t i = 0; i < table.drug_count(); ++i)
        for (std::size_t j = i + 1; j < table.drug_count(); ++j)
            m = std::max(m, std::abs(gamma * table.s[i][j]));
    return 10.0 * m;
}

inline double energy(const QuboInstance& q, const Configuration& c) {
    require(c.size() == q.n, "configuration has ", c.size(), " bits, instance has ", q.n);
    double e = q.offset;
    for (std::size_t i = 0; i < q.n; ++i)
        if (c[i]) e += q.linear[i];
    for (const auto& [key, v] : q.quadratic)
        if (c[key.first] && c[key.second]) e += v;
    return e;
}

inline double energy(const QuboInstance& q, std::uint64_t mask) {
    double e = q.offset;
    for (std::size_t i = 0; i < q.n; ++i)
        if ((mask >> i) & 1u) e += q.linear[i];
    for (const auto& [key, v] : q.quadratic)
        if (((mask >> key.first) & 1u) && ((mask >> key.second) & 1u)) e += v;
    return e;
}

/// Map to spin variables via b_i = (1 + sigma_i) / 2:
///   h_i = l_i/2 + sum_j q_ij/4,  J_ij = q_ij/4,
///   offset += sum_i l_i/2 + sum_{ij} q_ij/4.
inline IsingInstance to_ising(const QuboInstance& q) {
    IsingInstance ising;
    ising.n = q.n;
    ising.h.resize(q.n, 0.0);
    ising.offset = q.offset;
    for (std::size_t i = 0; i < q.n; ++i) {
        ising.h[i] += q.linear[i] / 2.0;
        ising.offset += q.linear[i] / 2.0;
    }
    for (const auto& [key, v] : q.quadratic) {
        ising.j[key] = v / 4.0;
        ising.h[key.first] += v / 4.0;
        ising.h[key.second] += v / 4.0;
        ising.offset += v / 4.0;
    }
    return ising;
}

/// Energy of a spin assignment (+1/-1) under the Ising form.
inline double ising_energy(const IsingInstance& inst, const std::vector<std::int8_t>& spins) {
    require(spins.size() == inst.n, "spin vector size mismatch");
    double e = inst.offset;
    for (std::size_t i = 0; i < inst.n; ++i) e += inst.h[i] * spins[i];
    for (const auto& [key, v] : inst.j) e += v * spins[key.first] * spins[key.second];
    return e;
}

}  // namespace qcomb::qubo
