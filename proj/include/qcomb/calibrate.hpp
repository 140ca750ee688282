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
#include <string>
#include <unordered_set>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/parallel.hpp"
#include "qcomb/qubo.hpp"
#include "qcomb/spectrum.hpp"

// Grid search over (gamma, beta) maximizing average precision of the exact
// spectrum against the validated combinations of one disease.

namespace qcomb::calibrate {

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::uint32_t steps = 0;

    double value(std::uint32_t t) const {
        if (steps == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(steps - 1);
    }
};

struct GridSpec {
    // Defaults bracket every calibrated optimum seen in practice with margin.
    AxisSpec gamma{-2.0, 10.0, 61};
    AxisSpec beta{-5.0, 40.0, 61};

    void validate() const {
        for (const AxisSpec* a : {&gamma, &beta}) {
            require(a->steps >= 1, "grid axis needs at least 1 step");
            require(a->lo <= a->hi, "grid axis needs lo <= hi");
            if (a->steps >= 2) require(a->lo < a->hi, "grid axis with steps >= 2 needs lo < hi");
        }
    }
};

struct CalibrationResult {
    GridSpec grid;
    std::vector<std::vector<double>> ap_surface;  // [gamma index][beta index]
    double best_gamma = 0.0;
    double best_beta = 0.0;
    double best_ap = 0.0;
    std::uint32_t best_gamma_index = 0;
    std::uint32_t best_beta_index = 0;
    // config echo
    int k1 = 2;
    int k2 = 3;
    std::string lambda_rule = "10*max(|z|,|gamma*s|)";
    std::uint64_t proximity_seed = 0;
    std::size_t positives = 0;
};

/// Window penalty with the default lambda rule; a degenerate (all-zero)
/// table yields lambda = 0 and the penalty is skipped with a warning.
inline qubo::QuboInstance apply_default_window_penalty(qubo::QuboInstance q,
                                                       const proximity::ProximityTable& table,
                                                       double gamma, int k1, int k2) {
    const double lambda = qubo::default_lambda(table, gamma);
    if (lambda <= 0.0) {
        log::warn("degenerate penalty: lambda rule yields 0 (all-zero table); no window penalty applied");
        return q;
    }
    return qubo::add_window_penalty(std::move(q), k1, k2, lambda);
}

/// Evaluate AP on every grid point and report the argmax. Ties resolve to
/// the first occurrence in row-major (gamma-major) order.
inline CalibrationResult grid_search(const proximity::ProximityTable& table,
                                     const std::vector<ingest::Combination>& validated,
                                     const GridSpec& grid, int k1 = 2, int k2 = 3) {
    grid.validate();
    require(table.drug_count() <= spectrum::kMaxEnumerationBits,
            "grid search enumerates exactly; drug count ", table.drug_count(),
            " exceeds the limit of ", spectrum::kMaxEnumerationBits);
    require(!validated.empty(), "grid search: validated combination set is empty");
    const auto masks = spectrum::validated_masks(table.drugs, validated);
    require(!masks.empty(),
            "grid search: no validated combination is representable in this drug list");

    CalibrationResult result;
    result.grid = grid;
    result.k1 = k1;
    result.k2 = k2;
    result.proximity_seed = table.config.master_seed;
    result.positives = masks.size();
    result.ap_surface.assign(grid.gamma.steps, std::vector<double>(grid.beta.steps, 0.0));

    const std::size_t cells = std::size_t{0} + grid.gamma.steps * grid.beta.steps;
    parallel_for(cells, [&](std::size_t cell) {
        const std::uint32_t gi = static_cast<std::uint32_t>(cell / grid.beta.steps);
        const std::uint32_t bi = static_cast<std::uint32_t>(cell % grid.beta.steps);
        const double gamma = grid.gamma.value(gi);
        const double beta = grid.beta.value(bi);
        auto q = qubo::build_hamiltonian(table, gamma, beta);
        q = apply_default_window_penalty(std::move(q), table, gamma, k1, k2);
        auto spec = spectrum::enumerate(q, masks);
        result.ap_surface[gi][bi] = spectrum::average_precision(spec);
    });

    result.best_ap = -1.0;
    for (std::uint32_t gi = 0; gi < grid.gamma.steps; ++gi) {
        for (std::uint32_t bi = 0; bi < grid.beta.steps; ++bi) {
            if (result.ap_surface[gi][bi] > result.best_ap) {
                result.best_ap = result.ap_surface[gi][bi];
                result.best_gamma_index = gi;
                result.best_beta_index = bi;
            }
        }
    }
    result.best_gamma = grid.gamma.value(result.best_gamma_index);
    result.best_beta = grid.beta.value(result.best_beta_index);
    return result;
}

}  // namespace qcomb::calibrate
