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
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "qcomb/common.hpp"
#include "qcomb/parallel.hpp"
#include "qcomb/qubo.hpp"
#include "qcomb/rng.hpp"

// Path-integral Monte Carlo simulation of transverse-field annealing at
// fixed inverse temperature. P coupled replicas of the classical spin
// system approximate the quantum partition function; the transverse field
// anneals from gamma0 down to gamma_min, the inter-replica coupling
//
//   J_perp = -(P / (2 * beta)) * ln tanh(beta * Gamma / P)
//
// stiffening from ~0 (independent replicas) to a near-lock as Gamma -> 0.
// Each sweep proposes a Metropolis flip for every (site, slice) pair plus
// one all-slice flip per site; readout takes the replica with the lowest
// classical energy after the final sweep.

namespace qcomb::sqa {

struct AnnealSchedule {
    enum class Shape { Linear, Exponential };

    std::uint32_t total_sweeps = 2000;
    Shape shape = Shape::Exponential;
    double alpha = 5.0;        // exponential rate; larger = later quench
    double gamma0 = 3.0;       // initial transverse field (post-normalization units)
    double gamma_min = 1e-3;   // final transverse field

    void validate() const {
        require(total_sweeps >= 1, "schedule: total_sweeps must be >= 1");
        require(gamma0 > gamma_min && gamma_min > 0.0,
                "schedule: need gamma0 > gamma_min > 0");
        if (shape == Shape::Exponential)
            require(alpha > 0.0, "schedule: exponential shape needs alpha > 0");
    }

    /// Progress in [0,1] after `sweep` of total_sweeps sweeps.
    double s_of_t(std::uint32_t sweep) const {
        return static_cast<double>(sweep) / static_cast<double>(total_sweeps);
    }

    /// Annealing coordinate: linear in s, or exponential (slow start, fast
    /// final quench) which promotes escape into low-lying excited states.
    double u_of_s(double s) const {
        if (shape == Shape::Linear) return s;
        return std::expm1(alpha * s) / std::expm1(alpha);
    }

    /// Transverse field, interpolated geometrically.
    double gamma_at(std::uint32_t sweep) const {
        const double u = u_of_s(s_of_t(sweep));
        return gamma0 * std::pow(gamma_min / gamma0, u);
    }
};

struct SqaConfig {
    std::uint32_t trotter_slices = 20;
    double inverse_temperature = 1.0;  // applied after instance normalization
    AnnealSchedule schedule;
    std::uint64_t master_seed = 0;

    void validate() const {
        require(trotter_slices >= 2, "sqa: trotter_slices must be >= 2");
        require(inverse_temperature > 0.0, "sqa: inverse_temperature must be > 0");
        schedule.validate();
    }
};

struct SampleRecord {
    std::uint64_t count = 0;
    double energy = 0.0;  // under the original (unscaled) QUBO
};

struct SampleSet {
    std::uint64_t runs = 0;
    std::map<std::uint64_t, SampleRecord> records;  // mask -> record, key-ordered
    std::string instance_fingerprint;

    std::uint64_t total_count() const {
        std::uint64_t t = 0;
        for (const auto& [mask, rec] : records) t += rec.count;
        return t;
    }
};

/// FNV-1a over the canonical coefficient bytes; identifies the instance a
/// sample set was drawn from.
inline std::string fingerprint(const qubo::QuboInstance& q) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix_bytes = [&h](const void* p, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    auto mix_u64 = [&](std::uint64_t v) { mix_bytes(&v, 8); };
    auto mix_f64 = [&](double v) { mix_bytes(&v, 8); };
    mix_u64(q.n);
    mix_f64(q.offset);
    for (double v : q.linear) mix_f64(v);
    for (const auto& [key, v] : q.quadratic) {
        mix_u64((std::uint64_t{key.first} << 32) | key.second);
        mix_f64(v);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/// Normalized instance plus dense coupling rows, shared read-only across runs.
class Engine {
public:
    Engine(const qubo::IsingInstance& inst, const SqaConfig& cfg) : cfg_(cfg), n_(inst.n) {
        cfg.validate();
        require(n_ >= 1, "sqa: empty instance");
        require(n_ <= 63, "sqa: instances beyond 63 variables are not supported");
        double max_coef = 0.0;
        for (double v : inst.h) max_coef = std::max(max_coef, std::abs(v));
        for (const auto& [key, v] : inst.j) max_coef = std::max(max_coef, std::abs(v));
        scale_ = (max_coef > 0.0) ? 1.0 / max_coef : 1.0;
        h_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) h_[i] = inst.h[i] * scale_;
        j_dense_.assign(n_ * n_, 0.0);
        for (const auto& [key, v] : inst.j) {
            j_dense_[key.first * n_ + key.second] = v * scale_;
            j_dense_[key.second * n_ + key.first] = v * scale_;
        }
    }

    /// One annealing run; returns the best replica's configuration.
    qubo::Configuration anneal_once(std::uint64_t run_seed) const {
        const std::uint32_t P = cfg_.trotter_slices;
        const double beta = cfg_.inverse_temperature;
        const double beta_slice = beta / static_cast<double>(P);
        const std::uint32_t T = cfg_.schedule.total_sweeps;
        Rng rng(run_seed);

        std::vector<std::int8_t> spins(P * n_);
        for (auto& s : spins) s = (rng.next_u64() & 1u) ? 1 : -1;

        // cached local fields f[k*n + i] = h_i + sum_j J_ij * sigma_{k,j}
        std::vector<double> field(P * n_);
        for (std::uint32_t k = 0; k < P; ++k) {
            for (std::size_t i = 0; i < n_; ++i) {
                double f = h_[i];
                const double* row = j_dense_.data() + i * n_;
                const std::int8_t* srow = spins.data() + k * n_;
                for (std::size_t j = 0; j < n_; ++j) f += row[j] * srow[j];
                field[k * n_ + i] = f;
            }
        }

        auto flip = [&](std::uint32_t k, std::size_t i) {
            const std::int8_t old = spins[k * n_ + i];
            spins[k * n_ + i] = static_cast<std::int8_t>(-old);
            const double delta = -2.0 * static_cast<double>(old);
            const double* row = j_dense_.data() + i * n_;
            double* frow = field.data() + k * n_;
            for (std::size_t j = 0; j < n_; ++j) frow[j] += row[j] * delta;
        };
        auto accept = [&](double delta) {
            if (delta <= 0.0) return true;
            if (delta > 50.0) return false;
            return rng.next_unit() < std::exp(-delta);
        };

        for (std::uint32_t t = 1; t <= T; ++t) {
            const double gamma = cfg_.schedule.gamma_at(t);
            // slice-coupling constant in the acceptance exponent
            const double K = -0.5 * std::log(std::tanh(beta_slice * gamma));
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::uint32_t k = 0; k < P; ++k) {
                    const std::int8_t s = spins[k * n_ + i];
                    const std::int8_t up = spins[((k + 1) % P) * n_ + i];
                    const std::int8_t dn = spins[((k + P - 1) % P) * n_ + i];
                    // delta(beta H_eff) = -2 s (beta/P) f + 2 K s (up + dn)
                    const double d = -2.0 * s * beta_slice * field[k * n_ + i] +
                                     2.0 * K * s * (up + dn);
                    if (accept(d)) flip(k, i);
                }
                // global all-slice flip: inter-replica terms unchanged
                double d_global = 0.0;
                for (std::uint32_t k = 0; k < P; ++k)
                    d_global += -2.0 * spins[k * n_ + i] * beta_slice * field[k * n_ + i];
                if (accept(d_global)) {
                    for (std::uint32_t k = 0; k < P; ++k) flip(k, i);
                }
            }
        }

        // readout: replica with the lowest classical energy
        std::uint32_t best_k = 0;
        double best_e = classical_energy(spins, 0);
        for (std::uint32_t k = 1; k < P; ++k) {
            const double e = classical_energy(spins, k);
            if (e < best_e) {
                best_e = e;
                best_k = k;
            }
        }
        qubo::Configuration bits(n_);
        for (std::size_t i = 0; i < n_; ++i)
            bits[i] = spins[best_k * n_ + i] > 0 ? 1 : 0;
        return bits;
    }

private:
    double classical_energy(const std::vector<std::int8_t>& spins, std::uint32_t k) const {
        const std::int8_t* s = spins.data() + k * n_;
        double e = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            e += h_[i] * s[i];
            const double* row = j_dense_.data() + i * n_;
            for (std::size_t j = i + 1; j < n_; ++j) e += row[j] * s[i] * s[j];
        }
        return e;
    }

    SqaConfig cfg_;
    std::size_t n_;
    double scale_ = 1.0;
    std::vector<double> h_;
    std::vector<double> j_dense_;
};

inline qubo::Configuration anneal_once(const qubo::IsingInstance& inst, const SqaConfig& cfg,
                                       std::uint64_t run_seed) {
    return Engine(inst, cfg).anneal_once(run_seed);
}

/// R independent annealing runs aggregated into a frequency table. Run r
/// seeds its own stream from (master_seed, r), so the result is identical
/// for any scheduling of the runs.
inline SampleSet sample(const qubo::QuboInstance& q, const SqaConfig& cfg, std::uint64_t runs) {
    require(runs >= 1, "sample: R must be >= 1");
    q.validate();
    Engine engine(qubo::to_ising(q), cfg);
    std::vector<std::uint64_t> masks(runs);
    parallel_for(runs, [&](std::size_t r) {
        masks[r] = qubo::mask_from_config(engine.anneal_once(derive_seed(cfg.master_seed, r)));
    });
    SampleSet out;
    out.runs = runs;
    out.instance_fingerprint = fingerprint(q);
    for (std::uint64_t m : masks) ++out.records[m].count;
    for (auto& [mask, rec] : out.records) rec.energy = qubo::energy(q, mask);
    return out;
}

}  // namespace qcomb::sqa
