#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "qcomb/spectrum.hpp"
#include "test_util.hpp"

using namespace qcomb;
using qubo::QuboInstance;
using spectrum::RankedSpectrum;

namespace {

QuboInstance instance_of(std::vector<double> linear,
                         std::map<std::pair<std::uint32_t, std::uint32_t>, double> quad = {},
                         double offset = 0.0) {
    QuboInstance q;
    q.n = linear.size();
    q.linear = std::move(linear);
    for (std::size_t i = 0; i < q.n; ++i) q.labels.push_back("v" + std::to_string(i));
    for (const auto& [key, v] : quad) q.add_quadratic(key.first, key.second, v);
    q.offset = offset;
    return q;
}

/// Builds a spectrum with an arbitrary label sequence over equally spaced
/// energies (rank i has energy i).
RankedSpectrum synthetic_spectrum(const std::vector<int>& labels) {
    RankedSpectrum spec;
    spec.n = 1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        spec.entries.push_back(
            {static_cast<double>(i), static_cast<std::uint32_t>(i),
             static_cast<std::uint8_t>(labels[i])});
        spec.positives += labels[i];
    }
    return spec;
}

QuboInstance random_instance(std::size_t n, qcomb::Rng& rng) {
    QuboInstance q;
    q.n = n;
    q.linear.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.labels.push_back("v" + std::to_string(i));
        q.linear[i] = rng.uniform(-5.0, 5.0);
    }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rng.next_unit() < 0.6) q.add_quadratic(i, j, rng.uniform(-5.0, 5.0));
    return q;
}

}  // namespace

TEST_CASE("hand enumeration with a lexicographic tie") {
    auto q = instance_of({1.0, -1.0});
    auto spec = spectrum::enumerate(q, {});
    REQUIRE(spec.size() == 4);
    // energies: 00->0, 10->1, 01->-1, 11->0; ties 00 vs 11 break on bitstring
    CHECK(qubo::bitstring(spec.entries[0].mask, 2) == "01");
    CHECK(spec.entries[0].energy == Catch::Approx(-1.0));
    CHECK(qubo::bitstring(spec.entries[1].mask, 2) == "00");
    CHECK(qubo::bitstring(spec.entries[2].mask, 2) == "11");
    CHECK(qubo::bitstring(spec.entries[3].mask, 2) == "10");
}

TEST_CASE("spectrum entries are complete and non-decreasing") {
    qcomb::Rng rng(11);
    auto q = random_instance(10, rng);
    auto spec = spectrum::enumerate(q, {});
    REQUIRE(spec.size() == 1024);
    std::set<std::uint32_t> masks;
    for (const auto& e : spec.entries) masks.insert(e.mask);
    REQUIRE(masks.size() == 1024);
    for (std::size_t i = 1; i < spec.size(); ++i)
        REQUIRE(spec.entries[i - 1].energy <= spec.entries[i].energy);
}

TEST_CASE("spectrum minimum equals an independent exhaustive loop") {
    qcomb::Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        auto q = random_instance(10, rng);
        auto spec = spectrum::enumerate(q, {});
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t mask = 0; mask < 1024; ++mask)
            best = std::min(best, qubo::energy(q, mask));
        REQUIRE(spec.entries[0].energy == Catch::Approx(best).margin(1e-12));
    }
}

TEST_CASE("enumeration guard directs large instances to the sampler") {
    QuboInstance q;
    q.n = 26;
    q.linear.assign(26, 0.0);
    for (int i = 0; i < 26; ++i) q.labels.push_back("v" + std::to_string(i));
    REQUIRE_THROWS_WITH(spectrum::enumerate(q, {}), Catch::Matchers::ContainsSubstring("sqa"));
}

TEST_CASE("labels come from the validated mask set") {
    auto q = instance_of({-1.0, -2.0, 3.0});
    std::unordered_set<std::uint64_t> validated{0b011};  // v0 and v1
    auto spec = spectrum::enumerate(q, validated);
    REQUIRE(spec.positives == 1);
    for (const auto& e : spec.entries)
        CHECK(int(e.label) == (e.mask == 0b011 ? 1 : 0));
}

TEST_CASE("validated_masks maps combinations through drug labels") {
    std::vector<std::string> labels{"da", "db", "dc"};
    std::vector<ingest::Combination> combos{
        {"Dis", {"da", "dc"}},
        {"Dis", {"db", "dx"}},  // dx not in pool: not representable
    };
    auto masks = spectrum::validated_masks(labels, combos);
    REQUIRE(masks.size() == 1);
    CHECK(masks.count(0b101) == 1);
}

TEST_CASE("precision at k") {
    auto spec = synthetic_spectrum({1, 0, 1});
    CHECK(spectrum::precision_at_k(spec, 1) == 1.0);
    CHECK(spectrum::precision_at_k(spec, 2) == 0.5);
    CHECK(spectrum::precision_at_k(spec, 3) == Catch::Approx(2.0 / 3.0));
    REQUIRE_THROWS_AS(spectrum::precision_at_k(spec, 0), qcomb::error);
    REQUIRE_THROWS_AS(spectrum::precision_at_k(spec, 4), qcomb::error);
}

TEST_CASE("average precision bounds and hand cases") {
    CHECK(spectrum::average_precision(synthetic_spectrum({1, 1, 1, 0})) == 1.0);
    CHECK(spectrum::average_precision(synthetic_spectrum({0, 1})) == Catch::Approx(0.5));
    CHECK(spectrum::average_precision(synthetic_spectrum({1, 0, 0, 1})) ==
          Catch::Approx(0.75));  // (1 + 2/4)/2
    REQUIRE_THROWS_WITH(spectrum::average_precision(synthetic_spectrum({0, 0})),
                        Catch::Matchers::ContainsSubstring("undefined AP"));
}

TEST_CASE("average precision attains 1 when positives fill the lowest ranks") {
    auto spec = synthetic_spectrum({1, 1, 0, 0, 0});
    CHECK(spectrum::average_precision(spec) == 1.0);
}

TEST_CASE("pr curve geometry for a single positive") {
    auto spec = synthetic_spectrum({0, 0, 1, 0});
    auto curve = spectrum::pr_curve(spec);
    REQUIRE(curve.points.size() == 4);
    CHECK(curve.points[1].recall == 0.0);
    CHECK(curve.points[2].recall == 1.0);
    CHECK(curve.points[2].precision == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("perfect ranking reaches the (1,1) corner") {
    auto spec = synthetic_spectrum({1, 1, 1, 0, 0});
    auto curve = spectrum::pr_curve(spec);
    CHECK(curve.points[2].recall == 1.0);
    CHECK(curve.points[2].precision == 1.0);
}

TEST_CASE("pr-curve area equals average precision") {
    qcomb::Rng rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 8 + rng.index(200);
        std::vector<int> labels(n, 0);
        const std::size_t positives = 1 + rng.index(n / 3);
        for (std::size_t p = 0; p < positives;) {
            auto idx = rng.index(n);
            if (!labels[idx]) {
                labels[idx] = 1;
                ++p;
            }
        }
        auto spec = synthetic_spectrum(labels);
        REQUIRE(spectrum::pr_curve(spec).area() ==
                Catch::Approx(spectrum::average_precision(spec)).margin(1e-12));
    }
}

TEST_CASE("AP is invariant under monotone energy transformations") {
    qcomb::Rng rng(44);
    auto q = random_instance(8, rng);
    std::unordered_set<std::uint64_t> validated;
    for (int i = 0; i < 10; ++i) validated.insert(rng.next_below(256));
    auto spec = spectrum::enumerate(q, validated);
    const double ap = spectrum::average_precision(spec);

    // exp(x/50) is strictly monotone; apply to every coefficient path by
    // scaling: scaling all coefficients by a positive constant preserves order
    auto scaled = q;
    for (auto& v : scaled.linear) v *= 3.5;
    for (auto& [key, v] : scaled.quadratic) v *= 3.5;
    scaled.offset *= 3.5;
    auto spec2 = spectrum::enumerate(scaled, validated);
    CHECK(spectrum::average_precision(spec2) == Catch::Approx(ap).margin(1e-12));
}

TEST_CASE("shuffled labels match the analytic random-ranking expectation") {
    // E[AP] for p positives uniformly placed among N ranks:
    //   (1/N) * (H_N + (p-1) * (N - H_N) / (N - 1))
    const std::size_t N = 256;
    const std::size_t p = 12;
    double harmonic = 0.0;
    for (std::size_t k = 1; k <= N; ++k) harmonic += 1.0 / static_cast<double>(k);
    const double expect =
        (harmonic + (p - 1) * (N - harmonic) / (N - 1)) / static_cast<double>(N);

    qcomb::Rng rng(55);
    std::vector<int> labels(N, 0);
    for (std::size_t i = 0; i < p; ++i) labels[i] = 1;
    const int shuffles = 1000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < shuffles; ++t) {
        rng.shuffle(labels);
        const double ap = spectrum::average_precision(synthetic_spectrum(labels));
        sum += ap;
        sumsq += ap * ap;
    }
    const double mean = sum / shuffles;
    const double var = (sumsq - shuffles * mean * mean) / (shuffles - 1);
    const double se = std::sqrt(var / shuffles);
    CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("repeated enumeration yields identical entry order") {
    qcomb::Rng rng(66);
    auto q = random_instance(11, rng);
    auto a = spectrum::enumerate(q, {});
    auto b = spectrum::enumerate(q, {});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a.entries[i].mask == b.entries[i].mask);
        REQUIRE(a.entries[i].energy == b.entries[i].energy);
    }
}
