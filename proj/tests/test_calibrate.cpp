#include <catch2/catch_amalgamated.hpp>

#include "qcomb/calibrate.hpp"
#include "test_util.hpp"

using namespace qcomb;
using calibrate::GridSpec;

namespace {

/// Small synthetic table: negative z everywhere, one clearly separated pair.
proximity::ProximityTable toy_table(std::size_t n, std::uint64_t seed) {
    qcomb::Rng rng(seed);
    proximity::ProximityTable t;
    t.disease_id = "Toy";
    for (std::size_t i = 0; i < n; ++i) t.drugs.push_back("d" + std::to_string(i));
    t.z.resize(n);
    for (auto& z : t.z) z = rng.uniform(-4.0, -1.0);
    t.s.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) t.s[i][j] = t.s[j][i] = rng.uniform(0.1, 2.0);
    return t;
}

std::vector<ingest::Combination> toy_validated(const proximity::ProximityTable& t,
                                               std::initializer_list<std::pair<int, int>> pairs) {
    std::vector<ingest::Combination> out;
    for (auto [i, j] : pairs) {
        ingest::Combination c;
        c.disease_id = t.disease_id;
        c.drugs = {t.drugs[i], t.drugs[j]};
        std::sort(c.drugs.begin(), c.drugs.end());
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("grid axis values span the range inclusively") {
    calibrate::AxisSpec axis{-2.0, 10.0, 61};
    CHECK(axis.value(0) == Catch::Approx(-2.0));
    CHECK(axis.value(60) == Catch::Approx(10.0));
    CHECK(axis.value(30) == Catch::Approx(4.0));
}

TEST_CASE("grid validation") {
    GridSpec bad;
    bad.gamma = {5.0, 1.0, 10};
    REQUIRE_THROWS_AS(bad.validate(), qcomb::error);
    GridSpec single;
    single.gamma = {2.0, 2.0, 1};
    single.beta = {3.0, 3.0, 1};
    single.validate();  // degenerate single-point grid is allowed
}

TEST_CASE("single-point grid returns that point") {
    auto t = toy_table(6, 1);
    auto validated = toy_validated(t, {{0, 1}, {2, 3}});
    GridSpec grid;
    grid.gamma = {1.5, 1.5, 1};
    grid.beta = {4.0, 4.0, 1};
    auto result = calibrate::grid_search(t, validated, grid);
    CHECK(result.best_gamma == 1.5);
    CHECK(result.best_beta == 4.0);
    CHECK(result.ap_surface.size() == 1);
    CHECK(result.best_ap == result.ap_surface[0][0]);
}

TEST_CASE("argmax dominates every grid point including the origin") {
    auto t = toy_table(7, 2);
    auto validated = toy_validated(t, {{0, 1}, {1, 2}, {4, 5}});
    GridSpec grid;
    grid.gamma = {0.0, 4.0, 9};
    grid.beta = {0.0, 10.0, 9};
    auto result = calibrate::grid_search(t, validated, grid);
    for (const auto& row : result.ap_surface)
        for (double ap : row) REQUIRE(result.best_ap >= ap);
    CHECK(result.best_ap >= result.ap_surface[0][0]);
}

TEST_CASE("empty validated set is an error") {
    auto t = toy_table(5, 3);
    GridSpec grid;
    grid.gamma = {0.0, 1.0, 2};
    grid.beta = {0.0, 1.0, 2};
    REQUIRE_THROWS_AS(calibrate::grid_search(t, {}, grid), qcomb::error);
    // combinations referencing foreign drugs only are equally unusable
    std::vector<ingest::Combination> foreign{{"Toy", {"x1", "x2"}}};
    REQUIRE_THROWS_AS(calibrate::grid_search(t, foreign, grid), qcomb::error);
}

TEST_CASE("AP surface is invariant under drug reordering") {
    auto t = toy_table(6, 4);
    auto validated = toy_validated(t, {{0, 3}, {2, 5}});
    GridSpec grid;
    grid.gamma = {0.0, 3.0, 5};
    grid.beta = {0.0, 8.0, 5};
    auto base = calibrate::grid_search(t, validated, grid);

    // reverse the drug order, permuting z and s consistently
    proximity::ProximityTable rev;
    rev.disease_id = t.disease_id;
    const std::size_t n = t.drug_count();
    rev.drugs.assign(t.drugs.rbegin(), t.drugs.rend());
    rev.z.assign(t.z.rbegin(), t.z.rend());
    rev.s.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rev.s[i][j] = t.s[n - 1 - i][n - 1 - j];
    auto permuted = calibrate::grid_search(rev, validated, grid);

    for (std::size_t gi = 0; gi < base.ap_surface.size(); ++gi)
        for (std::size_t bi = 0; bi < base.ap_surface[gi].size(); ++bi)
            REQUIRE(base.ap_surface[gi][bi] ==
                    Catch::Approx(permuted.ap_surface[gi][bi]).margin(1e-12));
}

TEST_CASE("grid search is reproducible bit-for-bit") {
    auto t = toy_table(8, 5);
    auto validated = toy_validated(t, {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
    GridSpec grid;
    grid.gamma = {-1.0, 3.0, 7};
    grid.beta = {-2.0, 10.0, 7};
    auto a = calibrate::grid_search(t, validated, grid);
    auto b = calibrate::grid_search(t, validated, grid);
    REQUIRE(a.ap_surface == b.ap_surface);
    REQUIRE(a.best_gamma == b.best_gamma);
    REQUIRE(a.best_beta == b.best_beta);
}

TEST_CASE("tie-breaking picks the first row-major occurrence") {
    // a table with a single validated pair whose AP saturates over a region
    proximity::ProximityTable t;
    t.disease_id = "Tie";
    t.drugs = {"a", "b", "c"};
    t.z = {-1.0, -1.0, 1.0};
    t.s.assign(3, std::vector<double>(3, 0.0));
    std::vector<ingest::Combination> validated{{"Tie", {"a", "b"}}};
    GridSpec grid;
    grid.gamma = {0.0, 1.0, 3};
    grid.beta = {0.0, 1.0, 3};
    auto result = calibrate::grid_search(t, validated, grid);
    bool found_earlier = false;
    for (std::uint32_t gi = 0; gi < 3 && !found_earlier; ++gi)
        for (std::uint32_t bi = 0; bi < 3; ++bi) {
            if (gi == result.best_gamma_index && bi == result.best_beta_index) {
                found_earlier = true;
                break;
            }
            REQUIRE(result.ap_surface[gi][bi] < result.best_ap);
        }
}
