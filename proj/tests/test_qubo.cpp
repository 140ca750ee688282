#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "qcomb/qubo.hpp"
#include "test_util.hpp"

using namespace qcomb;
using qubo::Configuration;
using qubo::QuboInstance;

namespace {

proximity::ProximityTable table_of(std::vector<double> z, std::vector<std::vector<double>> s) {
    proximity::ProximityTable t;
    t.disease_id = "T";
    for (std::size_t i = 0; i < z.size(); ++i) t.drugs.push_back("d" + std::to_string(i));
    t.z = std::move(z);
    t.s = std::move(s);
    return t;
}

/// Independent polynomial evaluator: expands the instance into an explicit
/// coefficient list and evaluates term by term.
double oracle_energy(const QuboInstance& q, std::uint64_t mask) {
    double e = q.offset;
    for (std::size_t i = 0; i < q.n; ++i)
        for (std::size_t j = i; j < q.n; ++j) {
            const bool on = ((mask >> i) & 1u) && ((mask >> j) & 1u);
            if (!on) continue;
            if (i == j) {
                e += q.linear[i];
            } else {
                auto it = q.quadratic.find({static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j)});
                if (it != q.quadratic.end()) e += it->second;
            }
        }
    return e;
}

QuboInstance random_instance(std::size_t n, qcomb::Rng& rng, double density = 0.7) {
    QuboInstance q;
    q.n = n;
    q.linear.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.labels.push_back("v" + std::to_string(i));
        q.linear[i] = rng.uniform(-5.0, 5.0);
    }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rng.next_unit() < density) q.add_quadratic(i, j, rng.uniform(-5.0, 5.0));
    q.offset = rng.uniform(-2.0, 2.0);
    return q;
}

int popcount_mask(std::uint64_t mask) { return __builtin_popcountll(mask); }

}  // namespace

TEST_CASE("hamiltonian with degenerate hyperparameters is the z vector") {
    auto t = table_of({-1.5, 2.0}, {{0, 0.5}, {0.5, 0}});
    auto q = qubo::build_hamiltonian(t, 0.0, 0.0);
    CHECK(q.linear == std::vector<double>{-1.5, 2.0});
    CHECK(q.quadratic.empty());
    CHECK(q.offset == 0.0);
}

TEST_CASE("hamiltonian substitution example") {
    auto t = table_of({-1.0, -2.0}, {{0, 0.5}, {0.5, 0}});
    auto q = qubo::build_hamiltonian(t, 2.0, 1.0);
    CHECK(q.linear == std::vector<double>{0.0, -1.0});
    REQUIRE(q.quadratic.size() == 1);
    CHECK(q.quadratic.at({0, 1}) == Catch::Approx(-1.0));
}

TEST_CASE("window penalty satisfied configurations cost nothing") {
    QuboInstance q;
    q.n = 3;
    q.linear = {0, 0, 0};
    q.labels = {"a", "b", "c"};
    auto p1 = qubo::add_window_penalty(q, 1, 1, 1.0);
    CHECK(qubo::energy(p1, Configuration{1, 0, 0}) == Catch::Approx(0.0));

    auto p23 = qubo::add_window_penalty(q, 2, 3, 1.0);
    CHECK(qubo::energy(p23, Configuration{1, 1, 0}) == Catch::Approx(0.0));
    CHECK(qubo::energy(p23, Configuration{1, 1, 1}) == Catch::Approx(0.0));
    CHECK(qubo::energy(p23, Configuration{1, 0, 0}) == Catch::Approx(2.0));
    CHECK(qubo::energy(p23, Configuration{0, 0, 0}) == Catch::Approx(6.0));
}

TEST_CASE("window penalty equals the closed-form polynomial exhaustively") {
    qcomb::Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.index(9);  // up to 10
        auto base = random_instance(n, rng);
        const int k1 = static_cast<int>(rng.index(n));
        const int k2 = k1 + static_cast<int>(rng.index(2));  // k1 or k1+1
        const double lambda = rng.uniform(0.5, 20.0);
        auto penalized = qubo::add_window_penalty(base, k1, k2, lambda);
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const double without = qubo::energy(base, mask);
            const double with = qubo::energy(penalized, mask);
            const double card = popcount_mask(mask);
            const double expect = without + lambda * (card - k1) * (card - k2);
            REQUIRE(with == Catch::Approx(expect).margin(1e-9));
        }
    }
}

TEST_CASE("window penalty precondition |k1-k2| <= 1") {
    QuboInstance q;
    q.n = 4;
    q.linear = {0, 0, 0, 0};
    q.labels = {"a", "b", "c", "d"};
    REQUIRE_THROWS_WITH(qubo::add_window_penalty(q, 1, 3, 1.0),
                        Catch::Matchers::ContainsSubstring("|k1 - k2| <= 1"));
    REQUIRE_THROWS_AS(qubo::add_window_penalty(q, 2, 2, 0.0), qcomb::error);
}

TEST_CASE("cardinality penalty equals the squared-sum form") {
    qcomb::Rng rng(505);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + rng.index(9);
        auto base = random_instance(n, rng);
        const int k = static_cast<int>(rng.index(n + 1));
        const double lambda = rng.uniform(0.5, 10.0);
        auto penalized = qubo::add_cardinality_penalty(base, k, lambda);
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const double diff = popcount_mask(mask) - k;
            REQUIRE(qubo::energy(penalized, mask) ==
                    Catch::Approx(qubo::energy(base, mask) + lambda * diff * diff).margin(1e-9));
        }
    }
}

TEST_CASE("cardinality penalty edge cases") {
    QuboInstance q;
    q.n = 3;
    q.linear = {0, 0, 0};
    q.labels = {"a", "b", "c"};
    auto k0 = qubo::add_cardinality_penalty(q, 0, 2.0);
    CHECK(qubo::energy(k0, Configuration{1, 1, 0}) == Catch::Approx(2.0 * 4));
    auto kn = qubo::add_cardinality_penalty(q, 3, 2.0);
    CHECK(qubo::energy(kn, Configuration{1, 1, 1}) == Catch::Approx(0.0));
    auto k2 = qubo::add_cardinality_penalty(q, 2, 5.0);
    CHECK(qubo::energy(k2, Configuration{1, 1, 0}) == Catch::Approx(0.0));
}

TEST_CASE("default lambda rule") {
    auto t = table_of({-3.0, 1.0}, {{0, 0.5}, {0.5, 0}});
    CHECK(qubo::default_lambda(t, 2.0) == Catch::Approx(30.0));
    CHECK(qubo::default_lambda(t, 0.0) == Catch::Approx(30.0));
    auto zero = table_of({0.0, 0.0}, {{0, 0.0}, {0.0, 0}});
    CHECK(qubo::default_lambda(zero, 5.0) == 0.0);
}

TEST_CASE("energy evaluation basics") {
    QuboInstance q;
    q.n = 2;
    q.labels = {"a", "b"};
    q.linear = {1.0, -2.0};
    q.add_quadratic(0, 1, 3.0);
    q.offset = 0.0;
    CHECK(qubo::energy(q, Configuration{0, 0}) == 0.0);
    CHECK(qubo::energy(q, Configuration{1, 1}) == Catch::Approx(2.0));
    REQUIRE_THROWS_AS(qubo::energy(q, Configuration{1}), qcomb::error);
}

TEST_CASE("energy matches the independent polynomial oracle") {
    qcomb::Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + rng.index(11);  // up to 12
        auto q = random_instance(n, rng);
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
            REQUIRE(qubo::energy(q, mask) == Catch::Approx(oracle_energy(q, mask)).margin(1e-9));
    }
}

TEST_CASE("ising transform: single-variable closed form") {
    QuboInstance q;
    q.n = 1;
    q.labels = {"a"};
    q.linear = {2.0};
    auto ising = qubo::to_ising(q);
    REQUIRE(ising.h.size() == 1);
    CHECK(ising.h[0] == Catch::Approx(1.0));
    CHECK(ising.offset == Catch::Approx(1.0));
    CHECK(qubo::ising_energy(ising, {-1}) == Catch::Approx(0.0));
    CHECK(qubo::ising_energy(ising, {+1}) == Catch::Approx(2.0));
}

TEST_CASE("ising transform of the zero instance is zero") {
    QuboInstance q;
    q.n = 3;
    q.labels = {"a", "b", "c"};
    q.linear = {0, 0, 0};
    auto ising = qubo::to_ising(q);
    CHECK(ising.offset == 0.0);
    for (double h : ising.h) CHECK(h == 0.0);
    CHECK(ising.j.empty());
}

TEST_CASE("qubo and ising energies agree on every configuration") {
    qcomb::Rng rng(707);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.index(12);  // up to 12
        auto q = random_instance(n, rng);
        auto ising = qubo::to_ising(q);
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            std::vector<std::int8_t> spins(n);
            for (std::size_t i = 0; i < n; ++i) spins[i] = ((mask >> i) & 1u) ? 1 : -1;
            REQUIRE(qubo::energy(q, mask) ==
                    Catch::Approx(qubo::ising_energy(ising, spins)).margin(1e-9));
        }
    }
}

TEST_CASE("raising beta never raises the minimizer cardinality") {
    qcomb::Rng rng(808);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 2 + rng.index(9);  // up to 10
        std::vector<double> z(n);
        std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
        for (auto& v : z) v = rng.uniform(-4.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s[i][j] = s[j][i] = rng.uniform(-1.0, 3.0);
        auto t = table_of(z, s);
        const double gamma = rng.uniform(0.0, 3.0);

        auto min_cardinality = [&](double beta) {
            auto q = qubo::build_hamiltonian(t, gamma, beta);
            std::uint64_t best_mask = 0;
            double best_e = qubo::energy(q, std::uint64_t{0});
            for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
                const double e = qubo::energy(q, mask);
                if (e < best_e ||
                    (e == best_e && qubo::lex_key(mask, n) < qubo::lex_key(best_mask, n))) {
                    best_e = e;
                    best_mask = mask;
                }
            }
            return popcount_mask(best_mask);
        };
        int prev = min_cardinality(-2.0);
        for (double beta : {-1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
            const int card = min_cardinality(beta);
            REQUIRE(card <= prev);
            prev = card;
        }
    }
}

TEST_CASE("quadratic folding sums symmetric input") {
    QuboInstance q;
    q.n = 3;
    q.labels = {"a", "b", "c"};
    q.linear = {0, 0, 0};
    q.add_quadratic(1, 0, 2.0);
    q.add_quadratic(0, 1, 3.0);
    REQUIRE(q.quadratic.size() == 1);
    CHECK(q.quadratic.at({0, 1}) == Catch::Approx(5.0));
    q.add_quadratic(0, 1, -5.0);
    CHECK(q.quadratic.empty());
}

TEST_CASE("non-finite inputs are rejected") {
    auto t = table_of({std::nan(""), 0.0}, {{0, 0.5}, {0.5, 0}});
    REQUIRE_THROWS_AS(qubo::build_hamiltonian(t, 1.0, 1.0), qcomb::error);
    auto ok = table_of({0.0, 0.0}, {{0, 0.5}, {0.5, 0}});
    REQUIRE_THROWS_AS(qubo::build_hamiltonian(ok, std::numeric_limits<double>::infinity(), 0.0),
                      qcomb::error);
}
