#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "weakpar/dtree.hpp"
#include "weakpar/hypercube.hpp"
#include "weakpar/weakparity.hpp"

using namespace weakpar;

namespace {

int max_degree_by_neighbours(const VertexSet& g) {
    int best = 0;
    const std::size_t n = g.arity();
    for (InputWord v = 0; v < (InputWord{1} << n); ++v) {
        if (!g.contains(v)) continue;
        int d = 0;
        for (std::size_t i = 0; i < n; ++i) d += g.contains(v ^ (InputWord{1} << i)) ? 1 : 0;
        best = std::max(best, d);
    }
    return best;
}

VertexSet random_set(std::size_t n, weakpar::Rng& rng) { return VertexSet(oracle::random_function(n, rng)); }

}  // namespace

TEST_CASE("vertex set basics") {
    const auto s = VertexSet::from_list(3, {0, 5, 6});
    CHECK(s.size() == 3);
    CHECK(s.contains(5));
    CHECK_FALSE(s.contains(1));
    CHECK(s.vertices() == std::vector<InputWord>{0, 5, 6});
    CHECK(s.with(1).size() == 4);
    CHECK(s.with(0).size() == 3);
    CHECK(s.complement().size() == 5);
    CHECK(s.degree_of(4) == 3);
    CHECK(s.degree_of(1) == 2);
    CHECK(s.degree_of(7) == 2);
    CHECK(s.degree_of(3) == 0);
    CHECK(VertexSet(3).empty());
}

TEST_CASE("max degree examples") {
    for (std::size_t n = 1; n <= 10; ++n) {
        CHECK(max_degree(VertexSet::odd_weight(n)) == 0);
        CHECK(max_degree(VertexSet::full(n)) == static_cast<int>(n));
        CHECK(max_degree(VertexSet::odd_weight(n).with(0)) == static_cast<int>(n));
        CHECK(max_degree_shifted(VertexSet::odd_weight(n).with(0)) == static_cast<int>(n));
    }
    CHECK(max_degree(VertexSet(4)) == 0);
    CHECK(max_degree(VertexSet::from_list(4, {7})) == 0);
}

TEST_CASE("max degree routes agree on random sets") {
    oracle::Rng rng(10);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + uniform_below(rng, 10);
        const auto g = random_set(n, rng);
        const int expected = max_degree_by_neighbours(g);
        REQUIRE(max_degree(g) == expected);
        REQUIRE(max_degree_shifted(g) == expected);
    }
}

TEST_CASE("hardest vertex") {
    const auto full = VertexSet::full(4);
    CHECK(hardest_vertex(full) == std::pair<InputWord, int>{0, 4});
    CHECK(hardest_vertex(VertexSet::from_list(4, {9})) == std::pair<InputWord, int>{9, 0});
    CHECK(hardest_vertex(VertexSet::from_list(3, {1, 3, 7, 5})).first == 1);
    CHECK_THROWS_AS(hardest_vertex(VertexSet(3)), Error);
}

TEST_CASE("lambda by exhaustive search") {
    CHECK(lambda_exact(1).value == 1);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto c = lambda_exact(n);
        CHECK(c.exact);
        CHECK(c.n == n);
        CHECK(c.value == oracle::lambda_brute(n));
        CHECK(c.witness.size() == (std::uint64_t{1} << (n - 1)) + 1);
        CHECK(max_degree(c.witness) == c.value);
        CHECK_NOTHROW(verify_certificate(c));
        if (n >= 2) {
            CHECK(lambda_lower_bound(n) <= c.value);
            CHECK(c.value <= std::sqrt(static_cast<double>(n)) + 1);
        }
    }
    CHECK_THROWS_AS(lambda_exact(0), Error);
    CHECK_THROWS_AS(lambda_exact(5), CapError);
}

TEST_CASE("lower bound formula") {
    CHECK(lambda_lower_bound(2) == doctest::Approx(1.0));
    CHECK(lambda_lower_bound(4) == doctest::Approx(1.0));
    CHECK(lambda_lower_bound(16) == doctest::Approx(1.5));
    CHECK(lambda_lower_bound(8) == doctest::Approx(1.5 - 0.5 * std::log2(3.0) + 0.5));
    CHECK_THROWS_AS(lambda_lower_bound(1), Error);
}

TEST_CASE("certificate verification rejects bad claims") {
    auto c = lambda_exact(3);
    c.value += 1;
    CHECK_THROWS_AS(verify_certificate(c), Error);
    auto d = lambda_exact(3);
    d.witness = d.witness.complement();
    CHECK_THROWS_AS(verify_certificate(d), Error);
}

TEST_CASE("annealing witnesses") {
    const int exact3 = lambda_exact(3).value;
    const auto c3 = lambda_upper_search(3, {20000, 4});
    CHECK_FALSE(c3.exact);
    CHECK_NOTHROW(verify_certificate(c3));
    CHECK(c3.value <= exact3);

    const auto c6 = lambda_upper_search(6, {20000, 1});
    CHECK_NOTHROW(verify_certificate(c6));
    CHECK(c6.value <= 6);

    const auto c8 = lambda_upper_search(8, {20000, 2});
    CHECK_NOTHROW(verify_certificate(c8));
    CHECK(c8.value >= static_cast<int>(std::ceil(lambda_lower_bound(8))));

    const auto c1 = lambda_upper_search(1, {});
    CHECK(c1.value == 1);
    CHECK_FALSE(c1.exact);
}

TEST_CASE("annealing is reproducible") {
    const auto a = lambda_upper_search(5, {5000, 77});
    const auto b = lambda_upper_search(5, {5000, 77});
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
}

TEST_CASE("degree pairs of a set and its complement") {
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto g = VertexSet::odd_weight(n).with(0);
        const auto [a, b] = gotsman_linial_check(g);
        CHECK(a == static_cast<int>(n));
        CHECK(b == max_degree(g.complement()));
        CHECK(gotsman_linial_check(VertexSet(n)) == std::pair<int, int>{0, static_cast<int>(n)});
    }
    CHECK_THROWS_AS(gotsman_linial_check(VertexSet::odd_weight(3)), Error);
}

TEST_CASE("unbalanced sets or their complements reach lambda") {
    const int lam = lambda_exact(4).value;
    oracle::Rng rng(44);
    int checked = 0;
    while (checked < 100) {
        const auto g = random_set(4, rng);
        if (g.size() == 8) continue;
        const auto [a, b] = gotsman_linial_check(g);
        CHECK(std::max(a, b) >= lam);
        ++checked;
    }
}

TEST_CASE("weak guessers have hard success sets") {
    const auto or4 = make_or(4);
    const auto a = success_set(AcceptanceProfile::of(or4), make_parity(4));
    CHECK(a.size() == 9);
    const auto [v, deg] = hardest_vertex(a);
    CHECK(a.contains(v));
    CHECK(deg == max_degree(a));
    CHECK(deg >= lambda_exact(4).value);

    for (std::size_t n = 1; n <= 4; ++n) {
        const int lam = lambda_exact(n).value;
        std::vector<Guesser> gs = {weak_guesser_minimal_eps(n, Flavor::kOr)};
        if ((n & (n - 1)) == 0) gs.push_back(weak_guesser_minimal_eps(n, Flavor::kAndOr));
        for (const auto& g : gs) {
            const auto s = success_set(AcceptanceProfile::of(g.table()), make_parity(n));
            REQUIRE(s.size() >= (std::uint64_t{1} << (n - 1)) + 1);
            CHECK(max_degree(s) >= lam);
        }
    }
}
