#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "weakpar/qsim.hpp"

using namespace weakpar;
using namespace weakpar::qsim;

namespace {

/// sin^2((2r+1) theta) with sin^2 theta = t/n: the textbook Grover success.
double grover_closed_form(std::size_t n, int t, std::uint64_t r) {
    const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(n)));
    const double s = std::sin((2.0 * static_cast<double>(r) + 1.0) * theta);
    return s * s;
}

}  // namespace

TEST_CASE("state vector basics") {
    const auto u = StateVector::uniform(5);
    CHECK(u.norm_squared() == doctest::Approx(1.0));
    CHECK(u.probability(2) == doctest::Approx(0.2));
    CHECK_NOTHROW(u.check_normalized());
    auto b = StateVector::basis(4, 3);
    CHECK(b.probability(3) == 1.0);
    b[0] = 1.0;
    CHECK_THROWS_AS(b.check_normalized(), Error);
    CHECK_THROWS_AS(StateVector(0), Error);
}

TEST_CASE("diffusion fixes the uniform state") {
    auto u = StateVector::uniform(7);
    u.diffuse();
    for (std::size_t i = 0; i < 7; ++i) CHECK(u.probability(i) == doctest::Approx(1.0 / 7));
}

TEST_CASE("measurement follows the Born rule") {
    Rng rng(3);
    StateVector s(3);
    s[0] = std::sqrt(0.25);
    s[2] = std::sqrt(0.75);
    int twos = 0;
    const int runs = 20000;
    for (int i = 0; i < runs; ++i) {
        const auto k = s.measure(rng);
        REQUIRE(k != 1);
        twos += k == 2 ? 1 : 0;
    }
    CHECK(static_cast<double>(twos) / runs == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("oracle accounting") {
    QueryOracle o(4, 0b0101);
    auto s = StateVector::uniform(4);
    o.apply_phase(s);
    CHECK(o.query_count() == 1);
    CHECK(s[0].real() < 0);
    CHECK(s[1].real() > 0);
    CHECK(o.read(2));
    CHECK(o.query_count() == 2);
    StateVector wrong(3);
    CHECK_THROWS_AS(o.apply_phase(wrong), Error);
    CHECK_THROWS_AS(o.read(4), Error);
    CHECK_THROWS_AS(QueryOracle(3, 8), Error);
    CHECK_THROWS_AS(QueryOracle(0, 0), Error);
}

TEST_CASE("iteration range and budget") {
    CHECK(grover_iteration_range(1) == 1);
    CHECK(grover_iteration_range(2) == 2);
    CHECK(grover_iteration_range(4) == 2);
    CHECK(grover_iteration_range(5) == 3);
    CHECK(grover_iteration_range(8) == 3);
    CHECK(grover_iteration_range(9) == 3);
    CHECK(grover_iteration_range(10) == 4);
    CHECK(grover_query_budget(4) == 12);
    CHECK(grover_query_budget(8) == 16);
}

TEST_CASE("single-trial success matches the closed form") {
    CHECK(grover_trial_success(4, 0b0100, 1) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t n : {2u, 4u, 5u, 8u, 13u}) {
        oracle::Rng rng(n);
        for (int trial = 0; trial < 20; ++trial) {
            const InputWord x = uniform_word(rng, static_cast<unsigned>(n));
            if (x == 0) continue;
            const int t = weight_of(x);
            for (std::uint64_t r = 0; r < 5; ++r) {
                CHECK(std::abs(grover_trial_success(n, x, r) - grover_closed_form(n, t, r)) < 1e-9);
            }
        }
    }
}

TEST_CASE("grover never accepts the zero input") {
    Rng rng(1);
    for (std::size_t n : {1u, 3u, 8u}) {
        for (int i = 0; i < 50; ++i) {
            QueryOracle o(n, 0);
            CHECK_FALSE(grover_or(n, o, rng));
            CHECK(o.query_count() <= grover_query_budget(n));
        }
        const auto e = grover_or_exact(n, 0);
        CHECK(e.success_probability == 1.0);
        CHECK(e.accept_probability == 0.0);
    }
}

TEST_CASE("exact grover success on every input") {
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            const auto e = grover_or_exact(n, x);
            CHECK(e.success_probability >= 2.0 / 3.0);
            CHECK(e.worst_case_queries <= grover_query_budget(n));
            CHECK(e.expected_queries <= static_cast<double>(e.worst_case_queries) + 1e-12);
        }
    }
}

TEST_CASE("sampled grover agrees with the exact analysis") {
    Rng rng(9);
    const std::size_t n = 8;
    const InputWord x = 0b00010000;
    const int runs = 20000;
    int accepted = 0;
    double queries = 0;
    for (int i = 0; i < runs; ++i) {
        QueryOracle o(n, x);
        accepted += grover_or(n, o, rng) ? 1 : 0;
        REQUIRE(o.query_count() <= grover_query_budget(n));
        queries += static_cast<double>(o.query_count());
    }
    const auto e = grover_or_exact(n, x);
    CHECK(static_cast<double>(accepted) / runs == doctest::Approx(e.accept_probability).epsilon(0.02));
    CHECK(queries / runs == doctest::Approx(e.expected_queries).epsilon(0.03));
}

TEST_CASE("grover as a weak parity guesser") {
    for (std::size_t n : {2u, 4u, 8u}) {
        std::uint64_t agree = 0;
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            const bool majority = grover_or_exact(n, x).accept_probability > 0.5;
            agree += majority == (parity_of(x) != 0) ? 1 : 0;
        }
        CHECK(agree >= (std::uint64_t{1} << (n - 1)) + 1);
    }
}

TEST_CASE("Deutsch-Jozsa pairs") {
    for (InputWord x = 0; x < 4; ++x) {
        QueryOracle o(2, x);
        const auto p = dj_pair_distribution(o, 0, 1);
        const int expected = parity_of(x);
        CHECK(std::abs(p[expected] - 1.0) < 1e-12);
        CHECK(std::abs(p[1 - expected]) < 1e-12);
        CHECK(o.query_count() == 1);
        QueryOracle o2(2, x);
        CHECK(dj_pair(o2, 1, 0) == (expected != 0));
    }
    QueryOracle o(3, 0);
    CHECK_THROWS_AS(dj_pair(o, 1, 1), Error);
    CHECK_THROWS_AS(dj_pair(o, 0, 3), Error);
}

TEST_CASE("exact parity in ceil(n/2) queries") {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            QueryOracle o(n, x);
            const auto run = exact_parity_quantum(n, o);
            REQUIRE(run.output == (parity_of(x) != 0));
            REQUIRE(std::abs(run.probability - 1.0) < 1e-9);
            REQUIRE(o.query_count() == (n + 1) / 2);
        }
    }
}
