#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "weakpar/andor.hpp"

using namespace weakpar;
using namespace weakpar::andor;

namespace {

BitSource word_bits(InputWord x) {
    return [x](std::size_t i) { return ((x >> i) & 1U) != 0; };
}

}  // namespace

TEST_CASE("small trees") {
    CHECK(make_andor(0) == TruthTable::from_hex(1, "2"));
    CHECK(make_andor(1) == TruthTable::from_hex(2, "8"));
    const auto t2 = TruthTable::from_function(4, [](InputWord x) { return (x & 3U) == 3U || (x & 12U) == 12U; });
    CHECK(make_andor(2) == t2);
    CHECK(is_and_gate(1));
    CHECK_FALSE(is_and_gate(2));
    CHECK(leaf_count(5) == 32);
    CHECK_THROWS_AS(leaf_count(64), Error);
    CHECK_THROWS_AS(make_andor(5), CapError);
}

TEST_CASE("make_andor matches the recursive definition") {
    for (std::size_t d = 0; d <= 4; ++d) {
        const auto t = make_andor(d);
        const std::size_t n = std::size_t{1} << d;
        for (InputWord x = 0; x < t.size(); ++x) {
            REQUIRE(t(x) == oracle::andor_value(d, oracle::bits_of(x, n)));
        }
    }
}

TEST_CASE("deterministic short circuit") {
    InstrumentedOracle a(2, 0b10);
    CHECK_FALSE(eval_deterministic(1, a));
    CHECK(a.query_count() == 1);

    InstrumentedOracle b(4, 0b1111);
    CHECK(eval_deterministic(2, b));
    CHECK(b.query_count() == 2);

    InstrumentedOracle c(4, 0);
    CHECK_FALSE(eval_deterministic(2, c));
    CHECK(c.query_count() == 2);

    InstrumentedOracle wrong(3, 0);
    CHECK_THROWS_AS(eval_deterministic(2, wrong), Error);
}

TEST_CASE("expected query examples") {
    CHECK(expected_queries_exact(0, 0) == 1);
    CHECK(expected_queries_exact(1, 0b10) == Rational(3, 2));
    CHECK(expected_queries_exact(1, 0b11) == 2);
    CHECK(expected_queries_exact(1, 0b00) == 1);
    CHECK(expected_queries_exact(2, 0b1111) == 2);
    CHECK(expected_queries_exact(2, 0b1110) == Rational(11, 4));
    CHECK_THROWS_AS(expected_queries_exact(1, 0b100), Error);
}

TEST_CASE("expectation recursion matches coin enumeration") {
    for (std::size_t d = 0; d <= 3; ++d) {
        const std::size_t n = std::size_t{1} << d;
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            REQUIRE(expected_queries_exact(d, x) == oracle::andor_expected_by_coins(d, oracle::bits_of(x, n)));
        }
    }
}

TEST_CASE("worst-case table") {
    const auto w = worst_case_table(64);
    CHECK(w.max_depth() == 64);
    CHECK(w[0].worst() == 1);
    CHECK(w[1].worst() == 2);
    CHECK(w[1].w0 == Rational(3, 2));
    CHECK(w[2].worst() == 3);
    CHECK(w[2].w1 == Rational(11, 4));
    for (std::size_t d = 1; d <= 64; ++d) {
        CHECK(w[d].w0 > w[d - 1].w0);
        CHECK(w[d].w1 > w[d - 1].w1);
    }
    const double target = growth_constant_squared();
    CHECK(target == doctest::Approx(2.84307).epsilon(1e-5));
    for (std::size_t d = 20; d + 2 <= 64; ++d) {
        CHECK(std::abs(w.two_level_ratio(d) - target) < 1e-3);
    }
    CHECK_THROWS_AS(worst_case_table(65), CapError);
}

TEST_CASE("worst-case table is the maximum over inputs") {
    const auto w = worst_case_table(4);
    for (std::size_t d = 0; d <= 4; ++d) {
        const auto t = make_andor(d);
        Rational best0 = 0;
        Rational best1 = 0;
        for (InputWord x = 0; x < t.size(); ++x) {
            const Rational e = expected_queries_exact(d, x);
            Rational& slot = t(x) ? best1 : best0;
            if (e > slot) slot = e;
        }
        CHECK(best0 == w[d].w0);
        CHECK(best1 == w[d].w1);
    }
}

TEST_CASE("worst_case_input attains the table") {
    const auto w = worst_case_table(10);
    for (std::size_t d = 0; d <= 10; ++d) {
        for (bool target : {false, true}) {
            const auto x = worst_case_input(d, target);
            const BitSource bits = [&x](std::size_t i) { return static_cast<bool>(x[i]); };
            CHECK(value(d, bits) == target);
            CHECK(expected_queries_exact(d, bits) == (target ? w[d].w1 : w[d].w0));
        }
    }
}

TEST_CASE("randomized evaluation is zero-error") {
    Rng rng(12345);
    for (int trial = 0; trial < 20000; ++trial) {
        const std::size_t d = uniform_below(rng, 5);
        const std::size_t n = std::size_t{1} << d;
        const InputWord x = uniform_word(rng, static_cast<unsigned>(n));
        InstrumentedOracle det(n, x);
        InstrumentedOracle rnd(n, x);
        const bool expected = eval_deterministic(d, det);
        REQUIRE(randomized_eval(d, rnd, rng) == expected);
        REQUIRE(rnd.query_count() <= n);
    }
}

TEST_CASE("empirical mean matches the exact expectation") {
    Rng rng(99);
    const std::pair<std::size_t, InputWord> cases[] = {{2, 0b1110}, {3, 0x5A}, {4, 0xF00F}};
    for (const auto& [d, x] : cases) {
        const std::size_t n = std::size_t{1} << d;
        const int runs = 20000;
        double sum = 0;
        double sq = 0;
        for (int i = 0; i < runs; ++i) {
            InstrumentedOracle o(n, x);
            randomized_eval(d, o, rng);
            const auto q = static_cast<double>(o.query_count());
            sum += q;
            sq += q * q;
        }
        const double mean = sum / runs;
        const double var = sq / runs - mean * mean;
        const double se = std::sqrt(var / runs);
        CHECK(std::abs(mean - to_double(expected_queries_exact(d, x))) <= 3 * se + 1e-12);
    }
}

TEST_CASE("parity agreement") {
    CHECK(parity_agreement(0) == 2);
    CHECK(parity_agreement(1) == 1);
    CHECK(parity_agreement(2) == 9);
    CHECK(parity_agreement(3) == 127);
    CHECK(parity_agreement(4) == 32769);
    for (std::size_t d = 0; d <= 4; ++d) {
        const auto n = static_cast<long>(leaf_count(d));
        const long c = 2 * static_cast<long>(parity_agreement(d)) - (1L << n);
        CHECK(c == (d % 2 == 0 ? 2 : -2));
    }
}

TEST_CASE("implicit oracles beyond table size") {
    const std::size_t d = 10;
    const BitSource bits = [](std::size_t i) { return (i * 2654435761U) % 5 < 2; };
    InstrumentedOracle det(leaf_count(d), bits);
    const bool v = eval_deterministic(d, det);
    CHECK(v == value(d, bits));
    Rng rng(5);
    InstrumentedOracle rnd(leaf_count(d), bits);
    CHECK(randomized_eval(d, rnd, rng) == v);
    CHECK(expected_queries_exact(d, bits) <= worst_case_table(d)[d].worst());
}
