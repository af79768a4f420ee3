#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../support/oracles.hpp"
#include "weakpar/andor.hpp"
#include "weakpar/dtree.hpp"

using namespace weakpar;

namespace {

DecisionTree parity_tree(std::size_t n, std::size_t first = 0, bool flip = false) {
    if (first == n) return DecisionTree::leaf(flip);
    return DecisionTree::query(first, parity_tree(n, first + 1, flip), parity_tree(n, first + 1, !flip));
}

DecisionTree single_var(std::size_t i) {
    return DecisionTree::query(i, DecisionTree::leaf(false), DecisionTree::leaf(true));
}

}  // namespace

TEST_CASE("eval charges one query per internal node on the path") {
    InstrumentedOracle o1(3, 5);
    CHECK(eval(DecisionTree::leaf(true), o1));
    CHECK(o1.query_count() == 0);

    InstrumentedOracle o2(1, 1);
    CHECK(eval(single_var(0), o2));
    CHECK(o2.query_count() == 1);

    InstrumentedOracle o3(3, 0b101);
    CHECK_FALSE(eval(parity_tree(3), o3));
    CHECK(o3.query_count() == 3);
    CHECK(o3.distinct_queries() == 3);
}

TEST_CASE("oracle bookkeeping") {
    InstrumentedOracle o(4, 0b0110);
    CHECK_FALSE(o.query(0));
    CHECK(o.query(1));
    CHECK(o.query(1));
    CHECK(o.query_count() == 3);
    CHECK(o.distinct_queries() == 2);
    CHECK(o.was_queried(1));
    CHECK_FALSE(o.was_queried(3));
    CHECK_THROWS_AS(o.query(4), Error);
    CHECK_THROWS_AS(InstrumentedOracle(2, 4), Error);

    InstrumentedOracle implicit(100, [](std::size_t i) { return i % 3 == 0; });
    CHECK(implicit.query(99));
    CHECK_FALSE(implicit.query(98));
}

TEST_CASE("construction rejects repeated variables") {
    const auto t = single_var(2);
    CHECK_THROWS_AS(DecisionTree::query(2, t, DecisionTree::leaf(false)), Error);
    CHECK_NOTHROW(DecisionTree::query(1, t, t));
}

TEST_CASE("tree shape accessors") {
    const auto t = parity_tree(3);
    CHECK(t.depth() == 3);
    CHECK(t.variable_mask() == 0b111);
    CHECK(t.min_arity() == 3);
    CHECK(t.node_count() == 15);
    CHECK(t.to_truth_table(3) == make_parity(3));
    CHECK(t.to_truth_table(5) == TruthTable::from_function(5, [](InputWord x) { return parity_of(x & 7) != 0; }));
    CHECK_THROWS_AS(t.to_truth_table(2), Error);
    CHECK(DecisionTree::leaf(true).depth() == 0);
    CHECK(DecisionTree::leaf(true).min_arity() == 0);
    CHECK_THROWS_AS(DecisionTree::leaf(true).variable(), Error);
}

TEST_CASE("text round trip") {
    const auto t = parity_tree(2);
    CHECK(t.to_string() == "(0 (1 0 1) (1 1 0))");
    CHECK(DecisionTree::parse(t.to_string()) == t);
    CHECK(DecisionTree::parse("  ( 3 0  1 ) ") == single_var(3));
    CHECK(DecisionTree::parse("1") == DecisionTree::leaf(true));
    oracle::Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto r = oracle::random_tree(6, 5, rng);
        CHECK(DecisionTree::parse(r.to_string()) == r);
    }
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(DecisionTree::parse(""), ParseError);
    CHECK_THROWS_AS(DecisionTree::parse("(0 1)"), ParseError);
    CHECK_THROWS_AS(DecisionTree::parse("(0 1 0) 1"), ParseError);
    CHECK_THROWS_AS(DecisionTree::parse("2"), ParseError);
    CHECK_THROWS(DecisionTree::parse("(0 (0 0 1) 1)"));
}

TEST_CASE("distribution validation") {
    const auto l0 = DecisionTree::leaf(false);
    const auto l1 = DecisionTree::leaf(true);
    CHECK_THROWS_AS(TreeDistribution(1, {}), Error);
    CHECK_THROWS_AS(TreeDistribution(1, {{Rational(1, 2), l0}}), Error);
    CHECK_THROWS_AS(TreeDistribution(1, {{Rational(3, 2), l0}, {Rational(-1, 2), l1}}), Error);
    CHECK_THROWS_AS(TreeDistribution::single(1, single_var(3)), Error);
    CHECK_NOTHROW(TreeDistribution(1, {{Rational(1, 3), l0}, {Rational(2, 3), l1}}));
}

TEST_CASE("acceptance profile examples") {
    const auto all_one = acceptance_profile(TreeDistribution::single(3, DecisionTree::leaf(true)));
    for (const auto& v : all_one.values()) CHECK(v == 1);

    const auto coin = acceptance_profile(
        TreeDistribution::uniform(3, {DecisionTree::leaf(false), DecisionTree::leaf(true)}));
    for (const auto& v : coin.values()) CHECK(v == Rational(1, 2));

    const auto mixed = acceptance_profile(TreeDistribution::uniform(2, {parity_tree(2), parity_tree(2, 0, true)}));
    for (const auto& v : mixed.values()) CHECK(v == Rational(1, 2));
}

TEST_CASE("distribution file round trip") {
    std::istringstream in("# two trees\n1/3\t(0 0 1)\n2/3\t(2 1 0)\n");
    const auto d = read_tree_distribution(in);
    CHECK(d.arity() == 3);
    CHECK(d.entries().size() == 2);
    CHECK(d.max_depth() == 1);
    std::ostringstream out;
    write_tree_distribution(out, d);
    CHECK(out.str() == "1/3\t(0 0 1)\n2/3\t(2 1 0)\n");
    std::istringstream again(out.str());
    CHECK(read_tree_distribution(again, 5).arity() == 5);

    std::istringstream bad("1/2 (0 0 1)\n");
    CHECK_THROWS_AS(read_tree_distribution(bad), ParseError);
}

TEST_CASE("variable usage") {
    const auto one = variable_usage(TreeDistribution::single(4, single_var(0)));
    CHECK(one == std::vector<Rational>{1, 0, 0, 0});

    std::vector<DecisionTree> singles;
    for (std::size_t i = 0; i < 5; ++i) singles.push_back(single_var(i));
    for (const auto& u : variable_usage(TreeDistribution::uniform(5, singles))) CHECK(u == Rational(1, 5));
}

TEST_CASE("usage of shallow trees sums to at most 2^d") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 6 + oracle::bit(trial, 0);
        const int d = 1 + static_cast<int>(uniform_below(rng, 3));
        std::vector<DecisionTree> trees;
        for (int i = 0; i < 4; ++i) trees.push_back(oracle::random_tree(n, d, rng));
        const auto usage = variable_usage(TreeDistribution::uniform(n, trees));
        Rational sum = 0;
        for (const auto& u : usage) sum += u;
        CHECK(sum <= Rational(1 << d));
    }
}

TEST_CASE("shallow mixtures leave some variable rarely used") {
    // depth <= c log2 n forces min usage <= n^c / n, for several c
    oracle::Rng rng(77);
    for (double c : {0.5, 0.75, 0.9}) {
        for (std::size_t n : {16u, 24u}) {
            const int d = static_cast<int>(std::floor(c * std::log2(static_cast<double>(n))));
            std::vector<DecisionTree> trees;
            for (int i = 0; i < 6; ++i) trees.push_back(oracle::random_tree(n, d, rng));
            const auto usage = variable_usage(TreeDistribution::uniform(n, trees));
            const Rational lowest = *std::min_element(usage.begin(), usage.end());
            CHECK(to_double(lowest) <= std::pow(static_cast<double>(n), c) / static_cast<double>(n) + 1e-12);
        }
    }
}

TEST_CASE("success set") {
    const auto or4 = make_or(4);
    CHECK(success_set(AcceptanceProfile::of(or4), or4).size() == 16);
    AcceptanceProfile half(4, std::vector<Rational>(16, Rational(1, 2)));
    CHECK(success_set(half, make_parity(4)).empty());
    CHECK(success_set(AcceptanceProfile::of(or4), make_parity(4)).size() == 9);
    AcceptanceProfile third(1, {Rational(1, 3), Rational(2, 3)});
    CHECK(success_set(third, make_parity(1)).size() == 2);
    CHECK_THROWS_AS(success_set(half, make_parity(3)), Error);
}

TEST_CASE("shallow distributions are uncorrelated with parity") {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 7);
        std::vector<TreeDistribution::Entry> entries;
        const int count = 1 + static_cast<int>(uniform_below(rng, 4));
        Rational left = 1;
        for (int i = 0; i < count; ++i) {
            const Rational w = i + 1 == count ? left : left / 2;
            left -= w;
            entries.emplace_back(w, oracle::random_tree(n, static_cast<int>(n) - 1, rng));
        }
        const TreeDistribution d(n, std::move(entries));
        REQUIRE(d.max_depth() < static_cast<int>(n));
        CHECK(correlation_with_parity(acceptance_profile(d)) == 0);
    }
}

TEST_CASE("exact_D examples") {
    for (std::size_t n = 0; n <= 6; ++n) {
        CHECK(exact_D(make_parity(n)).depth == static_cast<int>(n));
        CHECK(exact_D(make_const(n, true)).depth == 0);
        CHECK(exact_D(make_or(n)).depth == static_cast<int>(n));
    }
    const auto t2 = exact_D(andor::make_andor(2));
    CHECK(t2.depth == 4);
    CHECK(t2.tree.to_truth_table(4) == andor::make_andor(2));
}

TEST_CASE("exact_D ties go to the lowest variable") {
    const auto r = exact_D(make_or(2));
    CHECK(r.tree.to_string() == "(0 (1 0 1) 1)");
    // f = x2: querying x1 is useless
    const auto x2 = TruthTable::from_function(3, [](InputWord x) { return ((x >> 1) & 1U) != 0; });
    CHECK(exact_D(x2).tree.to_string() == "(1 0 1)");
}

TEST_CASE("exact_D against minimax and degree") {
    oracle::Rng rng(31);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 60; ++trial) {
            const auto f = oracle::random_function(n, rng);
            const auto r = exact_D(f);
            REQUIRE(r.depth == oracle::decision_depth_brute(f));
            REQUIRE(r.tree.depth() == r.depth);
            REQUIRE(r.tree.to_truth_table(n) == f);
            CHECK(degree_mobius(f) <= r.depth);
            CHECK(r.depth <= static_cast<int>(n));
        }
    }
}

TEST_CASE("exact_D is monotone under restriction") {
    oracle::Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 5;
        const auto f = oracle::random_function(n, rng);
        const int d = exact_D(f).depth;
        for (std::size_t i = 0; i < n; ++i) {
            for (int b = 0; b < 2; ++b) {
                const auto g = TruthTable::from_function(n - 1, [&](InputWord y) {
                    const InputWord low = y & ((InputWord{1} << i) - 1);
                    const InputWord high = (y >> i) << (i + 1);
                    return f(low | high | (static_cast<InputWord>(b) << i));
                });
                CHECK(exact_D(g).depth <= d);
            }
        }
    }
}

TEST_CASE("exact_D cap") {
    Limits l = limits();
    const Limits saved = l;
    l.d_cap = 3;
    set_limits(l);
    CHECK_THROWS_AS(exact_D(make_or(4)), CapError);
    set_limits(saved);
}
