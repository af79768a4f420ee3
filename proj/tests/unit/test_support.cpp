#include <doctest.h>

#include <numeric>
#include <set>

#include "weakpar/config.hpp"
#include "weakpar/parallel.hpp"
#include "weakpar/random.hpp"
#include "weakpar/rational.hpp"

using namespace weakpar;

TEST_CASE("parse_rational accepts integers and fractions") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("1/4") == Rational(1, 4));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("2/4") == Rational(1, 2));
}

TEST_CASE("parse_rational rejects junk") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("a/b"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
}

TEST_CASE("to_string is canonical") {
    CHECK(to_string(ratio(6, 8)) == "3/4");
    CHECK(to_string(ratio(4, 2)) == "2");
    CHECK(to_string(Rational(0)) == "0");
    CHECK(to_string(Rational(-1, 3)) == "-1/3");
}

TEST_CASE("ratio reduces") {
    CHECK(ratio(6, 8) == Rational(3, 4));
    CHECK(ratio(-4, 2) == -2);
    CHECK(ratio(0, 7) == 0);
}

TEST_CASE("pow2 handles negative exponents") {
    CHECK(pow2(0) == 1);
    CHECK(pow2(10) == 1024);
    CHECK(pow2(-4) == Rational(1, 16));
    CHECK(to_double(pow2(-1)) == doctest::Approx(0.5));
}

TEST_CASE("parse_max_arity") {
    CHECK(parse_max_arity("20") == 20);
    CHECK(parse_max_arity("32") == 32);
    CHECK_THROWS_AS(parse_max_arity("33"), CapError);
    CHECK_THROWS_AS(parse_max_arity("x"), ParseError);
    CHECK_THROWS_AS(parse_max_arity(""), ParseError);
}

TEST_CASE("require_cap reports the cap") {
    CHECK_NOTHROW(require_cap("BS_CAP", 12, 12));
    try {
        require_cap("BS_CAP", 13, 12);
        FAIL("expected CapError");
    } catch (const CapError& e) {
        CHECK(e.cap() == "BS_CAP");
        CHECK(e.value() == 13);
        CHECK(e.limit() == 12);
    }
}

TEST_CASE("set_limits round trip") {
    const Limits saved = limits();
    Limits l = saved;
    l.bs_cap = 5;
    set_limits(l);
    CHECK(limits().bs_cap == 5);
    set_limits(saved);
    CHECK(limits().bs_cap == saved.bs_cap);
}

TEST_CASE("uniform_below stays in range and hits every value") {
    Rng rng(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = uniform_below(rng, 5);
        REQUIRE(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("random streams are reproducible") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(uniform_word(a, 17) == uniform_word(b, 17));
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 3) == derive_seed(1, 3));
}

TEST_CASE("uniform_unit in [0,1)") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform_unit(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("parallel_reduce does not depend on the thread count") {
    const std::uint64_t count = 100003;
    auto map = [](std::uint64_t b, std::uint64_t e) {
        std::uint64_t s = 0;
        for (std::uint64_t i = b; i < e; ++i) s += i * i % 7;
        return s;
    };
    auto fold = [](std::uint64_t a, std::uint64_t b) { return a + b; };
    const std::size_t saved = thread_count();
    set_thread_count(1);
    const auto one = parallel_reduce<std::uint64_t>(count, 0, map, fold);
    set_thread_count(4);
    const auto four = parallel_reduce<std::uint64_t>(count, 0, map, fold);
    set_thread_count(saved);
    CHECK(one == four);
    CHECK(one == map(0, count));
}

TEST_CASE("parallel_reduce propagates exceptions") {
    const std::size_t saved = thread_count();
    set_thread_count(3);
    auto map = [](std::uint64_t b, std::uint64_t) -> int {
        if (b > 0) throw Error("boom");
        return 0;
    };
    CHECK_THROWS_AS(parallel_reduce<int>(1 << 16, 0, map, [](int a, int b) { return a + b; }), Error);
    set_thread_count(saved);
}
