#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakpar/boolfn.hpp"
#include "weakpar/dtree.hpp"
#include "weakpar/random.hpp"
#include "weakpar/rational.hpp"

namespace weakpar {

enum class Flavor { kOr, kAndOr };

Flavor parse_flavor(std::string_view text);
std::string_view to_string(Flavor f);

/// A total Boolean function used as a parity guess, together with the query
/// algorithm that evaluates it.
///
/// `evaluate` is the deterministic classical evaluation (worst-case query
/// accounting); `evaluate_randomized` is the zero-error randomized one, which
/// differs from it only for AND/OR trees (random child first).
class Guesser {
public:
    using BitSource = std::function<bool(std::size_t)>;

    class Impl;

    static Guesser constant(std::size_t n, bool value);
    static Guesser or_function(std::size_t n);
    /// T_d on 2^d bits.
    static Guesser andor_tree(std::size_t depth);
    /// Exact parity; reads every bit.
    static Guesser parity(std::size_t n);
    /// Arbitrary table; reads every bit.
    static Guesser table_lookup(TruthTable t, std::string label = "table");

    Guesser negated() const;

    std::size_t arity() const;
    const std::string& label() const;

    bool evaluate(InstrumentedOracle& oracle) const;
    bool evaluate_randomized(InstrumentedOracle& oracle, Rng& rng) const;

    bool value(InputWord x) const;
    bool value(const BitSource& bits) const;

    /// Expected number of queries to each input bit made by evaluate_randomized.
    std::vector<Rational> expected_queries_per_bit(const BitSource& bits) const;
    Rational expected_queries(const BitSource& bits) const;
    Rational expected_queries(InputWord x) const;

    /// Materialized function; requires arity <= MAX_ARITY.
    TruthTable table() const;

    const Impl& impl() const { return *impl_; }

private:
    explicit Guesser(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    friend Guesser compose_blocks(const Guesser& inner, std::size_t k, std::size_t total_arity);

    std::shared_ptr<const Impl> impl_;
};

/// Guesser on k*m bits: X -> inner(Par(Y_1), ..., Par(Y_m)) with consecutive
/// blocks Y_j of k bits. Every inner query costs k outer queries.
Guesser compose_blocks(const Guesser& inner, std::size_t k);

/// As above on `total_arity` >= k*m bits; the leftover bits join the last block.
Guesser compose_blocks(const Guesser& inner, std::size_t k, std::size_t total_arity);

/// OR (agreement 2^{n-1}+1 with parity), or for the AND/OR flavor T_d when
/// d is even and its negation when d is odd (n = 2^d).
Guesser weak_guesser_minimal_eps(std::size_t n, Flavor flavor);

/// Guesser agreeing with f on at least 2^{n-1}+1 inputs: the majority
/// constant when f is unbalanced, otherwise OR / T_d or its negation.
/// The AND/OR flavor needs n = 2^d with d >= 2.
Guesser weak_any(const TruthTable& f, Flavor flavor);

struct CompositionSchedule {
    std::size_t outer_arity = 0;
    std::size_t inner_arity = 0;
    std::size_t block_size = 0;
    Flavor flavor = Flavor::kOr;
    Rational eps_requested;
    /// 2^{-inner_arity}; never smaller than eps_requested.
    Rational eps_achieved;
    /// Bits beyond block_size * inner_arity, absorbed by the last block.
    std::size_t leftover() const { return outer_arity - block_size * inner_arity; }
};

/// Inner arity m is the largest integer with 2^{-m} >= eps (rounded down to a
/// power of two for the AND/OR flavor); k = floor(N/m). Requires
/// 2^{-N} <= eps <= 1/2.
CompositionSchedule schedule_for(std::size_t n, const Rational& eps, Flavor flavor);

/// The composed guesser a schedule describes.
Guesser build_guesser(const CompositionSchedule& s);

struct WeakParityReport {
    std::size_t n = 0;
    Rational epsilon;
    std::uint64_t success_count = 0;
    Rational success_fraction;
    std::uint64_t worst_case_queries = 0;
    Rational expected_queries_worst_input;
    /// False when n exceeds MAX_ARITY and the counts come from sampling.
    bool exact = true;
    std::uint64_t samples = 0;
    bool passed = false;
};

struct VerifyOptions {
    std::uint64_t samples = 1U << 16;
    std::uint64_t seed = 1;
};

/// Exhaustive verification of |A| >= (1/2 + eps) 2^n, A being the inputs on
/// which g agrees with parity. Above MAX_ARITY a sampled estimate is returned
/// with exact = false.
WeakParityReport verify_weak(const Guesser& g, const Rational& eps, const VerifyOptions& opts = {});

/// Masks X with a uniform Y, evaluates g on X xor Y (each query to the masked
/// input is one query to `oracle`) and returns Par(Y) xor g(X xor Y).
bool random_self_reduce(const Guesser& g, InstrumentedOracle& oracle, Rng& rng);
bool random_self_reduce(const Guesser& g, InputWord x, Rng& rng);

/// Exact success probability of random_self_reduce on X, averaging over all masks.
Rational rsr_success_probability(const Guesser& g, InputWord x);

using RandomizedBit = std::function<bool(Rng&)>;

/// Majority vote of r independent runs; r must be odd.
RandomizedBit amplify_majority(RandomizedBit algorithm, std::uint64_t r);

/// Pr[majority of r independent Bernoulli(p) trials is 1]; r odd.
Rational majority_success_probability(const Rational& p, std::uint64_t r);

/// Smallest odd integer >= multiplier * log2(1/eps).
std::uint64_t amplification_count(const Rational& eps, double multiplier = 18.0);

/// With probability 2*eps read all n bits and output their parity; otherwise
/// output a fair coin without querying.
class ReadAllOrGuess {
public:
    ReadAllOrGuess(std::size_t n, Rational eps);

    bool run(InstrumentedOracle& oracle, Rng& rng) const;
    /// Exact Pr[output = Par(X)], by enumerating the procedure's branches.
    Rational success_probability(InputWord x) const;
    Rational expected_queries(InputWord x) const;

    std::size_t arity() const { return n_; }
    const Rational& eps() const { return eps_; }

private:
    std::size_t n_;
    Rational eps_;
};

}  // namespace weakpar
