#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "weakpar/boolfn.hpp"
#include "weakpar/dtree.hpp"
#include "weakpar/random.hpp"
#include "weakpar/rational.hpp"

/// The complete binary AND/OR tree T_d on n = 2^d leaves. A gate whose
/// subtree has height h combines its children with AND when h is odd and OR
/// when h is even.
namespace weakpar::andor {

using BitSource = std::function<bool(std::size_t)>;

inline bool is_and_gate(std::size_t height) { return (height & 1U) != 0; }

/// Number of leaves, 2^d; throws Error past d = 63.
std::uint64_t leaf_count(std::size_t depth);

/// Truth table of T_d; requires 2^d <= MAX_ARITY.
TruthTable make_andor(std::size_t depth);

/// Value of T_d on an explicit input, no query accounting.
bool value(std::size_t depth, const BitSource& bits);

/// Left-to-right short-circuit evaluation.
bool eval_deterministic(std::size_t depth, InstrumentedOracle& oracle);

/// Zero-error randomized evaluation: at every gate a uniformly random child
/// goes first and the other is skipped when the first settles the gate.
bool randomized_eval(std::size_t depth, InstrumentedOracle& oracle, Rng& rng);

/// Exact expected query count of randomized_eval on X.
Rational expected_queries_exact(std::size_t depth, InputWord x);
Rational expected_queries_exact(std::size_t depth, const BitSource& bits);

/// Worst-case expected query counts over inputs forcing a subtree of height
/// d to 0 (w0) or 1 (w1).
struct WorstCaseRow {
    Rational w0;
    Rational w1;
    Rational worst() const { return w0 > w1 ? w0 : w1; }
};

class WorstCaseTable {
public:
    explicit WorstCaseTable(std::vector<WorstCaseRow> rows) : rows_(std::move(rows)) {}
    std::size_t max_depth() const noexcept { return rows_.size() - 1; }
    const WorstCaseRow& operator[](std::size_t d) const { return rows_.at(d); }
    /// W(d+2)/W(d) in double precision.
    double two_level_ratio(std::size_t d) const;

private:
    std::vector<WorstCaseRow> rows_;
};

/// Exact dynamic program; d_max <= 64.
WorstCaseTable worst_case_table(std::size_t d_max);

/// ((1 + sqrt 33) / 4)^2, the limit of W(d+2)/W(d).
double growth_constant_squared();

/// An input on which T_d evaluates to `target` and randomized_eval attains
/// the worst-case expectation of the table row.
std::vector<bool> worst_case_input(std::size_t depth, bool target);

/// |{X : T_d(X) = Par(X)}|; requires 2^d <= MAX_ARITY.
std::uint64_t parity_agreement(std::size_t depth);

}  // namespace weakpar::andor
