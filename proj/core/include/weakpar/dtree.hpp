#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weakpar/boolfn.hpp"
#include "weakpar/hypercube.hpp"
#include "weakpar/rational.hpp"

namespace weakpar {

/// Query access to a hidden input that counts and records every query.
class InstrumentedOracle {
public:
    using BitSource = std::function<bool(std::size_t)>;

    /// Input word X on `arity` bits.
    InstrumentedOracle(std::size_t arity, InputWord x);
    /// Implicit input: bit i is source(i). Used when n is too large for a word.
    InstrumentedOracle(std::size_t arity, BitSource source);

    std::size_t arity() const noexcept { return arity_; }

    /// Returns x_{i+1} and charges one query.
    bool query(std::size_t i);

    std::uint64_t query_count() const noexcept { return query_count_; }
    bool was_queried(std::size_t i) const { return queried_.at(i); }
    std::size_t distinct_queries() const noexcept { return distinct_; }

private:
    std::size_t arity_;
    BitSource source_;
    std::uint64_t query_count_ = 0;
    std::size_t distinct_ = 0;
    std::vector<bool> queried_;
};

/// Immutable deterministic decision tree. Subtrees are shared, so copies are
/// cheap. No variable repeats on any root-to-leaf path.
class DecisionTree {
public:
    static DecisionTree leaf(bool value);
    /// Queries variable `var`; `if_zero` / `if_one` are the children. Throws
    /// Error if `var` already occurs in either child.
    static DecisionTree query(std::size_t var, const DecisionTree& if_zero, const DecisionTree& if_one);

    bool is_leaf() const noexcept;
    bool leaf_value() const;
    std::size_t variable() const;
    DecisionTree child(bool bit) const;

    int depth() const noexcept;
    /// Bit i set iff x_{i+1} appears anywhere in the tree.
    std::uint64_t variable_mask() const noexcept;
    /// Smallest arity the tree can run on.
    std::size_t min_arity() const noexcept;
    std::size_t node_count() const noexcept;

    /// Leaf bit reached on the input; no query accounting.
    bool evaluate(InputWord x) const;
    TruthTable to_truth_table(std::size_t arity) const;

    /// "(i LEFT RIGHT)", "0" or "1".
    std::string to_string() const;
    static DecisionTree parse(std::string_view text);

    friend bool operator==(const DecisionTree& a, const DecisionTree& b);

private:
    struct Node;
    explicit DecisionTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Runs the tree against the oracle; each internal node costs one query.
bool eval(const DecisionTree& t, InstrumentedOracle& oracle);

/// Finite randomized algorithm: positive rational weights summing to exactly 1.
class TreeDistribution {
public:
    using Entry = std::pair<Rational, DecisionTree>;

    TreeDistribution(std::size_t arity, std::vector<Entry> entries);

    static TreeDistribution single(std::size_t arity, DecisionTree t);
    static TreeDistribution uniform(std::size_t arity, const std::vector<DecisionTree>& trees);

    std::size_t arity() const noexcept { return arity_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    int max_depth() const noexcept;

private:
    std::size_t arity_;
    std::vector<Entry> entries_;
};

/// Lines of "weight<TAB>tree"; '#' starts a comment line. With arity 0 the
/// arity is inferred from the largest variable index.
TreeDistribution read_tree_distribution(std::istream& in, std::size_t arity = 0);
void write_tree_distribution(std::ostream& out, const TreeDistribution& d);

AcceptanceProfile acceptance_profile(const TreeDistribution& d);

/// Pr_{T~D}[x_{i+1} appears in T], one entry per variable.
std::vector<Rational> variable_usage(const TreeDistribution& d);

/// {X : |p(X) - target(X)| <= 1/3}.
VertexSet success_set(const AcceptanceProfile& p, const TruthTable& target);

struct ExactDResult {
    int depth = 0;
    DecisionTree tree = DecisionTree::leaf(false);
};

/// Minimax-optimal deterministic query complexity and a witness tree, by
/// dynamic programming over all restrictions in {0,1,free}^n. Ties go to the
/// lowest variable index. Requires arity <= D_CAP.
ExactDResult exact_D(const TruthTable& f);

}  // namespace weakpar
