#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "weakpar/boolfn.hpp"

namespace weakpar {

/// Induced subgraph of the hypercube {0,1}^n, stored as a membership table.
class VertexSet {
public:
    explicit VertexSet(std::size_t arity = 0) : members_(arity) {}
    explicit VertexSet(TruthTable membership)
        : members_(std::move(membership)), size_(members_.count_ones()) {}

    static VertexSet full(std::size_t n) { return VertexSet(make_const(n, true)); }
    static VertexSet odd_weight(std::size_t n) { return VertexSet(make_parity(n)); }
    static VertexSet from_list(std::size_t n, const std::vector<InputWord>& vertices);

    std::size_t arity() const noexcept { return members_.arity(); }
    std::uint64_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool contains(InputWord v) const noexcept { return members_(v); }

    const TruthTable& membership() const noexcept { return members_; }

    VertexSet with(InputWord v) const;
    VertexSet complement() const { return VertexSet(~members_); }
    std::vector<InputWord> vertices() const;

    /// Neighbours of v (member or not) that lie in the set.
    int degree_of(InputWord v) const noexcept;

    friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.members_ == b.members_; }

private:
    TruthTable members_;
    std::uint64_t size_ = 0;
};

/// Maximum degree of the induced subgraph; 0 for empty or singleton sets.
int max_degree(const VertexSet& g);

/// Same quantity via word-level shifted-mask intersections and bit-sliced
/// counters.
int max_degree_shifted(const VertexSet& g);

/// Vertex of A attaining max degree (lowest index on ties) and its degree.
/// Throws Error on an empty set.
std::pair<InputWord, int> hardest_vertex(const VertexSet& a);

struct LambdaCertificate {
    std::size_t n = 0;
    int value = 0;
    VertexSet witness;
    /// True only when `value` was proved minimal by exhaustive search.
    bool exact = false;
};

/// Minimum max-degree over induced subgraphs with 2^{n-1}+1 vertices, by
/// branch and bound. Requires n <= LAMBDA_EXACT_CAP.
LambdaCertificate lambda_exact(std::size_t n);

/// Closed-form lower bound (1/2)log2 n - (1/2)log2 log2 n + 1/2, n >= 2.
double lambda_lower_bound(std::size_t n);

struct AnnealingOptions {
    std::uint64_t iterations = 200000;
    std::uint64_t seed = 1;
    double initial_temperature = 2.0;
    double final_temperature = 0.02;
};

/// Simulated-annealing witness; its value is an upper bound, never flagged exact.
LambdaCertificate lambda_upper_search(std::size_t n, const AnnealingOptions& opts);

/// (Delta(G), Delta(complement)). Rejects |G| = 2^{n-1}.
std::pair<int, int> gotsman_linial_check(const VertexSet& g);

/// Throws Error unless the certificate's witness has 2^{n-1}+1 vertices and
/// max degree equal to the claimed value.
void verify_certificate(const LambdaCertificate& c);

}  // namespace weakpar
