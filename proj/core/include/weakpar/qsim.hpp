#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "weakpar/boolfn.hpp"
#include "weakpar/random.hpp"

/// Index-register statevector simulation of the quantum query model with a
/// phase oracle |i> -> (-1)^{x_i} |i>.
namespace weakpar::qsim {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

class StateVector {
public:
    explicit StateVector(std::size_t dim);

    static StateVector uniform(std::size_t dim);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return amps_.size(); }
    Amplitude& operator[](std::size_t i) { return amps_[i]; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    double probability(std::size_t i) const { return std::norm(amps_[i]); }

    /// Throws Error when the squared norm drifts more than kNormTolerance from 1.
    void check_normalized() const;

    /// Inversion about the mean (Grover diffusion).
    void diffuse();

    /// Samples a basis index from the Born distribution.
    std::size_t measure(Rng& rng) const;

private:
    std::vector<Amplitude> amps_;
};

/// Hidden input X with exact query accounting.
class QueryOracle {
public:
    QueryOracle(std::size_t n, InputWord x);

    std::size_t arity() const noexcept { return n_; }
    InputWord input() const noexcept { return x_; }
    std::uint64_t query_count() const noexcept { return queries_; }

    /// One query: phase flip on every index i with x_i = 1.
    void apply_phase(StateVector& psi);
    /// One query: classical read of x_i.
    bool read(std::size_t i);

private:
    std::size_t n_;
    InputWord x_;
    std::uint64_t queries_ = 0;
};

/// Number of independent Grover trials per call.
inline constexpr std::uint64_t kGroverTrials = 4;

/// ceil(sqrt(n)); iteration counts are drawn uniformly from [0, this).
std::uint64_t grover_iteration_range(std::size_t n);

/// Query budget 4(ceil(sqrt n) + 1).
std::uint64_t grover_query_budget(std::size_t n);

/// Bounded-error OR: kGroverTrials trials, each running r uniform Grover
/// iterations, measuring an index and verifying it with one classical query.
/// Outputs 1 iff some trial verifies, so OR(X) = 0 always yields 0.
bool grover_or(std::size_t n, QueryOracle& oracle, Rng& rng);

/// Probability that one trial with exactly r iterations measures a marked index.
double grover_trial_success(std::size_t n, InputWord x, std::uint64_t r);

struct GroverExact {
    /// Pr[output = OR(X)], from exact statevector probabilities.
    double success_probability = 0;
    /// Pr[output = 1].
    double accept_probability = 0;
    /// Largest query count any run can make on this input.
    std::uint64_t worst_case_queries = 0;
    double expected_queries = 0;
};

/// Exact analysis of grover_or on X, enumerating the random iteration counts
/// and measurement outcomes instead of sampling.
GroverExact grover_or_exact(std::size_t n, InputWord x);

/// Distribution over the two outcomes of one Deutsch-Jozsa pair query;
/// outcome b means x_i xor x_j = b. Uses exactly one oracle query.
std::array<double, 2> dj_pair_distribution(QueryOracle& oracle, std::size_t i, std::size_t j);

/// x_i xor x_j with one query. Throws Error for i == j.
bool dj_pair(QueryOracle& oracle, std::size_t i, std::size_t j);

struct ParityRun {
    bool output = false;
    /// Probability of the returned output (product over the pair queries).
    double probability = 1;
};

/// Par(X) in ceil(n/2) queries: one DJ query per pair (x1,x2),(x3,x4),...
/// and a classical read of the last bit when n is odd.
ParityRun exact_parity_quantum(std::size_t n, QueryOracle& oracle);

}  // namespace weakpar::qsim
