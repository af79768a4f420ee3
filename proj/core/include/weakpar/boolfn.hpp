#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "weakpar/config.hpp"
#include "weakpar/rational.hpp"

namespace weakpar {

/// An input X in {0,1}^n packed into a word: bit i holds x_{i+1}.
using InputWord = std::uint64_t;

inline int parity_of(InputWord x) { return __builtin_parityll(x); }
inline int weight_of(InputWord x) { return __builtin_popcountll(x); }

/// Total Boolean function on `arity` bits stored as 2^arity packed bits;
/// bit X holds f(X).
class TruthTable {
public:
    /// Constant-zero function on `arity` bits. Throws CapError above MAX_ARITY.
    explicit TruthTable(std::size_t arity = 0);

    template <typename Fn>
    static TruthTable from_function(std::size_t arity, Fn&& fn) {
        TruthTable t(arity);
        for (InputWord x = 0; x < t.size(); ++x) {
            if (fn(x)) {
                t.set(x, true);
            }
        }
        return t;
    }

    std::size_t arity() const noexcept { return arity_; }
    /// Number of inputs, 2^arity.
    std::uint64_t size() const noexcept { return std::uint64_t{1} << arity_; }

    bool operator()(InputWord x) const noexcept { return ((words_[x >> 6] >> (x & 63)) & 1U) != 0; }
    bool get(InputWord x) const noexcept { return (*this)(x); }
    void set(InputWord x, bool value) noexcept;

    std::uint64_t count_ones() const noexcept;
    bool is_constant() const noexcept;
    bool is_balanced() const noexcept { return 2 * count_ones() == size(); }

    /// Pointwise negation.
    TruthTable operator~() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

    /// ceil(2^n / 4) hex digits, most significant first; bit X is bit position X.
    std::string to_hex() const;
    static TruthTable from_hex(std::size_t arity, std::string_view hex);

private:
    void clear_padding() noexcept;

    std::size_t arity_;
    std::vector<std::uint64_t> words_;
};

/// Two-line text format: "arity=<n>" then the hex string.
void write_truth_table(std::ostream& out, const TruthTable& t);
TruthTable read_truth_table(std::istream& in);

TruthTable make_parity(std::size_t n);
TruthTable make_or(std::size_t n);
TruthTable make_const(std::size_t n, bool value);

/// Per-input acceptance probabilities p(X) in [0,1].
class AcceptanceProfile {
public:
    /// Throws Error if any entry lies outside [0,1] or the length is not 2^arity.
    AcceptanceProfile(std::size_t arity, std::vector<Rational> values);

    /// The 0/1 profile of a deterministic function.
    static AcceptanceProfile of(const TruthTable& t);

    std::size_t arity() const noexcept { return arity_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << arity_; }
    const Rational& operator[](InputWord x) const { return values_[x]; }
    const std::vector<Rational>& values() const noexcept { return values_; }

private:
    std::size_t arity_;
    std::vector<Rational> values_;
};

/// Degree of the unique multilinear polynomial representing f, by integer
/// Moebius inversion over the subset lattice.
int degree_mobius(const TruthTable& f);

/// Multilinear coefficients c_S indexed by subset mask S.
std::vector<std::int64_t> multilinear_coefficients(const TruthTable& f);

/// Largest dimension of a subcube whose even- and odd-weight halves contain
/// different numbers of 1-inputs. Requires arity <= SUBCUBE_CAP.
int degree_subcube(const TruthTable& f);

int sensitivity(const TruthTable& f);

/// Exact block sensitivity. Requires arity <= BS_CAP.
int block_sensitivity(const TruthTable& f);

/// Block sensitivity at a single input.
int block_sensitivity_at(const TruthTable& f, InputWord x);

/// |{X : f(X) = g(X)}|. Throws Error on arity mismatch.
std::uint64_t agreement_count(const TruthTable& f, const TruthTable& g);

/// Sum over X of (p(X) - 1/2)(Par(X) - 1/2), exactly.
Rational correlation_with_parity(const AcceptanceProfile& p);
Rational correlation_with_parity(const TruthTable& f);

/// Lowest-mask subset S with |S| = deg(f) and nonzero coefficient.
/// Throws Error for constant f.
std::uint64_t max_monomial(const TruthTable& f);

/// Fixes every variable outside max_monomial(f) to 0; the result is a
/// function of the monomial's variables in increasing index order.
TruthTable restrict_to_max_monomial(const TruthTable& f);

struct MeasureReport {
    int degree = 0;
    int sensitivity = 0;
    int block_sensitivity = 0;
    bool balanced = false;
};

/// All of the above; requires arity <= BS_CAP.
MeasureReport measure(const TruthTable& f);

}  // namespace weakpar
