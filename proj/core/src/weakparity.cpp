#include "weakpar/weakparity.hpp"

#include <algorithm>
#include <cmath>

#include "weakpar/andor.hpp"
#include "weakpar/config.hpp"
#include "weakpar/parallel.hpp"

namespace weakpar {

Flavor parse_flavor(std::string_view text) {
    if (text == "or") return Flavor::kOr;
    if (text == "andor") return Flavor::kAndOr;
    throw Error("unknown flavor '" + std::string(text) + "' (expected or|andor)");
}

std::string_view to_string(Flavor f) { return f == Flavor::kOr ? "or" : "andor"; }

// ---------------------------------------------------------------------------
// Guesser implementations

class Guesser::Impl {
public:
    Impl(std::size_t arity, std::string label) : arity_(arity), label_(std::move(label)) {}
    virtual ~Impl() = default;

    std::size_t arity() const { return arity_; }
    const std::string& label() const { return label_; }

    /// rng == nullptr selects the deterministic evaluation.
    virtual bool run(InstrumentedOracle& oracle, Rng* rng) const = 0;
    virtual bool value(const BitSource& bits) const = 0;
    virtual std::vector<Rational> expected_per_bit(const BitSource& bits) const = 0;

private:
    std::size_t arity_;
    std::string label_;
};

namespace {

using BitSource = Guesser::BitSource;

class ConstantImpl final : public Guesser::Impl {
public:
    ConstantImpl(std::size_t n, bool b) : Impl(n, b ? "const1" : "const0"), b_(b) {}
    bool run(InstrumentedOracle&, Rng*) const override { return b_; }
    bool value(const BitSource&) const override { return b_; }
    std::vector<Rational> expected_per_bit(const BitSource&) const override {
        return std::vector<Rational>(arity(), Rational(0));
    }

private:
    bool b_;
};

class OrImpl final : public Guesser::Impl {
public:
    explicit OrImpl(std::size_t n) : Impl(n, "or" + std::to_string(n)) {}
    bool run(InstrumentedOracle& oracle, Rng*) const override {
        for (std::size_t i = 0; i < arity(); ++i) {
            if (oracle.query(i)) {
                return true;
            }
        }
        return false;
    }
    bool value(const BitSource& bits) const override {
        for (std::size_t i = 0; i < arity(); ++i) {
            if (bits(i)) {
                return true;
            }
        }
        return false;
    }
    std::vector<Rational> expected_per_bit(const BitSource& bits) const override {
        std::vector<Rational> out(arity(), Rational(0));
        for (std::size_t i = 0; i < arity(); ++i) {
            out[i] = 1;
            if (bits(i)) {
                break;
            }
        }
        return out;
    }
};

class AndOrImpl final : public Guesser::Impl {
public:
    explicit AndOrImpl(std::size_t depth)
        : Impl(static_cast<std::size_t>(andor::leaf_count(depth)), "T" + std::to_string(depth)), depth_(depth) {}

    bool run(InstrumentedOracle& oracle, Rng* rng) const override {
        return rng == nullptr ? andor::eval_deterministic(depth_, oracle) : andor::randomized_eval(depth_, oracle, *rng);
    }
    bool value(const BitSource& bits) const override { return andor::value(depth_, bits); }

    std::vector<Rational> expected_per_bit(const BitSource& bits) const override {
        std::vector<Rational> out(arity(), Rational(0));
        spread(depth_, 0, Rational(1), bits, out);
        return out;
    }

private:
    // Pr[a leaf is read] under random-child-first, pushed down the tree.
    static void spread(std::size_t height, std::size_t offset, const Rational& reach, const BitSource& bits,
                       std::vector<Rational>& out) {
        if (height == 0) {
            out[offset] += reach;
            return;
        }
        const std::size_t half = std::size_t{1} << (height - 1);
        const bool absorbing = !andor::is_and_gate(height);
        const bool left = andor::value(height - 1, [&](std::size_t i) { return bits(offset + i); });
        const bool right = andor::value(height - 1, [&](std::size_t i) { return bits(offset + half + i); });
        const Rational half_reach = reach / 2;
        // a child runs if it goes first, or goes second and the first did not settle the gate
        spread(height - 1, offset, right == absorbing ? half_reach : reach, bits, out);
        spread(height - 1, offset + half, left == absorbing ? half_reach : reach, bits, out);
    }

    std::size_t depth_;
};

class ReadAllImpl final : public Guesser::Impl {
public:
    ReadAllImpl(std::size_t n, std::string label, std::function<bool(InputWord)> fn)
        : Impl(n, std::move(label)), fn_(std::move(fn)) {}

    bool run(InstrumentedOracle& oracle, Rng*) const override {
        InputWord x = 0;
        for (std::size_t i = 0; i < arity(); ++i) {
            x |= static_cast<InputWord>(oracle.query(i)) << i;
        }
        return fn_(x);
    }
    bool value(const BitSource& bits) const override {
        InputWord x = 0;
        for (std::size_t i = 0; i < arity(); ++i) {
            x |= static_cast<InputWord>(bits(i)) << i;
        }
        return fn_(x);
    }
    std::vector<Rational> expected_per_bit(const BitSource&) const override {
        return std::vector<Rational>(arity(), Rational(1));
    }

private:
    std::function<bool(InputWord)> fn_;
};

class NegatedImpl final : public Guesser::Impl {
public:
    explicit NegatedImpl(std::shared_ptr<const Guesser::Impl> inner)
        : Impl(inner->arity(), "not(" + inner->label() + ")"), inner_(std::move(inner)) {}
    bool run(InstrumentedOracle& oracle, Rng* rng) const override { return !inner_->run(oracle, rng); }
    bool value(const BitSource& bits) const override { return !inner_->value(bits); }
    std::vector<Rational> expected_per_bit(const BitSource& bits) const override {
        return inner_->expected_per_bit(bits);
    }

private:
    std::shared_ptr<const Guesser::Impl> inner_;
};

class ComposedImpl final : public Guesser::Impl {
public:
    ComposedImpl(std::shared_ptr<const Guesser::Impl> inner, std::size_t k, std::size_t total)
        : Impl(total, "compose(" + inner->label() + ",k=" + std::to_string(k) + ")"), inner_(std::move(inner)), k_(k) {}

    bool run(InstrumentedOracle& oracle, Rng* rng) const override {
        InstrumentedOracle blocks(inner_->arity(), [&](std::size_t j) {
            bool p = false;
            for (std::size_t i = block_begin(j); i < block_end(j); ++i) {
                p ^= oracle.query(i);
            }
            return p;
        });
        return inner_->run(blocks, rng);
    }

    bool value(const BitSource& bits) const override { return inner_->value(block_parities(bits)); }

    std::vector<Rational> expected_per_bit(const BitSource& bits) const override {
        const auto inner = inner_->expected_per_bit(block_parities(bits));
        std::vector<Rational> out(arity(), Rational(0));
        for (std::size_t j = 0; j < inner.size(); ++j) {
            for (std::size_t i = block_begin(j); i < block_end(j); ++i) {
                out[i] = inner[j];
            }
        }
        return out;
    }

private:
    std::size_t block_begin(std::size_t j) const { return j * k_; }
    std::size_t block_end(std::size_t j) const { return j + 1 == inner_->arity() ? arity() : (j + 1) * k_; }

    BitSource block_parities(const BitSource& bits) const {
        return [this, &bits](std::size_t j) {
            bool p = false;
            for (std::size_t i = block_begin(j); i < block_end(j); ++i) {
                p ^= bits(i);
            }
            return p;
        };
    }

    std::shared_ptr<const Guesser::Impl> inner_;
    std::size_t k_;
};

BitSource word_source(InputWord x) {
    return [x](std::size_t i) { return ((x >> i) & 1U) != 0; };
}

}  // namespace

Guesser Guesser::constant(std::size_t n, bool value) { return Guesser(std::make_shared<ConstantImpl>(n, value)); }
Guesser Guesser::or_function(std::size_t n) { return Guesser(std::make_shared<OrImpl>(n)); }
Guesser Guesser::andor_tree(std::size_t depth) { return Guesser(std::make_shared<AndOrImpl>(depth)); }

Guesser Guesser::parity(std::size_t n) {
    return Guesser(std::make_shared<ReadAllImpl>(n, "par" + std::to_string(n),
                                                 [](InputWord x) { return parity_of(x) != 0; }));
}

Guesser Guesser::table_lookup(TruthTable t, std::string label) {
    const std::size_t n = t.arity();
    return Guesser(std::make_shared<ReadAllImpl>(n, std::move(label), [t = std::move(t)](InputWord x) { return t(x); }));
}

Guesser Guesser::negated() const { return Guesser(std::make_shared<NegatedImpl>(impl_)); }

std::size_t Guesser::arity() const { return impl_->arity(); }
const std::string& Guesser::label() const { return impl_->label(); }

bool Guesser::evaluate(InstrumentedOracle& oracle) const {
    if (oracle.arity() != arity()) {
        throw Error("guesser arity " + std::to_string(arity()) + " != oracle arity " + std::to_string(oracle.arity()));
    }
    return impl_->run(oracle, nullptr);
}

bool Guesser::evaluate_randomized(InstrumentedOracle& oracle, Rng& rng) const {
    if (oracle.arity() != arity()) {
        throw Error("guesser arity " + std::to_string(arity()) + " != oracle arity " + std::to_string(oracle.arity()));
    }
    return impl_->run(oracle, &rng);
}

bool Guesser::value(InputWord x) const { return impl_->value(word_source(x)); }
bool Guesser::value(const BitSource& bits) const { return impl_->value(bits); }

std::vector<Rational> Guesser::expected_queries_per_bit(const BitSource& bits) const {
    return impl_->expected_per_bit(bits);
}

Rational Guesser::expected_queries(const BitSource& bits) const {
    Rational total = 0;
    for (const auto& q : impl_->expected_per_bit(bits)) {
        total += q;
    }
    return total;
}

Rational Guesser::expected_queries(InputWord x) const { return expected_queries(word_source(x)); }

TruthTable Guesser::table() const {
    return TruthTable::from_function(arity(), [this](InputWord x) { return value(x); });
}

Guesser compose_blocks(const Guesser& inner, std::size_t k) { return compose_blocks(inner, k, k * inner.arity()); }

Guesser compose_blocks(const Guesser& inner, std::size_t k, std::size_t total_arity) {
    if (k == 0) {
        throw Error("compose_blocks: block size must be at least 1");
    }
    if (inner.arity() == 0) {
        throw Error("compose_blocks: inner guesser has no inputs");
    }
    if (total_arity < k * inner.arity()) {
        throw Error("compose_blocks: total arity " + std::to_string(total_arity) + " < k*m = " +
                    std::to_string(k * inner.arity()));
    }
    return Guesser(std::make_shared<ComposedImpl>(inner.impl_, k, total_arity));
}

// ---------------------------------------------------------------------------
// Guesser constructions

namespace {

std::optional<std::size_t> exact_log2(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(__builtin_ctzll(n));
}

}  // namespace

Guesser weak_guesser_minimal_eps(std::size_t n, Flavor flavor) {
    if (flavor == Flavor::kOr) {
        return Guesser::or_function(n);
    }
    const auto d = exact_log2(n);
    if (!d) {
        throw Error("andor flavor needs n to be a power of two, got " + std::to_string(n));
    }
    const Guesser t = Guesser::andor_tree(*d);
    return (*d % 2 == 0) ? t : t.negated();
}

Guesser weak_any(const TruthTable& f, Flavor flavor) {
    const std::size_t n = f.arity();
    std::optional<std::size_t> d;
    if (flavor == Flavor::kAndOr) {
        d = exact_log2(n);
        if (!d || *d < 2) {
            throw Error("weak_any with andor flavor needs n = 2^d with d >= 2, got n = " + std::to_string(n));
        }
    }
    const std::uint64_t ones = f.count_ones();
    if (2 * ones != f.size()) {
        return Guesser::constant(n, 2 * ones > f.size());
    }
    const Guesser base = flavor == Flavor::kOr ? Guesser::or_function(n) : Guesser::andor_tree(*d);
    // base has an odd number of ones, so its agreement with balanced f is odd
    // and one of base / not(base) clears 2^{n-1}.
    if (2 * agreement_count(base.table(), f) > f.size()) {
        return base;
    }
    return base.negated();
}

// ---------------------------------------------------------------------------
// Schedules

CompositionSchedule schedule_for(std::size_t n, const Rational& eps, Flavor flavor) {
    if (n == 0 || eps > Rational(1, 2) || eps < pow2(-static_cast<long>(n))) {
        throw Error("schedule_for: eps " + to_string(eps) + " outside [2^-" + std::to_string(n) + ", 1/2]");
    }
    const Rational inverse = 1 / eps;
    std::size_t m = 1;
    while (m < n && pow2(static_cast<long>(m) + 1) <= inverse) {
        ++m;
    }
    if (flavor == Flavor::kAndOr) {
        std::size_t p = 1;
        while (2 * p <= m) {
            p *= 2;
        }
        m = p;
    }
    CompositionSchedule s;
    s.outer_arity = n;
    s.inner_arity = m;
    s.block_size = n / m;
    s.flavor = flavor;
    s.eps_requested = eps;
    s.eps_achieved = pow2(-static_cast<long>(m));
    return s;
}

Guesser build_guesser(const CompositionSchedule& s) {
    const Guesser inner = weak_guesser_minimal_eps(s.inner_arity, s.flavor);
    if (s.block_size == 1 && s.leftover() == 0) {
        return inner;
    }
    return compose_blocks(inner, s.block_size, s.outer_arity);
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Tally {
    std::uint64_t agree = 0;
    std::uint64_t worst_queries = 0;
    Rational worst_expected = 0;
};

Tally merge(Tally a, Tally b) {
    a.agree += b.agree;
    a.worst_queries = std::max(a.worst_queries, b.worst_queries);
    if (b.worst_expected > a.worst_expected) {
        a.worst_expected = b.worst_expected;
    }
    return a;
}

Tally tally_input(const Guesser& g, const BitSource& bits, bool parity) {
    InstrumentedOracle oracle(g.arity(), bits);
    const bool out = g.evaluate(oracle);
    Tally t;
    t.agree = out == parity ? 1 : 0;
    t.worst_queries = oracle.query_count();
    t.worst_expected = g.expected_queries(bits);
    return t;
}

}  // namespace

WeakParityReport verify_weak(const Guesser& g, const Rational& eps, const VerifyOptions& opts) {
    const std::size_t n = g.arity();
    WeakParityReport r;
    r.n = n;
    r.epsilon = eps;

    Tally total;
    Rational denominator;
    if (n <= limits().max_arity) {
        const std::uint64_t size = std::uint64_t{1} << n;
        total = parallel_reduce(
            size, Tally{},
            [&](std::uint64_t begin, std::uint64_t end) {
                Tally acc;
                for (InputWord x = begin; x < end; ++x) {
                    acc = merge(std::move(acc), tally_input(g, word_source(x), parity_of(x) != 0));
                }
                return acc;
            },
            merge);
        r.exact = true;
        denominator = Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(n));
    } else {
        if (n > 64) {
            throw CapError("SAMPLED_ARITY", n, 64);
        }
        Rng rng(opts.seed);
        for (std::uint64_t s = 0; s < opts.samples; ++s) {
            const InputWord x = uniform_word(rng, static_cast<unsigned>(n));
            total = merge(std::move(total), tally_input(g, word_source(x), parity_of(x) != 0));
        }
        r.exact = false;
        r.samples = opts.samples;
        denominator = Rational(opts.samples);
    }
    r.success_count = total.agree;
    r.success_fraction = Rational(mpz_class(std::to_string(total.agree))) / denominator;
    r.worst_case_queries = total.worst_queries;
    r.expected_queries_worst_input = total.worst_expected;
    r.passed = r.success_fraction >= Rational(1, 2) + eps;
    return r;
}

// ---------------------------------------------------------------------------
// Random self-reduction and amplification

bool random_self_reduce(const Guesser& g, InstrumentedOracle& oracle, Rng& rng) {
    const std::size_t n = g.arity();
    if (oracle.arity() != n) {
        throw Error("random_self_reduce: oracle arity mismatch");
    }
    if (n > 64) {
        throw CapError("RSR_ARITY", n, 64);
    }
    const InputWord mask = uniform_word(rng, static_cast<unsigned>(n));
    InstrumentedOracle masked(n, [&](std::size_t i) { return oracle.query(i) ^ (((mask >> i) & 1U) != 0); });
    const bool guess = g.evaluate_randomized(masked, rng);
    return (parity_of(mask) != 0) ^ guess;
}

bool random_self_reduce(const Guesser& g, InputWord x, Rng& rng) {
    InstrumentedOracle oracle(g.arity(), x);
    return random_self_reduce(g, oracle, rng);
}

Rational rsr_success_probability(const Guesser& g, InputWord x) {
    const TruthTable t = g.table();
    const bool want = parity_of(x) != 0;
    std::uint64_t wins = 0;
    for (InputWord y = 0; y < t.size(); ++y) {
        if (((parity_of(y) != 0) ^ t(x ^ y)) == want) {
            ++wins;
        }
    }
    return Rational(mpz_class(std::to_string(wins))) / Rational(mpz_class(std::to_string(t.size())));
}

RandomizedBit amplify_majority(RandomizedBit algorithm, std::uint64_t r) {
    if (r % 2 == 0) {
        throw Error("amplify_majority: repetition count must be odd, got " + std::to_string(r));
    }
    return [algorithm = std::move(algorithm), r](Rng& rng) {
        std::uint64_t ones = 0;
        for (std::uint64_t i = 0; i < r; ++i) {
            ones += algorithm(rng) ? 1 : 0;
        }
        return 2 * ones > r;
    };
}

Rational majority_success_probability(const Rational& p, std::uint64_t r) {
    if (r % 2 == 0) {
        throw Error("majority_success_probability: repetition count must be odd, got " + std::to_string(r));
    }
    if (p < 0 || p > 1) {
        throw Error("majority_success_probability: p outside [0,1]");
    }
    const Rational q = 1 - p;
    Rational total = 0;
    mpz_class binom;
    for (std::uint64_t k = r / 2 + 1; k <= r; ++k) {
        mpz_bin_uiui(binom.get_mpz_t(), r, k);
        mpq_class pk;
        mpq_class qk;
        mpz_pow_ui(pk.get_num_mpz_t(), p.get_num_mpz_t(), k);
        mpz_pow_ui(pk.get_den_mpz_t(), p.get_den_mpz_t(), k);
        mpz_pow_ui(qk.get_num_mpz_t(), q.get_num_mpz_t(), r - k);
        mpz_pow_ui(qk.get_den_mpz_t(), q.get_den_mpz_t(), r - k);
        pk.canonicalize();
        qk.canonicalize();
        total += Rational(binom) * pk * qk;
    }
    return total;
}

std::uint64_t amplification_count(const Rational& eps, double multiplier) {
    if (eps <= 0 || eps >= 1) {
        throw Error("amplification_count: eps must lie in (0,1)");
    }
    const double target = multiplier * std::log2(1.0 / to_double(eps));
    auto r = static_cast<std::uint64_t>(std::ceil(target - 1e-12));
    if (r == 0) {
        r = 1;
    }
    if (r % 2 == 0) {
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Read-all-or-guess

ReadAllOrGuess::ReadAllOrGuess(std::size_t n, Rational eps) : n_(n), eps_(std::move(eps)) {
    if (eps_ < 0 || 2 * eps_ > 1) {
        throw Error("ReadAllOrGuess: eps must lie in [0, 1/2]");
    }
    if (n_ > 64) {
        throw CapError("ARITY", n_, 64);
    }
}

bool ReadAllOrGuess::run(InstrumentedOracle& oracle, Rng& rng) const {
    const Rational read_prob = 2 * eps_;
    // Bernoulli(a/b) from a uniform draw below b.
    const mpz_class& b = read_prob.get_den();
    const mpz_class& a = read_prob.get_num();
    bool read_all = false;
    if (b.fits_ulong_p()) {
        read_all = uniform_below(rng, b.get_ui()) < a.get_ui();
    } else {
        read_all = Rational(uniform_unit(rng)) < read_prob;
    }
    if (read_all) {
        bool p = false;
        for (std::size_t i = 0; i < n_; ++i) {
            p ^= oracle.query(i);
        }
        return p;
    }
    return coin(rng);
}

Rational ReadAllOrGuess::success_probability(InputWord x) const {
    const bool parity = parity_of(x) != 0;
    const Rational read_prob = 2 * eps_;
    const Rational guess_prob = 1 - read_prob;
    Rational success = 0;
    // branch 1: read everything, output Par(X)
    success += read_prob;
    // branch 2: output a coin b without queries
    for (int b = 0; b <= 1; ++b) {
        if ((b != 0) == parity) {
            success += guess_prob / 2;
        }
    }
    return success;
}

Rational ReadAllOrGuess::expected_queries(InputWord) const {
    return 2 * eps_ * Rational(static_cast<unsigned long>(n_));
}

}  // namespace weakpar
