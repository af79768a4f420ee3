#include "weakpar/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

#include "weakpar/config.hpp"

namespace weakpar {

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(std::size_t arity) : arity_(arity) {
    require_cap("MAX_ARITY", arity, limits().max_arity);
    words_.assign(arity < 6 ? 1 : (std::size_t{1} << (arity - 6)), 0);
}

void TruthTable::set(InputWord x, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (value) {
        words_[x >> 6] |= bit;
    } else {
        words_[x >> 6] &= ~bit;
    }
}

std::uint64_t TruthTable::count_ones() const noexcept {
    std::uint64_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::uint64_t>(std::popcount(w));
    }
    return n;
}

bool TruthTable::is_constant() const noexcept {
    const auto ones = count_ones();
    return ones == 0 || ones == size();
}

void TruthTable::clear_padding() noexcept {
    if (arity_ < 6) {
        words_[0] &= (std::uint64_t{1} << size()) - 1;
    }
}

TruthTable TruthTable::operator~() const {
    TruthTable t = *this;
    for (auto& w : t.words_) {
        w = ~w;
    }
    t.clear_padding();
    return t;
}

namespace {

std::size_t hex_digits(std::size_t arity) { return arity < 2 ? 1 : (std::size_t{1} << (arity - 2)); }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string TruthTable::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t digits = hex_digits(arity_);
    std::string out(digits, '0');
    for (std::size_t k = 0; k < digits; ++k) {
        const std::uint64_t nibble = (words_[(4 * k) >> 6] >> ((4 * k) & 63)) & 0xF;
        out[digits - 1 - k] = kDigits[nibble];
    }
    return out;
}

TruthTable TruthTable::from_hex(std::size_t arity, std::string_view hex) {
    TruthTable t(arity);
    const std::size_t digits = hex_digits(arity);
    if (hex.size() != digits) {
        throw ParseError("truth table for arity " + std::to_string(arity) + " needs " + std::to_string(digits) +
                         " hex digits, got " + std::to_string(hex.size()));
    }
    for (std::size_t k = 0; k < digits; ++k) {
        const int v = hex_value(hex[digits - 1 - k]);
        if (v < 0) {
            throw ParseError("invalid hex digit '" + std::string(1, hex[digits - 1 - k]) + "' in truth table");
        }
        t.words_[(4 * k) >> 6] |= static_cast<std::uint64_t>(v) << ((4 * k) & 63);
    }
    const auto before = t.words_[0];
    t.clear_padding();
    if (t.words_[0] != before) {
        throw ParseError("truth table hex sets bits beyond 2^arity");
    }
    return t;
}

void write_truth_table(std::ostream& out, const TruthTable& t) {
    out << "arity=" << t.arity() << '\n' << t.to_hex() << '\n';
}

TruthTable read_truth_table(std::istream& in) {
    std::string header;
    std::string body;
    if (!std::getline(in, header) || !std::getline(in, body)) {
        throw ParseError("truth table file needs two lines: 'arity=<n>' and a hex string");
    }
    const auto h = trim(header);
    constexpr std::string_view kPrefix = "arity=";
    if (h.substr(0, kPrefix.size()) != kPrefix) {
        throw ParseError("truth table header must be 'arity=<n>', got '" + std::string(h) + "'");
    }
    const auto digits = h.substr(kPrefix.size());
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        digits.size() > 3) {
        throw ParseError("bad arity in truth table header '" + std::string(h) + "'");
    }
    const auto arity = static_cast<std::size_t>(std::stoul(std::string(digits)));
    return TruthTable::from_hex(arity, trim(body));
}

TruthTable make_parity(std::size_t n) {
    return TruthTable::from_function(n, [](InputWord x) { return parity_of(x) != 0; });
}

TruthTable make_or(std::size_t n) {
    return TruthTable::from_function(n, [](InputWord x) { return x != 0; });
}

TruthTable make_const(std::size_t n, bool value) {
    TruthTable t(n);
    return value ? ~t : t;
}

// ---------------------------------------------------------------------------
// AcceptanceProfile

AcceptanceProfile::AcceptanceProfile(std::size_t arity, std::vector<Rational> values)
    : arity_(arity), values_(std::move(values)) {
    require_cap("MAX_ARITY", arity, limits().max_arity);
    if (values_.size() != size()) {
        throw Error("acceptance profile length " + std::to_string(values_.size()) + " != 2^" + std::to_string(arity));
    }
    for (const auto& v : values_) {
        if (v < 0 || v > 1) {
            throw Error("acceptance probability " + to_string(v) + " outside [0,1]");
        }
    }
}

AcceptanceProfile AcceptanceProfile::of(const TruthTable& t) {
    std::vector<Rational> v(t.size());
    for (InputWord x = 0; x < t.size(); ++x) {
        v[x] = t(x) ? 1 : 0;
    }
    return AcceptanceProfile(t.arity(), std::move(v));
}

// ---------------------------------------------------------------------------
// Degree

namespace {

template <typename Int>
std::vector<Int> mobius_transform(const TruthTable& f) {
    std::vector<Int> a(f.size());
    for (InputWord x = 0; x < f.size(); ++x) {
        a[x] = f(x) ? 1 : 0;
    }
    for (std::size_t i = 0; i < f.arity(); ++i) {
        const InputWord bit = InputWord{1} << i;
        for (InputWord s = 0; s < f.size(); ++s) {
            if (s & bit) {
                a[s] -= a[s ^ bit];
            }
        }
    }
    return a;
}

}  // namespace

std::vector<std::int64_t> multilinear_coefficients(const TruthTable& f) { return mobius_transform<std::int64_t>(f); }

int degree_mobius(const TruthTable& f) {
    // |c_S| <= 2^|S| fits in 32 bits up to the arity ceiling.
    const auto c = mobius_transform<std::int32_t>(f);
    int deg = 0;
    for (InputWord s = 0; s < c.size(); ++s) {
        if (c[s] != 0) {
            deg = std::max(deg, weight_of(s));
        }
    }
    return deg;
}

int degree_subcube(const TruthTable& f) {
    const std::size_t n = f.arity();
    require_cap("SUBCUBE_CAP", n, limits().subcube_cap);

    // Subcubes are ternary words: digit 0/1 fixes x_i, digit 2 leaves it free.
    // signed_sum[S] = sum over X in S of (-1)^{weight of X on free coords} f(X),
    // nonzero exactly when the even and odd halves hold different counts of 1s.
    std::size_t total = 1;
    std::vector<std::size_t> pow3(n + 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        pow3[i + 1] = pow3[i] * 3;
    }
    total = pow3[n];

    std::vector<std::int32_t> signed_sum(total);
    std::vector<std::uint8_t> digit(n, 0);
    int free_count = 0;
    int best = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (free_count == 0) {
            InputWord x = 0;
            for (std::size_t i = 0; i < n; ++i) {
                x |= static_cast<InputWord>(digit[i]) << i;
            }
            signed_sum[idx] = f(x) ? 1 : 0;
        } else {
            std::size_t i = 0;
            while (digit[i] != 2) {
                ++i;
            }
            signed_sum[idx] = signed_sum[idx - 2 * pow3[i]] - signed_sum[idx - pow3[i]];
            if (signed_sum[idx] != 0) {
                best = std::max(best, free_count);
            }
        }
        // odometer increment
        for (std::size_t i = 0; i < n; ++i) {
            if (digit[i] == 2) {
                digit[i] = 0;
                --free_count;
                continue;
            }
            if (++digit[i] == 2) {
                ++free_count;
            }
            break;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Sensitivity

int sensitivity(const TruthTable& f) {
    int best = 0;
    for (InputWord x = 0; x < f.size(); ++x) {
        int s = 0;
        for (std::size_t i = 0; i < f.arity(); ++i) {
            s += f(x) != f(x ^ (InputWord{1} << i)) ? 1 : 0;
        }
        best = std::max(best, s);
    }
    return best;
}

namespace {

class BlockSearch {
public:
    BlockSearch(const TruthTable& f, InputWord x) : n_(f.arity()), by_low_bit_(n_), memo_(f.size(), -1) {
        const std::uint64_t full = f.size();
        const bool fx = f(x);
        std::vector<std::uint8_t> sensitive(full, 0);
        std::vector<std::uint8_t> has_sensitive_subset(full, 0);
        for (InputWord b = 1; b < full; ++b) {
            sensitive[b] = f(x ^ b) != fx ? 1 : 0;
        }
        for (InputWord b = 1; b < full; ++b) {
            std::uint8_t sub = 0;
            for (InputWord rest = b; rest != 0 && !sub; rest &= rest - 1) {
                const InputWord smaller = b & ~(rest & -rest);
                sub = sensitive[smaller] | has_sensitive_subset[smaller];
            }
            has_sensitive_subset[b] = sub;
            if (sensitive[b] && !sub) {
                by_low_bit_[static_cast<std::size_t>(std::countr_zero(b))].push_back(b);
            }
        }
        memo_[0] = 0;
    }

    int solve() { return rec((InputWord{1} << n_) - 1); }

private:
    // Max number of disjoint minimal sensitive blocks inside `avail`. The
    // lowest available coordinate is either unused or in the block that
    // contains it as its lowest bit.
    int rec(InputWord avail) {
        if (memo_[avail] >= 0) {
            return memo_[avail];
        }
        const InputWord low = avail & -avail;
        int best = rec(avail & ~low);
        const auto& candidates = by_low_bit_[static_cast<std::size_t>(std::countr_zero(avail))];
        for (InputWord b : candidates) {
            if ((b & ~avail) == 0) {
                best = std::max(best, 1 + rec(avail & ~b));
            }
        }
        memo_[avail] = static_cast<std::int8_t>(best);
        return best;
    }

    std::size_t n_;
    std::vector<std::vector<InputWord>> by_low_bit_;
    std::vector<std::int8_t> memo_;
};

}  // namespace

int block_sensitivity_at(const TruthTable& f, InputWord x) {
    require_cap("BS_CAP", f.arity(), limits().bs_cap);
    if (f.arity() == 0) {
        return 0;
    }
    return BlockSearch(f, x).solve();
}

int block_sensitivity(const TruthTable& f) {
    require_cap("BS_CAP", f.arity(), limits().bs_cap);
    int best = 0;
    for (InputWord x = 0; x < f.size() && best < static_cast<int>(f.arity()); ++x) {
        best = std::max(best, block_sensitivity_at(f, x));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Agreement and correlation

std::uint64_t agreement_count(const TruthTable& f, const TruthTable& g) {
    if (f.arity() != g.arity()) {
        throw Error("arity mismatch: " + std::to_string(f.arity()) + " vs " + std::to_string(g.arity()));
    }
    std::uint64_t disagree = 0;
    const auto& a = f.words();
    const auto& b = g.words();
    for (std::size_t i = 0; i < a.size(); ++i) {
        disagree += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
    }
    return f.size() - disagree;
}

Rational correlation_with_parity(const AcceptanceProfile& p) {
    const Rational half(1, 2);
    Rational sum = 0;
    for (InputWord x = 0; x < p.size(); ++x) {
        const Rational centered = p[x] - half;
        if (parity_of(x)) {
            sum += centered;
        } else {
            sum -= centered;
        }
    }
    return sum / 2;
}

Rational correlation_with_parity(const TruthTable& f) {
    // Sum over X of (f - 1/2)(Par - 1/2) = (ones_odd - ones_even)/2 + (|even| - |odd|)/4.
    std::int64_t ones_odd = 0;
    std::int64_t ones_even = 0;
    for (InputWord x = 0; x < f.size(); ++x) {
        if (f(x)) {
            (parity_of(x) ? ones_odd : ones_even) += 1;
        }
    }
    const std::int64_t odd = f.arity() == 0 ? 0 : static_cast<std::int64_t>(f.size() / 2);
    const std::int64_t even = static_cast<std::int64_t>(f.size()) - odd;
    return ratio(2 * (ones_odd - ones_even) + (even - odd), 4);
}

// ---------------------------------------------------------------------------
// Monomial restriction

std::uint64_t max_monomial(const TruthTable& f) {
    if (f.is_constant()) {
        throw Error("max_monomial: constant function has no nonconstant monomial");
    }
    const auto c = mobius_transform<std::int32_t>(f);
    int deg = -1;
    InputWord arg = 0;
    for (InputWord s = 0; s < c.size(); ++s) {
        if (c[s] != 0 && weight_of(s) > deg) {
            deg = weight_of(s);
            arg = s;
        }
    }
    return arg;
}

TruthTable restrict_to_max_monomial(const TruthTable& f) {
    const InputWord mono = max_monomial(f);
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < f.arity(); ++i) {
        if (mono >> i & 1U) {
            vars.push_back(i);
        }
    }
    return TruthTable::from_function(vars.size(), [&](InputWord y) {
        InputWord x = 0;
        for (std::size_t j = 0; j < vars.size(); ++j) {
            x |= ((y >> j) & 1U) << vars[j];
        }
        return f(x);
    });
}

MeasureReport measure(const TruthTable& f) {
    MeasureReport r;
    r.degree = degree_mobius(f);
    r.sensitivity = sensitivity(f);
    r.block_sensitivity = block_sensitivity(f);
    r.balanced = f.is_balanced();
    return r;
}

}  // namespace weakpar
