#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace weakpar {

/// Exact rational; GMP's canonicalized mpq.
using Rational = mpq_class;

/// Parses "a", "a/b" or "-a/b"; zero denominators are rejected.
Rational parse_rational(std::string_view text);

/// Canonical "a/b" form, or "a" when the denominator is 1.
std::string to_string(const Rational& r);

/// num/den in lowest terms. The two-argument mpq constructor does not
/// canonicalize, and comparisons on unreduced values are wrong.
inline Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// 2^e for any integer e (negative allowed).
Rational pow2(long e);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace weakpar
