#include "weakpar/rational.hpp"

#include <cctype>

#include "weakpar/config.hpp"

namespace weakpar {

namespace {

mpz_class parse_integer(std::string_view text, bool allow_sign) {
    std::string_view digits = text;
    if (allow_sign && !digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        digits.remove_prefix(1);
    }
    if (digits.empty()) {
        throw ParseError("empty integer in fraction '" + std::string(text) + "'");
    }
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("bad digit in fraction '" + std::string(text) + "'");
        }
    }
    std::string s(text);
    if (!s.empty() && s.front() == '+') {
        s.erase(0, 1);
    }
    return mpz_class(s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, true));
    }
    mpz_class num = parse_integer(text.substr(0, slash), true);
    mpz_class den = parse_integer(text.substr(slash + 1), false);
    if (den == 0) {
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) {
        return r.get_num().get_str();
    }
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational pow2(long e) {
    mpz_class p;
    const unsigned long mag = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    mpz_ui_pow_ui(p.get_mpz_t(), 2, mag);
    if (e < 0) {
        return Rational(mpz_class(1), p);
    }
    return Rational(p);
}

}  // namespace weakpar
