#include "weakpar/config.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>

namespace weakpar {

CapError::CapError(std::string cap, std::size_t value, std::size_t limit)
    : Error(cap + " exceeded: " + std::to_string(value) + " > " + std::to_string(limit)),
      cap_(std::move(cap)),
      value_(value),
      limit_(limit) {}

namespace {

Limits initial_limits() {
    Limits l;
    if (const char* env = std::getenv("WEAKPAR_MAX_ARITY"); env != nullptr && *env != '\0') {
        l.max_arity = parse_max_arity(env);
    }
    return l;
}

Limits& mutable_limits() {
    static Limits l = initial_limits();
    return l;
}

}  // namespace

const Limits& limits() { return mutable_limits(); }

void set_limits(const Limits& l) {
    require_cap("MAX_ARITY", l.max_arity, kArityCeiling);
    mutable_limits() = l;
}

std::size_t parse_max_arity(const std::string& text) {
    std::size_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("WEAKPAR_MAX_ARITY is not a non-negative integer: '" + text + "'");
    }
    require_cap("MAX_ARITY", value, kArityCeiling);
    return value;
}

void require_cap(const char* cap, std::size_t value, std::size_t limit) {
    if (value > limit) {
        throw CapError(cap, value, limit);
    }
}

}  // namespace weakpar
