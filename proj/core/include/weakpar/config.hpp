#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weakpar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input exceeds one of the configured enumeration caps.
class CapError : public Error {
public:
    CapError(std::string cap, std::size_t value, std::size_t limit);

    const std::string& cap() const noexcept { return cap_; }
    std::size_t value() const noexcept { return value_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string cap_;
    std::size_t value_;
    std::size_t limit_;
};

/// Malformed text input (truth tables, trees, fractions).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Hard ceiling for any configured arity; truth tables are indexed by 64-bit words.
inline constexpr std::size_t kArityCeiling = 32;

/// Per-operation enumeration caps. Exponential oracles refuse inputs above
/// their cap instead of approximating.
struct Limits {
    std::size_t max_arity = 24;
    std::size_t bs_cap = 12;
    std::size_t subcube_cap = 14;
    std::size_t d_cap = 12;
    std::size_t lambda_exact_cap = 4;
};

/// Process-wide limits. Initialized from WEAKPAR_MAX_ARITY on first use.
const Limits& limits();

/// Replaces the process-wide limits. Not synchronized; call before starting work.
void set_limits(const Limits& l);

/// Parses a WEAKPAR_MAX_ARITY-style value; throws ParseError or CapError.
std::size_t parse_max_arity(const std::string& text);

/// Throws CapError when value > limit.
void require_cap(const char* cap, std::size_t value, std::size_t limit);

}  // namespace weakpar
