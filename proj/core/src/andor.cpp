#include "weakpar/andor.hpp"

#include <cmath>

#include "weakpar/config.hpp"

namespace weakpar::andor {

std::uint64_t leaf_count(std::size_t depth) {
    if (depth > 63) {
        throw Error("AND/OR tree depth " + std::to_string(depth) + " exceeds 63");
    }
    return std::uint64_t{1} << depth;
}

namespace {

std::size_t materializable_arity(std::size_t depth) {
    if (depth >= 6) {
        throw CapError("MAX_ARITY", depth >= 64 ? ~std::size_t{0} : (std::size_t{1} << depth), limits().max_arity);
    }
    const std::size_t n = std::size_t{1} << depth;
    require_cap("MAX_ARITY", n, limits().max_arity);
    return n;
}

bool value_rec(std::size_t height, std::uint64_t offset, const BitSource& bits) {
    if (height == 0) {
        return bits(offset);
    }
    const std::uint64_t half = std::uint64_t{1} << (height - 1);
    const bool left = value_rec(height - 1, offset, bits);
    const bool right = value_rec(height - 1, offset + half, bits);
    return is_and_gate(height) ? (left && right) : (left || right);
}

bool deterministic_rec(std::size_t height, std::uint64_t offset, InstrumentedOracle& oracle) {
    if (height == 0) {
        return oracle.query(offset);
    }
    const std::uint64_t half = std::uint64_t{1} << (height - 1);
    const bool first = deterministic_rec(height - 1, offset, oracle);
    const bool settled = is_and_gate(height) ? !first : first;
    if (settled) {
        return first;
    }
    return deterministic_rec(height - 1, offset + half, oracle);
}

bool randomized_rec(std::size_t height, std::uint64_t offset, InstrumentedOracle& oracle, Rng& rng) {
    if (height == 0) {
        return oracle.query(offset);
    }
    const std::uint64_t half = std::uint64_t{1} << (height - 1);
    const bool right_first = coin(rng);
    const std::uint64_t first_offset = right_first ? offset + half : offset;
    const std::uint64_t second_offset = right_first ? offset : offset + half;
    const bool first = randomized_rec(height - 1, first_offset, oracle, rng);
    const bool settled = is_and_gate(height) ? !first : first;
    if (settled) {
        return first;
    }
    return randomized_rec(height - 1, second_offset, oracle, rng);
}

struct Expectation {
    bool value;
    Rational queries;
};

Expectation expectation_rec(std::size_t height, std::uint64_t offset, const BitSource& bits) {
    if (height == 0) {
        return {bits(offset), Rational(1)};
    }
    const std::uint64_t half = std::uint64_t{1} << (height - 1);
    Expectation left = expectation_rec(height - 1, offset, bits);
    Expectation right = expectation_rec(height - 1, offset + half, bits);
    // The first child settles the gate when it equals the gate's absorbing value.
    const bool absorbing = !is_and_gate(height);
    Rational e = left.queries + right.queries;
    if (left.value == absorbing) {
        e -= right.queries / 2;
    }
    if (right.value == absorbing) {
        e -= left.queries / 2;
    }
    const bool v = is_and_gate(height) ? (left.value && right.value) : (left.value || right.value);
    return {v, std::move(e)};
}

void worst_input_rec(std::size_t height, std::uint64_t offset, bool target, std::vector<bool>& out) {
    if (height == 0) {
        out[offset] = target;
        return;
    }
    const std::uint64_t half = std::uint64_t{1} << (height - 1);
    const bool absorbing = !is_and_gate(height);
    if (target == absorbing) {
        // one absorbing child, one non-absorbing: the non-absorbing one may be paid for in full
        worst_input_rec(height - 1, offset, absorbing, out);
        worst_input_rec(height - 1, offset + half, !absorbing, out);
    } else {
        worst_input_rec(height - 1, offset, target, out);
        worst_input_rec(height - 1, offset + half, target, out);
    }
}

}  // namespace

TruthTable make_andor(std::size_t depth) {
    const std::size_t n = materializable_arity(depth);
    return TruthTable::from_function(n, [depth](InputWord x) {
        return value_rec(depth, 0, [x](std::size_t i) { return ((x >> i) & 1U) != 0; });
    });
}

bool value(std::size_t depth, const BitSource& bits) {
    leaf_count(depth);
    return value_rec(depth, 0, bits);
}

namespace {

void require_oracle_arity(std::size_t depth, const InstrumentedOracle& oracle) {
    if (oracle.arity() != leaf_count(depth)) {
        throw Error("AND/OR tree of depth " + std::to_string(depth) + " needs an oracle of arity " +
                    std::to_string(leaf_count(depth)) + ", got " + std::to_string(oracle.arity()));
    }
}

}  // namespace

bool eval_deterministic(std::size_t depth, InstrumentedOracle& oracle) {
    require_oracle_arity(depth, oracle);
    return deterministic_rec(depth, 0, oracle);
}

bool randomized_eval(std::size_t depth, InstrumentedOracle& oracle, Rng& rng) {
    require_oracle_arity(depth, oracle);
    return randomized_rec(depth, 0, oracle, rng);
}

Rational expected_queries_exact(std::size_t depth, InputWord x) {
    const std::size_t n = materializable_arity(depth);
    if (n < 64 && (x >> n) != 0) {
        throw Error("input word does not fit in " + std::to_string(n) + " bits");
    }
    return expectation_rec(depth, 0, [x](std::size_t i) { return ((x >> i) & 1U) != 0; }).queries;
}

Rational expected_queries_exact(std::size_t depth, const BitSource& bits) {
    leaf_count(depth);
    return expectation_rec(depth, 0, bits).queries;
}

double WorstCaseTable::two_level_ratio(std::size_t d) const {
    return to_double(Rational((*this)[d + 2].worst() / (*this)[d].worst()));
}

WorstCaseTable worst_case_table(std::size_t d_max) {
    require_cap("WORST_CASE_DEPTH", d_max, 64);
    std::vector<WorstCaseRow> rows;
    rows.reserve(d_max + 1);
    rows.push_back({Rational(1), Rational(1)});
    for (std::size_t h = 1; h <= d_max; ++h) {
        const WorstCaseRow& c = rows.back();
        WorstCaseRow r;
        if (is_and_gate(h)) {
            // value 1 needs both children at 1; value 0 is worst with one 0-child and one 1-child
            r.w1 = 2 * c.w1;
            r.w0 = c.w0 + c.w1 / 2;
        } else {
            r.w0 = 2 * c.w0;
            r.w1 = c.w1 + c.w0 / 2;
        }
        rows.push_back(std::move(r));
    }
    return WorstCaseTable(std::move(rows));
}

double growth_constant_squared() {
    const double c = (1.0 + std::sqrt(33.0)) / 4.0;
    return c * c;
}

std::vector<bool> worst_case_input(std::size_t depth, bool target) {
    std::vector<bool> out(leaf_count(depth), false);
    worst_input_rec(depth, 0, target, out);
    return out;
}

std::uint64_t parity_agreement(std::size_t depth) {
    const TruthTable t = make_andor(depth);
    return agreement_count(t, make_parity(t.arity()));
}

}  // namespace weakpar::andor
