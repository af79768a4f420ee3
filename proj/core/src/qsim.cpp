#include "weakpar/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weakpar/config.hpp"

namespace weakpar::qsim {

StateVector::StateVector(std::size_t dim) : amps_(dim, Amplitude(0.0, 0.0)) {
    if (dim == 0) {
        throw Error("state vector needs a positive dimension");
    }
}

StateVector StateVector::uniform(std::size_t dim) {
    StateVector s(dim);
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    std::fill(s.amps_.begin(), s.amps_.end(), Amplitude(a, 0.0));
    return s;
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    StateVector s(dim);
    s.amps_.at(index) = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_normalized() const {
    const double drift = std::abs(norm_squared() - 1.0);
    if (drift > kNormTolerance) {
        throw Error("state vector norm drifted by " + std::to_string(drift));
    }
}

void StateVector::diffuse() {
    Amplitude mean(0.0, 0.0);
    for (const auto& a : amps_) {
        mean += a;
    }
    mean /= static_cast<double>(amps_.size());
    for (auto& a : amps_) {
        a = 2.0 * mean - a;
    }
}

std::size_t StateVector::measure(Rng& rng) const {
    const double u = uniform_unit(rng) * norm_squared();
    double acc = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::norm(amps_[i]);
        if (u < acc) {
            return i;
        }
    }
    // rounding left u past the last nonzero entry
    for (std::size_t i = amps_.size(); i-- > 0;) {
        if (std::norm(amps_[i]) > 0) {
            return i;
        }
    }
    return amps_.size() - 1;
}

QueryOracle::QueryOracle(std::size_t n, InputWord x) : n_(n), x_(x) {
    if (n == 0 || n > 64) {
        throw Error("query oracle arity must lie in [1, 64], got " + std::to_string(n));
    }
    if (n < 64 && (x >> n) != 0) {
        throw Error("input word does not fit in " + std::to_string(n) + " bits");
    }
}

void QueryOracle::apply_phase(StateVector& psi) {
    if (psi.dim() != n_) {
        throw Error("state dimension " + std::to_string(psi.dim()) + " != oracle arity " + std::to_string(n_));
    }
    ++queries_;
    for (std::size_t i = 0; i < n_; ++i) {
        if ((x_ >> i) & 1U) {
            psi[i] = -psi[i];
        }
    }
}

bool QueryOracle::read(std::size_t i) {
    if (i >= n_) {
        throw Error("read index out of range");
    }
    ++queries_;
    return ((x_ >> i) & 1U) != 0;
}

std::uint64_t grover_iteration_range(std::size_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) {
        ++r;
    }
    while (r > 0 && (r - 1) * (r - 1) >= n) {
        --r;
    }
    return std::max<std::uint64_t>(r, 1);
}

std::uint64_t grover_query_budget(std::size_t n) { return 4 * (grover_iteration_range(n) + 1); }

namespace {

StateVector grover_state(QueryOracle& oracle, std::uint64_t iterations) {
    StateVector psi = StateVector::uniform(oracle.arity());
    for (std::uint64_t k = 0; k < iterations; ++k) {
        oracle.apply_phase(psi);
        psi.check_normalized();
        psi.diffuse();
        psi.check_normalized();
    }
    return psi;
}

}  // namespace

bool grover_or(std::size_t n, QueryOracle& oracle, Rng& rng) {
    if (oracle.arity() != n) {
        throw Error("grover_or: oracle arity mismatch");
    }
    const std::uint64_t range = grover_iteration_range(n);
    for (std::uint64_t trial = 0; trial < kGroverTrials; ++trial) {
        const std::uint64_t r = uniform_below(rng, range);
        const StateVector psi = grover_state(oracle, r);
        if (oracle.read(psi.measure(rng))) {
            return true;
        }
    }
    return false;
}

double grover_trial_success(std::size_t n, InputWord x, std::uint64_t r) {
    QueryOracle oracle(n, x);
    const StateVector psi = grover_state(oracle, r);
    double marked = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((x >> i) & 1U) {
            marked += psi.probability(i);
        }
    }
    return marked;
}

GroverExact grover_or_exact(std::size_t n, InputWord x) {
    const std::uint64_t range = grover_iteration_range(n);
    // per-trial: average over r of the marked mass and of the query cost r + 1
    double trial_success = 0;
    double trial_queries = 0;
    for (std::uint64_t r = 0; r < range; ++r) {
        trial_success += grover_trial_success(n, x, r);
        trial_queries += static_cast<double>(r + 1);
    }
    trial_success /= static_cast<double>(range);
    trial_queries /= static_cast<double>(range);

    GroverExact g;
    const double all_fail = std::pow(1.0 - trial_success, static_cast<double>(kGroverTrials));
    g.accept_probability = 1.0 - all_fail;
    g.success_probability = x == 0 ? 1.0 - g.accept_probability : g.accept_probability;
    // trial t+1 runs only if the first t trials failed
    double reach = 1.0;
    for (std::uint64_t t = 0; t < kGroverTrials; ++t) {
        g.expected_queries += reach * trial_queries;
        reach *= 1.0 - trial_success;
    }
    // a trial costs at most range queries; when no trial can fail only the first one runs
    const bool trial_can_fail = trial_success < 1.0 - 1e-12;
    g.worst_case_queries = trial_can_fail ? kGroverTrials * range : range;
    return g;
}

std::array<double, 2> dj_pair_distribution(QueryOracle& oracle, std::size_t i, std::size_t j) {
    if (i == j) {
        throw Error("dj_pair needs two distinct indices");
    }
    if (i >= oracle.arity() || j >= oracle.arity()) {
        throw Error("dj_pair index out of range");
    }
    StateVector psi(oracle.arity());
    const double s = 1.0 / std::sqrt(2.0);
    psi[i] = s;
    psi[j] = s;
    oracle.apply_phase(psi);
    psi.check_normalized();
    // Hadamard on span{|i>, |j>}: |i> carries parity 0, |j> parity 1
    const Amplitude a = psi[i];
    const Amplitude b = psi[j];
    psi[i] = s * (a + b);
    psi[j] = s * (a - b);
    psi.check_normalized();
    return {psi.probability(i), psi.probability(j)};
}

bool dj_pair(QueryOracle& oracle, std::size_t i, std::size_t j) {
    const auto p = dj_pair_distribution(oracle, i, j);
    return p[1] > p[0];
}

ParityRun exact_parity_quantum(std::size_t n, QueryOracle& oracle) {
    if (oracle.arity() != n) {
        throw Error("exact_parity_quantum: oracle arity mismatch");
    }
    ParityRun run;
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        const auto p = dj_pair_distribution(oracle, i, i + 1);
        const bool bit = p[1] > p[0];
        run.output ^= bit;
        run.probability *= p[bit ? 1 : 0];
    }
    if (n % 2 == 1) {
        run.output ^= oracle.read(n - 1);
    }
    return run;
}

}  // namespace weakpar::qsim
