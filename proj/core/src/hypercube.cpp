#include "weakpar/hypercube.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "weakpar/config.hpp"
#include "weakpar/random.hpp"

namespace weakpar {

VertexSet VertexSet::from_list(std::size_t n, const std::vector<InputWord>& vertices) {
    TruthTable t(n);
    for (InputWord v : vertices) {
        if (v >= t.size()) {
            throw Error("vertex " + std::to_string(v) + " outside {0,1}^" + std::to_string(n));
        }
        t.set(v, true);
    }
    return VertexSet(std::move(t));
}

VertexSet VertexSet::with(InputWord v) const {
    TruthTable t = members_;
    t.set(v, true);
    return VertexSet(std::move(t));
}

std::vector<InputWord> VertexSet::vertices() const {
    std::vector<InputWord> out;
    out.reserve(size_);
    for (InputWord v = 0; v < members_.size(); ++v) {
        if (members_(v)) {
            out.push_back(v);
        }
    }
    return out;
}

int VertexSet::degree_of(InputWord v) const noexcept {
    int d = 0;
    for (std::size_t i = 0; i < arity(); ++i) {
        d += members_(v ^ (InputWord{1} << i)) ? 1 : 0;
    }
    return d;
}

int max_degree(const VertexSet& g) {
    int best = 0;
    for (InputWord v = 0; v < g.membership().size(); ++v) {
        if (g.contains(v)) {
            best = std::max(best, g.degree_of(v));
        }
    }
    return best;
}

namespace {

// Masks of in-word positions whose bit i is 0, for i < 6.
constexpr std::array<std::uint64_t, 6> kLowHalf = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

std::uint64_t flip_in_word(std::uint64_t w, std::size_t i) {
    const unsigned shift = 1U << i;
    return ((w & kLowHalf[i]) << shift) | ((w >> shift) & kLowHalf[i]);
}

}  // namespace

int max_degree_shifted(const VertexSet& g) {
    const auto& words = g.membership().words();
    const std::size_t n = g.arity();
    int best = 0;
    for (std::size_t j = 0; j < words.size(); ++j) {
        // bit-sliced per-position neighbour counters, 6 bits covers n <= 63
        std::array<std::uint64_t, 6> counter{};
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t flipped = i < 6 ? flip_in_word(words[j], i) : words[j ^ (std::size_t{1} << (i - 6))];
            std::uint64_t carry = words[j] & flipped;
            for (std::size_t b = 0; b < counter.size() && carry != 0; ++b) {
                const std::uint64_t next = counter[b] & carry;
                counter[b] ^= carry;
                carry = next;
            }
        }
        std::uint64_t candidates = words[j];
        if (candidates == 0) {
            continue;
        }
        int word_max = 0;
        for (int b = static_cast<int>(counter.size()) - 1; b >= 0; --b) {
            if ((candidates & counter[static_cast<std::size_t>(b)]) != 0) {
                candidates &= counter[static_cast<std::size_t>(b)];
                word_max |= 1 << b;
            }
        }
        best = std::max(best, word_max);
    }
    return best;
}

std::pair<InputWord, int> hardest_vertex(const VertexSet& a) {
    if (a.empty()) {
        throw Error("hardest_vertex: empty vertex set");
    }
    InputWord arg = 0;
    int best = -1;
    for (InputWord v = 0; v < a.membership().size(); ++v) {
        if (a.contains(v)) {
            const int d = a.degree_of(v);
            if (d > best) {
                best = d;
                arg = v;
            }
        }
    }
    return {arg, best};
}

// ---------------------------------------------------------------------------
// Exact Lambda

namespace {

class LambdaSearch {
public:
    explicit LambdaSearch(std::size_t n)
        : n_(n),
          count_(std::uint64_t{1} << n),
          target_(count_ / 2 + 1),
          state_(count_, kUndecided),
          degree_(count_, 0),
          best_(static_cast<int>(n) + 1) {
        // 0^n first, then its neighbours e_0..e_{n-1}, then the rest ascending.
        order_.push_back(0);
        for (std::size_t i = 0; i < n; ++i) {
            order_.push_back(InputWord{1} << i);
        }
        for (InputWord v = 1; v < count_; ++v) {
            if (std::popcount(v) != 1) {
                order_.push_back(v);
            }
        }
    }

    void run() {
        // Translations are automorphisms, so some optimum contains 0^n.
        // Coordinate permutations fix 0^n, so its included neighbours can be
        // taken to be a prefix e_0..e_{j-1}.
        include(0);
        for (std::size_t j = 0; j <= n_ && !done(); ++j) {
            bool ok = true;
            std::size_t applied = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                const InputWord v = InputWord{1} << i;
                if (i < j) {
                    if (!can_include(v)) {
                        ok = false;
                        break;
                    }
                    include(v);
                    ++applied;
                } else {
                    state_[v] = kOut;
                }
            }
            if (ok) {
                recurse(n_ + 1, 1 + applied);
            }
            for (std::size_t i = 0; i < n_; ++i) {
                const InputWord v = InputWord{1} << i;
                if (state_[v] == kIn) {
                    exclude_included(v);
                } else {
                    state_[v] = kUndecided;
                }
            }
        }
    }

    int best() const { return best_; }
    const std::vector<InputWord>& best_set() const { return best_set_; }

private:
    static constexpr std::int8_t kUndecided = -1;
    static constexpr std::int8_t kOut = 0;
    static constexpr std::int8_t kIn = 1;

    // More than 2^{n-1} vertices always contain an edge (perfect matching), so 1 is optimal.
    bool done() const { return best_ <= 1; }

    bool can_include(InputWord v) const {
        int d = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const InputWord u = v ^ (InputWord{1} << i);
            if (state_[u] == kIn) {
                if (degree_[u] + 1 >= best_) {
                    return false;
                }
                ++d;
            }
        }
        return d < best_;
    }

    void include(InputWord v) {
        state_[v] = kIn;
        for (std::size_t i = 0; i < n_; ++i) {
            const InputWord u = v ^ (InputWord{1} << i);
            if (state_[u] == kIn) {
                ++degree_[u];
                ++degree_[v];
            }
        }
    }

    void exclude_included(InputWord v) {
        for (std::size_t i = 0; i < n_; ++i) {
            const InputWord u = v ^ (InputWord{1} << i);
            if (state_[u] == kIn) {
                --degree_[u];
                --degree_[v];
            }
        }
        state_[v] = kUndecided;
    }

    void record() {
        int delta = 0;
        best_set_.clear();
        for (InputWord v = 0; v < count_; ++v) {
            if (state_[v] == kIn) {
                best_set_.push_back(v);
                delta = std::max(delta, degree_[v]);
            }
        }
        best_ = delta;
    }

    void recurse(std::size_t pos, std::uint64_t included) {
        if (done()) {
            return;
        }
        if (included == target_) {
            record();
            return;
        }
        if (included + (order_.size() - pos) < target_) {
            return;
        }
        const InputWord v = order_[pos];
        if (can_include(v)) {
            include(v);
            recurse(pos + 1, included + 1);
            exclude_included(v);
        }
        state_[v] = kOut;
        recurse(pos + 1, included);
        state_[v] = kUndecided;
    }

    std::size_t n_;
    std::uint64_t count_;
    std::uint64_t target_;
    std::vector<InputWord> order_;
    std::vector<std::int8_t> state_;
    std::vector<int> degree_;
    int best_;
    std::vector<InputWord> best_set_;
};

}  // namespace

LambdaCertificate lambda_exact(std::size_t n) {
    require_cap("LAMBDA_EXACT_CAP", n, limits().lambda_exact_cap);
    if (n == 0) {
        throw Error("lambda_exact: n must be at least 1");
    }
    LambdaSearch search(n);
    search.run();
    LambdaCertificate c;
    c.n = n;
    c.value = search.best();
    c.witness = VertexSet::from_list(n, search.best_set());
    c.exact = true;
    return c;
}

double lambda_lower_bound(std::size_t n) {
    if (n < 2) {
        throw Error("lambda_lower_bound: n must be at least 2");
    }
    const double l = std::log2(static_cast<double>(n));
    return 0.5 * l - 0.5 * std::log2(l) + 0.5;
}

// ---------------------------------------------------------------------------
// Annealing

namespace {

class Annealer {
public:
    Annealer(std::size_t n, std::uint64_t seed)
        : n_(n), count_(std::uint64_t{1} << n), rng_(seed), in_(count_, 0), pos_(count_), degree_(count_, 0),
          histogram_(n + 1, 0) {
        const std::uint64_t target = count_ / 2 + 1;
        std::vector<InputWord> all(count_);
        for (InputWord v = 0; v < count_; ++v) {
            all[v] = v;
        }
        // Fisher-Yates prefix selects the initial members.
        for (std::uint64_t k = 0; k < target; ++k) {
            std::swap(all[k], all[k + uniform_below(rng_, count_ - k)]);
        }
        for (std::uint64_t k = 0; k < count_; ++k) {
            auto& bucket = k < target ? members_ : others_;
            pos_[all[k]] = bucket.size();
            bucket.push_back(all[k]);
            in_[all[k]] = k < target ? 1 : 0;
        }
        for (InputWord v : members_) {
            for (std::size_t i = 0; i < n_; ++i) {
                ++degree_[v ^ (InputWord{1} << i)];
            }
        }
        for (InputWord v : members_) {
            ++histogram_[static_cast<std::size_t>(degree_[v])];
        }
    }

    LambdaCertificate run(const AnnealingOptions& opts) {
        int best = delta();
        std::vector<InputWord> best_members = members_;
        const double ratio = opts.final_temperature / opts.initial_temperature;
        double current = energy();
        for (std::uint64_t t = 0; t < opts.iterations && best > 1; ++t) {
            const double temperature =
                opts.initial_temperature * std::pow(ratio, static_cast<double>(t) / static_cast<double>(opts.iterations));
            const InputWord out = pick_member();
            const InputWord in = pick_other();
            swap_out_in(out, in);
            const double proposed = energy();
            const double diff = proposed - current;
            if (diff <= 0 || uniform_unit(rng_) < std::exp(-diff / temperature)) {
                current = proposed;
                if (delta() < best) {
                    best = delta();
                    best_members = members_;
                }
            } else {
                swap_out_in(in, out);
            }
        }
        LambdaCertificate c;
        c.n = n_;
        c.value = best;
        c.witness = VertexSet::from_list(n_, best_members);
        c.exact = false;
        return c;
    }

private:
    int delta() const {
        for (std::size_t d = n_ + 1; d-- > 0;) {
            if (histogram_[d] > 0) {
                return static_cast<int>(d);
            }
        }
        return 0;
    }

    // Max degree, tie-broken by how many members attain it.
    double energy() const {
        const int d = delta();
        return d + static_cast<double>(histogram_[static_cast<std::size_t>(d)]) / static_cast<double>(count_ + 1);
    }

    InputWord pick_member() {
        if (coin(rng_)) {
            const int d = delta();
            for (int tries = 0; tries < 64; ++tries) {
                const InputWord v = members_[uniform_below(rng_, members_.size())];
                if (degree_[v] == d) {
                    return v;
                }
            }
        }
        return members_[uniform_below(rng_, members_.size())];
    }

    InputWord pick_other() {
        InputWord best = others_[uniform_below(rng_, others_.size())];
        for (int k = 0; k < 3; ++k) {
            const InputWord v = others_[uniform_below(rng_, others_.size())];
            if (degree_[v] < degree_[best]) {
                best = v;
            }
        }
        return best;
    }

    void move(std::vector<InputWord>& from, std::vector<InputWord>& to, InputWord v) {
        const std::size_t p = pos_[v];
        from[p] = from.back();
        pos_[from[p]] = p;
        from.pop_back();
        pos_[v] = to.size();
        to.push_back(v);
    }

    void remove(InputWord v) {
        --histogram_[static_cast<std::size_t>(degree_[v])];
        in_[v] = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const InputWord u = v ^ (InputWord{1} << i);
            if (in_[u]) {
                --histogram_[static_cast<std::size_t>(degree_[u])];
                ++histogram_[static_cast<std::size_t>(degree_[u] - 1)];
            }
            --degree_[u];
        }
        move(members_, others_, v);
    }

    void add(InputWord v) {
        for (std::size_t i = 0; i < n_; ++i) {
            const InputWord u = v ^ (InputWord{1} << i);
            if (in_[u]) {
                --histogram_[static_cast<std::size_t>(degree_[u])];
                ++histogram_[static_cast<std::size_t>(degree_[u] + 1)];
            }
            ++degree_[u];
        }
        in_[v] = 1;
        ++histogram_[static_cast<std::size_t>(degree_[v])];
        move(others_, members_, v);
    }

    void swap_out_in(InputWord out, InputWord in) {
        remove(out);
        add(in);
    }

    std::size_t n_;
    std::uint64_t count_;
    Rng rng_;
    std::vector<std::uint8_t> in_;
    std::vector<std::size_t> pos_;
    std::vector<int> degree_;
    std::vector<std::uint64_t> histogram_;
    std::vector<InputWord> members_;
    std::vector<InputWord> others_;
};

}  // namespace

LambdaCertificate lambda_upper_search(std::size_t n, const AnnealingOptions& opts) {
    require_cap("MAX_ARITY", n, limits().max_arity);
    if (n == 0) {
        throw Error("lambda_upper_search: n must be at least 1");
    }
    if (n == 1) {
        // Both vertices are required.
        LambdaCertificate c;
        c.n = 1;
        c.witness = VertexSet::full(1);
        c.value = max_degree(c.witness);
        return c;
    }
    return Annealer(n, opts.seed).run(opts);
}

std::pair<int, int> gotsman_linial_check(const VertexSet& g) {
    if (2 * g.size() == g.membership().size()) {
        throw Error("gotsman_linial_check: |G| = 2^{n-1} is excluded");
    }
    return {max_degree(g), max_degree(g.complement())};
}

void verify_certificate(const LambdaCertificate& c) {
    const std::uint64_t want = (std::uint64_t{1} << c.n) / 2 + 1;
    if (c.witness.arity() != c.n || c.witness.size() != want) {
        throw Error("certificate witness has " + std::to_string(c.witness.size()) + " vertices, expected " +
                    std::to_string(want));
    }
    const int d = max_degree(c.witness);
    if (d != c.value) {
        throw Error("certificate claims value " + std::to_string(c.value) + " but witness has max degree " +
                    std::to_string(d));
    }
}

}  // namespace weakpar
