#include "weakpar/dtree.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "weakpar/config.hpp"

namespace weakpar {

// ---------------------------------------------------------------------------
// InstrumentedOracle

InstrumentedOracle::InstrumentedOracle(std::size_t arity, InputWord x)
    : arity_(arity), source_([x](std::size_t i) { return ((x >> i) & 1U) != 0; }), queried_(arity, false) {
    if (arity < 64 && (x >> arity) != 0) {
        throw Error("input word " + std::to_string(x) + " does not fit in " + std::to_string(arity) + " bits");
    }
    if (arity > 64) {
        throw Error("word-backed oracle supports at most 64 bits");
    }
}

InstrumentedOracle::InstrumentedOracle(std::size_t arity, BitSource source)
    : arity_(arity), source_(std::move(source)), queried_(arity, false) {}

bool InstrumentedOracle::query(std::size_t i) {
    if (i >= arity_) {
        throw Error("query index " + std::to_string(i) + " out of range for arity " + std::to_string(arity_));
    }
    ++query_count_;
    if (!queried_[i]) {
        queried_[i] = true;
        ++distinct_;
    }
    return source_(i);
}

// ---------------------------------------------------------------------------
// DecisionTree

struct DecisionTree::Node {
    bool is_leaf = true;
    bool value = false;
    std::size_t var = 0;
    std::shared_ptr<const Node> zero;
    std::shared_ptr<const Node> one;
    int depth = 0;
    std::uint64_t mask = 0;
    std::size_t count = 1;
};

DecisionTree DecisionTree::leaf(bool value) {
    static const auto zero = std::make_shared<const Node>(Node{true, false, 0, nullptr, nullptr, 0, 0, 1});
    static const auto one = std::make_shared<const Node>(Node{true, true, 0, nullptr, nullptr, 0, 0, 1});
    return DecisionTree(value ? one : zero);
}

DecisionTree DecisionTree::query(std::size_t var, const DecisionTree& if_zero, const DecisionTree& if_one) {
    if (var >= 64) {
        throw Error("decision tree variable index " + std::to_string(var) + " exceeds 63");
    }
    const std::uint64_t bit = std::uint64_t{1} << var;
    if ((if_zero.variable_mask() | if_one.variable_mask()) & bit) {
        throw Error("variable " + std::to_string(var) + " repeats on a root-to-leaf path");
    }
    Node n;
    n.is_leaf = false;
    n.var = var;
    n.zero = if_zero.node_;
    n.one = if_one.node_;
    n.depth = 1 + std::max(if_zero.depth(), if_one.depth());
    n.mask = bit | if_zero.variable_mask() | if_one.variable_mask();
    n.count = 1 + if_zero.node_count() + if_one.node_count();
    return DecisionTree(std::make_shared<const Node>(std::move(n)));
}

bool DecisionTree::is_leaf() const noexcept { return node_->is_leaf; }

bool DecisionTree::leaf_value() const {
    if (!node_->is_leaf) {
        throw Error("leaf_value on an internal node");
    }
    return node_->value;
}

std::size_t DecisionTree::variable() const {
    if (node_->is_leaf) {
        throw Error("variable on a leaf");
    }
    return node_->var;
}

DecisionTree DecisionTree::child(bool bit) const {
    if (node_->is_leaf) {
        throw Error("child of a leaf");
    }
    return DecisionTree(bit ? node_->one : node_->zero);
}

int DecisionTree::depth() const noexcept { return node_->depth; }
std::uint64_t DecisionTree::variable_mask() const noexcept { return node_->mask; }
std::size_t DecisionTree::node_count() const noexcept { return node_->count; }

std::size_t DecisionTree::min_arity() const noexcept {
    return node_->mask == 0 ? 0 : static_cast<std::size_t>(64 - __builtin_clzll(node_->mask));
}

bool DecisionTree::evaluate(InputWord x) const {
    const Node* n = node_.get();
    while (!n->is_leaf) {
        n = ((x >> n->var) & 1U) ? n->one.get() : n->zero.get();
    }
    return n->value;
}

TruthTable DecisionTree::to_truth_table(std::size_t arity) const {
    if (min_arity() > arity) {
        throw Error("tree uses variable " + std::to_string(min_arity() - 1) + " beyond arity " + std::to_string(arity));
    }
    return TruthTable::from_function(arity, [this](InputWord x) { return evaluate(x); });
}

namespace {

void render(const DecisionTree& t, std::string& out) {
    if (t.is_leaf()) {
        out += t.leaf_value() ? '1' : '0';
        return;
    }
    out += '(';
    out += std::to_string(t.variable());
    out += ' ';
    render(t.child(false), out);
    out += ' ';
    render(t.child(true), out);
    out += ')';
}

class TreeParser {
public:
    explicit TreeParser(std::string_view text) : text_(text) {}

    DecisionTree parse_all() {
        DecisionTree t = parse_tree();
        skip_space();
        if (pos_ != text_.size()) {
            fail("trailing characters");
        }
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("decision tree: " + what + " at offset " + std::to_string(pos_) + " in '" +
                         std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    DecisionTree parse_tree() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end");
        }
        const char c = text_[pos_];
        if (c == '0' || c == '1') {
            ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("leaf must be 0 or 1");
            }
            return DecisionTree::leaf(c == '1');
        }
        if (c != '(') {
            fail("expected '(', '0' or '1'");
        }
        ++pos_;
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start || pos_ - start > 2) {
            fail("expected a variable index");
        }
        const auto var = static_cast<std::size_t>(std::stoul(std::string(text_.substr(start, pos_ - start))));
        DecisionTree zero = parse_tree();
        DecisionTree one = parse_tree();
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != ')') {
            fail("expected ')'");
        }
        ++pos_;
        try {
            return DecisionTree::query(var, zero, one);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string DecisionTree::to_string() const {
    std::string out;
    render(*this, out);
    return out;
}

DecisionTree DecisionTree::parse(std::string_view text) { return TreeParser(text).parse_all(); }

bool operator==(const DecisionTree& a, const DecisionTree& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.is_leaf() || b.is_leaf()) {
        return a.is_leaf() && b.is_leaf() && a.leaf_value() == b.leaf_value();
    }
    return a.variable() == b.variable() && a.child(false) == b.child(false) && a.child(true) == b.child(true);
}

bool eval(const DecisionTree& t, InstrumentedOracle& oracle) {
    if (t.min_arity() > oracle.arity()) {
        throw Error("tree arity " + std::to_string(t.min_arity()) + " exceeds oracle arity " +
                    std::to_string(oracle.arity()));
    }
    DecisionTree cur = t;
    while (!cur.is_leaf()) {
        cur = cur.child(oracle.query(cur.variable()));
    }
    return cur.leaf_value();
}

// ---------------------------------------------------------------------------
// TreeDistribution

TreeDistribution::TreeDistribution(std::size_t arity, std::vector<Entry> entries)
    : arity_(arity), entries_(std::move(entries)) {
    require_cap("MAX_ARITY", arity, limits().max_arity);
    if (entries_.empty()) {
        throw Error("tree distribution is empty");
    }
    Rational total = 0;
    for (const auto& [w, t] : entries_) {
        if (w <= 0) {
            throw Error("tree weight " + weakpar::to_string(w) + " is not positive");
        }
        if (t.min_arity() > arity) {
            throw Error("tree " + t.to_string() + " uses a variable beyond arity " + std::to_string(arity));
        }
        total += w;
    }
    if (total != 1) {
        throw Error("tree weights sum to " + weakpar::to_string(total) + ", not 1");
    }
}

TreeDistribution TreeDistribution::single(std::size_t arity, DecisionTree t) {
    return TreeDistribution(arity, {{Rational(1), std::move(t)}});
}

TreeDistribution TreeDistribution::uniform(std::size_t arity, const std::vector<DecisionTree>& trees) {
    std::vector<Entry> entries;
    entries.reserve(trees.size());
    for (const auto& t : trees) {
        entries.emplace_back(Rational(1, static_cast<unsigned long>(trees.size())), t);
    }
    return TreeDistribution(arity, std::move(entries));
}

int TreeDistribution::max_depth() const noexcept {
    int d = 0;
    for (const auto& e : entries_) {
        d = std::max(d, e.second.depth());
    }
    return d;
}

TreeDistribution read_tree_distribution(std::istream& in, std::size_t arity) {
    std::vector<TreeDistribution::Entry> entries;
    std::string line;
    std::size_t line_no = 0;
    std::size_t inferred = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'weight<TAB>tree'");
        }
        Rational w = parse_rational(std::string_view(line).substr(0, tab));
        DecisionTree t = DecisionTree::parse(std::string_view(line).substr(tab + 1));
        inferred = std::max(inferred, t.min_arity());
        entries.emplace_back(std::move(w), std::move(t));
    }
    return TreeDistribution(arity == 0 ? inferred : arity, std::move(entries));
}

void write_tree_distribution(std::ostream& out, const TreeDistribution& d) {
    for (const auto& [w, t] : d.entries()) {
        out << w.get_num().get_str() << '/' << w.get_den().get_str() << '\t' << t.to_string() << '\n';
    }
}

AcceptanceProfile acceptance_profile(const TreeDistribution& d) {
    require_cap("MAX_ARITY", d.arity(), limits().max_arity);
    const std::uint64_t size = std::uint64_t{1} << d.arity();
    std::vector<Rational> p(size, Rational(0));
    for (const auto& [w, t] : d.entries()) {
        for (InputWord x = 0; x < size; ++x) {
            if (t.evaluate(x)) {
                p[x] += w;
            }
        }
    }
    return AcceptanceProfile(d.arity(), std::move(p));
}

std::vector<Rational> variable_usage(const TreeDistribution& d) {
    std::vector<Rational> usage(d.arity(), Rational(0));
    for (const auto& [w, t] : d.entries()) {
        for (std::size_t i = 0; i < d.arity(); ++i) {
            if ((t.variable_mask() >> i) & 1U) {
                usage[i] += w;
            }
        }
    }
    return usage;
}

VertexSet success_set(const AcceptanceProfile& p, const TruthTable& target) {
    if (p.arity() != target.arity()) {
        throw Error("success_set: arity mismatch " + std::to_string(p.arity()) + " vs " +
                    std::to_string(target.arity()));
    }
    const Rational third(1, 3);
    TruthTable members(p.arity());
    for (InputWord x = 0; x < p.size(); ++x) {
        Rational diff = p[x] - (target(x) ? 1 : 0);
        if (abs(diff) <= third) {
            members.set(x, true);
        }
    }
    return VertexSet(std::move(members));
}

// ---------------------------------------------------------------------------
// exact_D

namespace {

enum class Status : std::uint8_t { kZero, kOne, kMixed };

}  // namespace

ExactDResult exact_D(const TruthTable& f) {
    const std::size_t n = f.arity();
    require_cap("D_CAP", n, limits().d_cap);

    std::vector<std::size_t> pow3(n + 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        pow3[i + 1] = pow3[i] * 3;
    }
    const std::size_t total = pow3[n];

    // Restriction digits: 0/1 fixed, 2 free. Replacing a free digit lowers the
    // index, so ascending order visits every subrestriction first.
    std::vector<Status> status(total);
    std::vector<std::uint8_t> depth(total, 0);
    std::vector<std::uint8_t> choice(total, 0);
    std::vector<std::uint8_t> digit(n, 0);
    std::size_t free_count = 0;

    for (std::size_t idx = 0; idx < total; ++idx) {
        if (free_count == 0) {
            InputWord x = 0;
            for (std::size_t i = 0; i < n; ++i) {
                x |= static_cast<InputWord>(digit[i]) << i;
            }
            status[idx] = f(x) ? Status::kOne : Status::kZero;
        } else {
            std::size_t low = 0;
            while (digit[low] != 2) {
                ++low;
            }
            const Status a = status[idx - 2 * pow3[low]];
            const Status b = status[idx - pow3[low]];
            status[idx] = a == b ? a : Status::kMixed;
            if (status[idx] == Status::kMixed) {
                int best = 255;
                std::uint8_t arg = 0;
                for (std::size_t i = low; i < n; ++i) {
                    if (digit[i] != 2) {
                        continue;
                    }
                    const int d = 1 + std::max(depth[idx - 2 * pow3[i]], depth[idx - pow3[i]]);
                    if (d < best) {
                        best = d;
                        arg = static_cast<std::uint8_t>(i);
                    }
                }
                depth[idx] = static_cast<std::uint8_t>(best);
                choice[idx] = arg;
            }
        }
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

    std::function<DecisionTree(std::size_t)> build = [&](std::size_t idx) -> DecisionTree {
        if (status[idx] != Status::kMixed) {
            return DecisionTree::leaf(status[idx] == Status::kOne);
        }
        const std::size_t var = choice[idx];
        return DecisionTree::query(var, build(idx - 2 * pow3[var]), build(idx - pow3[var]));
    };

    ExactDResult r;
    r.depth = depth[total - 1];
    r.tree = build(total - 1);
    return r;
}

}  // namespace weakpar
