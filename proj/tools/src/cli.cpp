#include "weakpar/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "weakpar/weakpar.hpp"

namespace weakpar::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchema = 1;

// CLI-level enumeration caps, on top of the library limits.
constexpr std::size_t kSuiteCap = 12;
constexpr std::size_t kRsrCap = 12;
constexpr std::size_t kQsimCap = 16;
constexpr std::size_t kGroverAllInputsCap = 12;
constexpr std::size_t kProfileDepthCap = 20;

constexpr const char* kExactEnumeration = "exact-enumeration";
constexpr const char* kExactRational = "exact-rational";
constexpr const char* kHeuristic = "heuristic";

std::string monte_carlo(std::uint64_t trials, std::uint64_t seed) {
    return "monte-carlo(" + std::to_string(trials) + "," + std::to_string(seed) + ")";
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

Rational fraction(std::uint64_t num, std::uint64_t den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string hex_word(InputWord x) {
    std::ostringstream os;
    os << std::hex << x;
    return os.str();
}

class Params {
public:
    explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

    bool has(const std::string& key) const { return p_.count(key) != 0; }

    std::string text(const std::string& key, const std::string& fallback = "") const {
        const auto it = p_.find(key);
        return it == p_.end() ? fallback : it->second;
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
        const auto it = p_.find(key);
        if (it == p_.end()) {
            return fallback;
        }
        std::uint64_t v = 0;
        const auto& s = it->second;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            throw ParseError("--" + key + ": expected a non-negative integer, got '" + s + "'");
        }
        return v;
    }

    std::size_t size(const std::string& key, std::size_t fallback) const {
        return static_cast<std::size_t>(u64(key, fallback));
    }

    std::size_t required_size(const std::string& key) const {
        if (!has(key)) {
            throw Error("missing required --" + key);
        }
        return size(key, 0);
    }

    bool flag(const std::string& key) const {
        const auto it = p_.find(key);
        return it != p_.end() && it->second != "false" && it->second != "0";
    }

    Flavor flavor() const { return parse_flavor(text("flavor", "or")); }

private:
    const std::map<std::string, std::string>& p_;
};

struct Report {
    Json json;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool passed = true;
};

Json header(const std::string& command, std::uint64_t seed) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

Json rational_field(const Rational& r, const std::string& provenance) {
    return Json{{"value", to_string(r)}, {"decimal", to_double(r)}, {"provenance", provenance}};
}

void require_positive(const char* key, std::size_t v) {
    if (v == 0) {
        throw Error(std::string("--") + key + " must be at least 1");
    }
}

InputWord parse_input_word(const std::string& text, std::size_t n) {
    std::string s = text;
    if (s.rfind("0x", 0) == 0) {
        s = s.substr(2);
    }
    InputWord x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x, 16);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("--input: expected a hex word, got '" + text + "'");
    }
    if (n < 64 && (x >> n) != 0) {
        throw ParseError("--input: word has bits beyond arity " + std::to_string(n));
    }
    return x;
}

TruthTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open truth-table file '" + path + "'");
    }
    return read_truth_table(in);
}

TruthTable named_function(const Params& p) {
    const std::string name = p.text("function");
    if (name == "andor") {
        return andor::make_andor(p.size("depth", 2));
    }
    const std::size_t n = p.required_size("n");
    if (name == "parity") return make_parity(n);
    if (name == "or") return make_or(n);
    if (name == "const0") return make_const(n, false);
    if (name == "const1") return make_const(n, true);
    throw ParseError("unknown --function '" + name + "' (parity, or, andor, const0, const1)");
}

// ---------------------------------------------------------------- measures

Report cmd_measures(const Params& p, std::uint64_t seed) {
    Report r;
    r.json = header("measures", seed);
    const bool have_function = p.has("table") || p.has("function");
    if (!have_function && !p.has("dist")) {
        throw Error("measures needs --table, --function or --dist");
    }

    if (have_function) {
        const TruthTable f = p.has("table") ? load_table(p.text("table")) : named_function(p);
        if (p.has("save-table")) {
            std::ofstream out(p.text("save-table"));
            if (!out) {
                throw Error("cannot write '" + p.text("save-table") + "'");
            }
            write_truth_table(out, f);
        }
        const std::size_t n = f.arity();
        const Limits& lim = limits();
        Json m;
        m["arity"] = n;
        m["table"] = f.to_hex();
        m["ones"] = f.count_ones();
        m["balanced"] = f.is_balanced();
        const int deg = degree_mobius(f);
        const int sens = sensitivity(f);
        m["degree"] = deg;
        m["sensitivity"] = sens;
        Json skipped = Json::array();
        bool ok = true;
        if (n <= lim.subcube_cap) {
            const int sub = degree_subcube(f);
            m["degree_subcube"] = sub;
            ok = ok && sub == deg;
        } else {
            m["degree_subcube"] = nullptr;
            skipped.push_back("degree_subcube: SUBCUBE_CAP=" + std::to_string(lim.subcube_cap));
        }
        int bs = -1;
        if (n <= lim.bs_cap) {
            bs = block_sensitivity(f);
            m["block_sensitivity"] = bs;
            ok = ok && sens <= bs;
        } else {
            m["block_sensitivity"] = nullptr;
            skipped.push_back("block_sensitivity: BS_CAP=" + std::to_string(lim.bs_cap));
        }
        if (n <= lim.d_cap) {
            const auto d = exact_D(f);
            m["D"] = d.depth;
            m["D_tree"] = d.tree.to_string();
            ok = ok && deg <= d.depth && (bs < 0 || bs <= d.depth);
        } else {
            m["D"] = nullptr;
            skipped.push_back("D: D_CAP=" + std::to_string(lim.d_cap));
        }
        m["parity_agreement"] = agreement_count(f, make_parity(n));
        m["correlation_with_parity"] = rational_field(correlation_with_parity(f), kExactRational);
        m["skipped"] = skipped;
        m["identities_hold"] = ok;
        m["provenance"] = kExactEnumeration;
        r.json["function"] = m;
        r.passed = r.passed && ok;
    }

    if (p.has("dist")) {
        std::ifstream in(p.text("dist"));
        if (!in) {
            throw Error("cannot open tree-distribution file '" + p.text("dist") + "'");
        }
        const auto d = read_tree_distribution(in, p.size("n", 0));
        const auto profile = acceptance_profile(d);
        const Rational corr = correlation_with_parity(profile);
        Json usage = Json::array();
        Rational total = 0;
        for (const auto& u : variable_usage(d)) {
            usage.push_back(to_string(u));
            total += u;
        }
        Json j;
        j["arity"] = d.arity();
        j["trees"] = d.entries().size();
        j["max_depth"] = d.max_depth();
        j["correlation_with_parity"] = rational_field(corr, kExactRational);
        j["variable_usage"] = usage;
        j["total_usage"] = rational_field(total, kExactRational);
        j["success_set_size"] = success_set(profile, make_parity(d.arity())).size();
        const bool shallow = static_cast<std::size_t>(d.max_depth()) < d.arity();
        const bool ok = !shallow || corr == 0;
        j["shallow"] = shallow;
        j["identities_hold"] = ok;
        j["provenance"] = kExactEnumeration;
        r.json["distribution"] = j;
        r.passed = r.passed && ok;
    }
    r.json["passed"] = r.passed;
    return r;
}

// ----------------------------------------------------------- andor-profile

Report cmd_andor_profile(const Params& p, std::uint64_t seed) {
    const std::size_t depth = p.size("depth", 4);
    require_cap("--depth", depth, kProfileDepthCap);
    const std::uint64_t trials = p.u64("trials", 1000);
    require_positive("trials", trials);
    const auto table = andor::worst_case_table(depth);

    Report r;
    r.json = header("andor-profile", seed);
    r.json["depth"] = depth;
    r.json["trials"] = trials;
    r.columns = {"depth", "input_class", "value", "exact_expectation", "exact_decimal", "empirical_mean",
                 "empirical_stderr", "trials", "w0", "w1", "provenance"};
    const std::string provenance = std::string(kExactRational) + ";" + monte_carlo(trials, seed);

    std::uint64_t row_index = 0;
    for (std::size_t d = 0; d <= depth; ++d) {
        const std::size_t n = static_cast<std::size_t>(andor::leaf_count(d));
        Rng input_rng(derive_seed(seed, 1000 + d));
        std::vector<bool> random_bits(n);
        for (std::size_t i = 0; i < n; ++i) random_bits[i] = coin(input_rng);
        const std::vector<std::pair<std::string, std::vector<bool>>> classes = {
            {"worst0", andor::worst_case_input(d, false)},
            {"worst1", andor::worst_case_input(d, true)},
            {"zeros", std::vector<bool>(n, false)},
            {"ones", std::vector<bool>(n, true)},
            {"random", random_bits},
        };
        for (const auto& [name, bits] : classes) {
            const andor::BitSource source = [&bits](std::size_t i) { return static_cast<bool>(bits[i]); };
            const bool value = andor::value(d, source);
            const Rational exact = andor::expected_queries_exact(d, source);

            Rng rng(derive_seed(seed, row_index++));
            double sum = 0;
            double sum_sq = 0;
            bool zero_error = true;
            for (std::uint64_t t = 0; t < trials; ++t) {
                InstrumentedOracle oracle(n, source);
                zero_error = zero_error && andor::randomized_eval(d, oracle, rng) == value;
                const auto q = static_cast<double>(oracle.query_count());
                sum += q;
                sum_sq += q * q;
            }
            const double mean = sum / static_cast<double>(trials);
            const double var = trials > 1 ? (sum_sq - sum * mean) / static_cast<double>(trials - 1) : 0.0;
            const double se = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));

            bool ok = zero_error && exact <= table[d].worst();
            if (name == "worst0") ok = ok && !value && exact == table[d].w0;
            if (name == "worst1") ok = ok && value && exact == table[d].w1;
            r.passed = r.passed && ok;

            r.rows.push_back({std::to_string(d), name, value ? "1" : "0", to_string(exact), fixed(to_double(exact)),
                              fixed(mean), fixed(se), std::to_string(trials), to_string(table[d].w0),
                              to_string(table[d].w1), provenance});
        }
    }
    r.json["passed"] = r.passed;
    return r;
}

// -------------------------------------------------------- weakparity-verify

Json schedule_json(const CompositionSchedule& s) {
    return Json{{"outer_arity", s.outer_arity},
                {"inner_arity", s.inner_arity},
                {"block_size", s.block_size},
                {"leftover", s.leftover()},
                {"eps_achieved", rational_field(s.eps_achieved, kExactRational)}};
}

Report cmd_weakparity_verify(const Params& p, std::uint64_t seed) {
    const std::size_t n = p.required_size("n");
    require_positive("n", n);
    const Flavor flavor = p.flavor();
    const Rational eps = p.has("eps") ? parse_rational(p.text("eps")) : pow2(-static_cast<long>(n));

    Report r;
    r.json = header("weakparity-verify", seed);
    r.json["n"] = n;
    r.json["flavor"] = std::string(to_string(flavor));
    r.json["eps_requested"] = rational_field(eps, kExactRational);

    Guesser g = Guesser::constant(1, false);
    if (p.flag("compose")) {
        const auto s = schedule_for(n, eps, flavor);
        g = build_guesser(s);
        r.json["schedule"] = schedule_json(s);
    } else {
        if (flavor == Flavor::kAndOr && (n & (n - 1)) != 0) {
            throw Error("--flavor andor needs --n a power of two (or use --compose)");
        }
        g = weak_guesser_minimal_eps(n, flavor);
        r.json["schedule"] = nullptr;
    }
    r.json["guesser"] = g.label();

    VerifyOptions opts;
    opts.samples = p.u64("trials", opts.samples);
    opts.seed = seed;
    const auto rep = verify_weak(g, eps, opts);
    const std::string provenance = rep.exact ? kExactEnumeration : monte_carlo(rep.samples, seed);

    r.json["exact"] = rep.exact;
    r.json["samples"] = rep.samples;
    r.json["success_count"] = rep.success_count;
    r.json["success_fraction"] = rational_field(rep.success_fraction, provenance);
    r.json["bias"] = rational_field(Rational(rep.success_fraction - Rational(1, 2)), provenance);
    r.json["worst_case_queries"] = {{"value", rep.worst_case_queries}, {"provenance", provenance}};
    r.json["expected_queries_worst_input"] = rational_field(rep.expected_queries_worst_input, provenance);
    r.passed = rep.passed;
    r.json["passed"] = r.passed;
    return r;
}

// ---------------------------------------------------------- weakparity-rsr

Report cmd_weakparity_rsr(const Params& p, std::uint64_t seed) {
    const Flavor flavor = p.flavor();
    const std::size_t n = p.size("n", 4);
    require_positive("n", n);
    require_cap("RSR_CAP", n, kRsrCap);
    if (flavor == Flavor::kAndOr && (n & (n - 1)) != 0) {
        throw Error("--flavor andor needs --n a power of two");
    }
    const std::uint64_t trials = p.u64("trials", 1000);
    const Guesser g = weak_guesser_minimal_eps(n, flavor);
    const TruthTable table = g.table();
    const std::uint64_t size = std::uint64_t{1} << n;
    const Rational global = fraction(agreement_count(table, make_parity(n)), size);

    Report r;
    r.json = header("weakparity-rsr", seed);
    r.json["n"] = n;
    r.json["flavor"] = std::string(to_string(flavor));
    r.json["guesser"] = g.label();
    r.json["global_success"] = rational_field(global, kExactEnumeration);
    r.columns = {"input", "parity", "guess", "exact_success", "exact_decimal", "empirical_success", "trials",
                 "provenance"};
    const std::string provenance = std::string(kExactEnumeration) + ";" + monte_carlo(trials, seed);

    Rational worst = 1;
    for (InputWord x = 0; x < size; ++x) {
        const Rational exact = rsr_success_probability(g, x);
        worst = std::min(worst, exact);
        r.passed = r.passed && exact == global;
        Rng rng(derive_seed(seed, x));
        const bool parity = parity_of(x) != 0;
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            hits += random_self_reduce(g, x, rng) == parity ? 1 : 0;
        }
        const double empirical = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
        r.rows.push_back({hex_word(x), parity ? "1" : "0", table(x) ? "1" : "0", to_string(exact),
                          fixed(to_double(exact)), fixed(empirical), std::to_string(trials), provenance});
    }

    Json amp = Json::array();
    Rational previous = 0;
    for (std::uint64_t votes : {1, 3, 5, 7}) {
        const Rational q = majority_success_probability(worst, votes);
        r.passed = r.passed && q >= previous;
        previous = q;
        amp.push_back({{"votes", votes}, {"success", rational_field(q, kExactRational)}});
    }
    r.json["min_input_success"] = rational_field(worst, kExactEnumeration);
    r.json["majority"] = amp;
    r.json["passed"] = r.passed;
    return r;
}

// ---------------------------------------------------------------- lambda

Json certificate_json(const LambdaCertificate& c) {
    Json j;
    j["n"] = c.n;
    j["value"] = c.value;
    j["exact"] = c.exact;
    j["witness-hex"] = c.witness.membership().to_hex();
    j["witness_size"] = c.witness.size();
    return j;
}

Report lambda_report(const char* command, const LambdaCertificate& c, std::uint64_t seed, const char* provenance) {
    Report r;
    r.json = header(command, seed);
    const Json cert = certificate_json(c);
    for (const auto& [k, v] : cert.items()) r.json[k] = v;
    r.json["provenance"] = provenance;
    bool ok = true;
    try {
        verify_certificate(c);
    } catch (const Error&) {
        ok = false;
    }
    r.json["certificate_verified"] = ok;
    if (c.n >= 2) {
        const double lower = lambda_lower_bound(c.n);
        const double upper = std::sqrt(static_cast<double>(c.n)) + 1;
        r.json["lower_bound"] = lower;
        r.json["upper_bound"] = upper;
        ok = ok && lower <= c.value;
        // Annealing only bounds lambda from above; the sqrt(n)+1 bound applies to the true value.
        if (c.exact) ok = ok && c.value <= upper;
    }
    r.passed = ok;
    r.json["passed"] = ok;
    return r;
}

Report cmd_lambda_exact(const Params& p, std::uint64_t seed) {
    const std::size_t n = p.required_size("n");
    return lambda_report("lambda-exact", lambda_exact(n), seed, kExactEnumeration);
}

Report cmd_lambda_search(const Params& p, std::uint64_t seed) {
    const std::size_t n = p.required_size("n");
    require_positive("n", n);
    require_cap("MAX_ARITY", n, limits().max_arity);
    AnnealingOptions opts;
    opts.iterations = p.u64("iters", opts.iterations);
    opts.seed = seed;
    auto r = lambda_report("lambda-search", lambda_upper_search(n, opts), seed, kHeuristic);
    r.json["iterations"] = opts.iterations;
    return r;
}

// ---------------------------------------------------------------- qsim

Report cmd_qsim_grover(const Params& p, std::uint64_t seed) {
    const std::size_t n = p.required_size("n");
    require_positive("n", n);
    require_cap("QSIM_CAP", n, kQsimCap);
    const bool exact = p.flag("exact");
    const std::uint64_t trials = p.u64("trials", 1000);
    const std::uint64_t budget = qsim::grover_query_budget(n);

    std::vector<InputWord> inputs;
    if (p.has("input")) {
        inputs.push_back(parse_input_word(p.text("input"), n));
    } else {
        require_cap("GROVER_ALL_INPUTS_CAP", n, kGroverAllInputsCap);
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) inputs.push_back(x);
    }

    Report r;
    r.json = header("qsim-grover", seed);
    r.json["n"] = n;
    r.json["budget"] = budget;
    r.json["iteration_range"] = qsim::grover_iteration_range(n);
    r.json["trials_per_call"] = qsim::kGroverTrials;
    r.json["inputs_checked"] = inputs.size();
    if (inputs.size() == 1) r.json["input"] = hex_word(inputs[0]);

    if (exact) {
        double min_success = 1;
        double max_expected = 0;
        std::uint64_t worst = 0;
        for (InputWord x : inputs) {
            const auto e = qsim::grover_or_exact(n, x);
            min_success = std::min(min_success, e.success_probability);
            max_expected = std::max(max_expected, e.expected_queries);
            worst = std::max(worst, e.worst_case_queries);
            if (inputs.size() == 1) {
                r.json["or"] = x != 0;
                r.json["accept_probability"] = e.accept_probability;
            }
        }
        r.json["min_success_probability"] = min_success;
        r.json["worst_case_queries"] = worst;
        r.json["max_expected_queries"] = max_expected;
        r.json["provenance"] = kExactEnumeration;
        r.passed = min_success >= 2.0 / 3.0 && worst <= budget;
    } else {
        std::uint64_t correct = 0;
        std::uint64_t runs = 0;
        std::uint64_t max_queries = 0;
        std::uint64_t total_queries = 0;
        bool false_positive = false;
        for (InputWord x : inputs) {
            Rng rng(derive_seed(seed, x));
            for (std::uint64_t t = 0; t < trials; ++t) {
                qsim::QueryOracle oracle(n, x);
                const bool out = qsim::grover_or(n, oracle, rng);
                correct += out == (x != 0) ? 1 : 0;
                false_positive = false_positive || (out && x == 0);
                max_queries = std::max(max_queries, oracle.query_count());
                total_queries += oracle.query_count();
                ++runs;
            }
        }
        r.json["trials"] = trials;
        r.json["success_rate"] = runs == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(runs);
        r.json["mean_queries"] = runs == 0 ? 0.0 : static_cast<double>(total_queries) / static_cast<double>(runs);
        r.json["max_queries"] = max_queries;
        r.json["provenance"] = monte_carlo(trials, seed);
        r.passed = !false_positive && max_queries <= budget;
    }
    r.json["passed"] = r.passed;
    return r;
}

Report cmd_qsim_parity(const Params& p, std::uint64_t seed) {
    const std::size_t n = p.required_size("n");
    require_positive("n", n);
    require_cap("QSIM_CAP", n, kQsimCap);
    const std::uint64_t expected_queries = (n + 1) / 2;

    Report r;
    r.json = header("qsim-parity", seed);
    r.json["n"] = n;
    r.json["queries_expected"] = expected_queries;
    r.json["provenance"] = kExactEnumeration;
    r.columns = {"input", "parity", "output", "probability", "queries"};
    for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
        qsim::QueryOracle oracle(n, x);
        const auto run = qsim::exact_parity_quantum(n, oracle);
        const bool parity = parity_of(x) != 0;
        r.passed = r.passed && run.output == parity && run.probability >= 1 - 1e-12 &&
                   oracle.query_count() == expected_queries;
        r.rows.push_back({hex_word(x), parity ? "1" : "0", run.output ? "1" : "0", fixed(run.probability, 12),
                          std::to_string(oracle.query_count())});
    }
    r.json["passed"] = r.passed;
    return r;
}

// ---------------------------------------------------------------- paper-suite

struct Criterion {
    bool passed = true;
    std::string detail;
    std::string provenance = kExactEnumeration;

    void require(bool ok, const std::string& what) {
        if (!ok && passed) {
            passed = false;
            detail = "failed: " + what;
        }
    }
};

DecisionTree random_tree(std::size_t n, int depth_left, std::uint64_t used, Rng& rng) {
    if (depth_left == 0 || uniform_below(rng, 4) == 0) {
        return DecisionTree::leaf(coin(rng));
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
        if (((used >> i) & 1U) == 0) free.push_back(i);
    }
    if (free.empty()) {
        return DecisionTree::leaf(coin(rng));
    }
    const std::size_t v = free[uniform_below(rng, free.size())];
    const std::uint64_t next = used | (std::uint64_t{1} << v);
    return DecisionTree::query(v, random_tree(n, depth_left - 1, next, rng), random_tree(n, depth_left - 1, next, rng));
}

TruthTable random_table(std::size_t n, Rng& rng) {
    return TruthTable::from_function(n, [&](InputWord) { return coin(rng); });
}

std::vector<std::size_t> andor_depths(std::size_t max_n) {
    std::vector<std::size_t> ds;
    for (std::size_t d = 0; (std::size_t{1} << d) <= max_n; ++d) ds.push_back(d);
    return ds;
}

Criterion suite_agreement(std::size_t max_n) {
    Criterion c;
    for (std::size_t n = 1; n <= max_n; ++n) {
        c.require(agreement_count(make_or(n), make_parity(n)) == (std::uint64_t{1} << (n - 1)) + 1,
                  "n=" + std::to_string(n));
    }
    if (c.passed) c.detail = "n=1.." + std::to_string(max_n);
    return c;
}

Criterion suite_andor_agreement(std::size_t max_n) {
    Criterion c;
    for (std::size_t d : andor_depths(max_n)) {
        const std::uint64_t half = std::uint64_t{1} << ((std::size_t{1} << d) - 1);
        const std::uint64_t expected = d % 2 == 0 ? half + 1 : half - 1;
        c.require(andor::parity_agreement(d) == expected, "d=" + std::to_string(d));
    }
    if (c.passed) c.detail = "d<=" + std::to_string(andor_depths(max_n).back());
    return c;
}

Criterion suite_growth(std::size_t max_n) {
    Criterion c;
    c.provenance = kExactRational;
    const auto table = andor::worst_case_table(24);
    const double limit = andor::growth_constant_squared();
    double gap = 0;
    for (std::size_t d = 20; d <= 22; ++d) gap = std::max(gap, std::abs(table.two_level_ratio(d) - limit));
    c.require(gap < 1e-3, "ratio gap " + fixed(gap));
    for (std::size_t d : andor_depths(max_n)) {
        const std::size_t n = std::size_t{1} << d;
        Rational best = 0;
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            best = std::max(best, andor::expected_queries_exact(d, x));
        }
        c.require(best == table[d].worst(), "max over inputs at d=" + std::to_string(d));
    }
    if (c.passed) c.detail = "ratio gap " + fixed(gap) + ", maxima match table";
    return c;
}

Criterion suite_zero_error(std::size_t max_n, std::uint64_t seed) {
    constexpr std::uint64_t kTrials = 2000;
    Criterion c;
    c.provenance = monte_carlo(kTrials, seed);
    double worst_z = 0;
    for (std::size_t d : andor_depths(max_n)) {
        const std::size_t n = std::size_t{1} << d;
        Rng rng(derive_seed(seed, d));
        for (std::uint64_t t = 0; t < kTrials; ++t) {
            const InputWord x = uniform_word(rng, static_cast<unsigned>(n));
            InstrumentedOracle oracle(n, x);
            const bool expected = andor::make_andor(d)(x);
            c.require(andor::randomized_eval(d, oracle, rng) == expected, "zero error at d=" + std::to_string(d));
        }
        const auto bits = andor::worst_case_input(d, true);
        const andor::BitSource source = [&bits](std::size_t i) { return static_cast<bool>(bits[i]); };
        const double mu = to_double(andor::expected_queries_exact(d, source));
        double sum = 0;
        double sum_sq = 0;
        for (std::uint64_t t = 0; t < kTrials; ++t) {
            InstrumentedOracle oracle(n, source);
            andor::randomized_eval(d, oracle, rng);
            const auto q = static_cast<double>(oracle.query_count());
            sum += q;
            sum_sq += q * q;
        }
        const double mean = sum / kTrials;
        const double se = std::sqrt(std::max(0.0, (sum_sq - sum * mean) / (kTrials - 1)) / kTrials);
        if (se == 0) {
            c.require(mean == mu, "mean at d=" + std::to_string(d));
        } else {
            worst_z = std::max(worst_z, std::abs(mean - mu) / se);
        }
    }
    c.require(worst_z <= 3, "mean off by " + fixed(worst_z, 2) + " SE");
    if (c.passed) c.detail = "worst |z| " + fixed(worst_z, 2);
    return c;
}

Criterion suite_composition(std::size_t max_n) {
    Criterion c;
    std::vector<Guesser> inners = {Guesser::or_function(2)};
    if (max_n >= 4) {
        inners.push_back(Guesser::or_function(4));
        inners.push_back(weak_guesser_minimal_eps(4, Flavor::kAndOr));
    }
    for (const auto& inner : inners) {
        const auto base = verify_weak(inner, pow2(-static_cast<long>(inner.arity())));
        for (std::size_t k = 1; k <= 3 && k * inner.arity() <= max_n; ++k) {
            const auto composed = verify_weak(compose_blocks(inner, k), base.epsilon);
            const std::string tag = inner.label() + " k=" + std::to_string(k);
            c.require(composed.success_fraction == base.success_fraction, "fraction " + tag);
            c.require(composed.worst_case_queries == k * base.worst_case_queries, "queries " + tag);
        }
    }
    if (c.passed) c.detail = std::to_string(inners.size()) + " inner guessers";
    return c;
}

Criterion suite_upper(std::size_t max_n) {
    Criterion c;
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(max_n))));
    const Rational eps = pow2(-static_cast<long>(m));
    const auto s = schedule_for(max_n, eps, Flavor::kOr);
    const auto rep = verify_weak(build_guesser(s), eps);
    c.require(rep.passed, "verify_weak");
    c.require(s.eps_achieved == eps, "achieved eps " + to_string(s.eps_achieved));
    c.require(rep.worst_case_queries == max_n, "worst queries " + std::to_string(rep.worst_case_queries));
    if (c.passed) {
        c.detail = "N=" + std::to_string(max_n) + " m=" + std::to_string(s.inner_arity) +
                   " k=" + std::to_string(s.block_size) + " queries " + std::to_string(rep.worst_case_queries);
    }
    return c;
}

Criterion suite_rsr(std::size_t max_n) {
    Criterion c;
    c.provenance = kExactRational;
    const Guesser g = max_n >= 4 ? weak_guesser_minimal_eps(4, Flavor::kAndOr) : Guesser::or_function(max_n);
    const std::size_t n = g.arity();
    const Rational p = fraction(agreement_count(g.table(), make_parity(n)), std::uint64_t{1} << n);
    for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
        c.require(rsr_success_probability(g, x) == p, "input " + hex_word(x));
    }
    const Rational three = majority_success_probability(p, 3);
    c.require(three == Rational(p * p * p + 3 * p * p * (1 - p)), "r=3 formula");
    Rational previous = 0;
    for (std::uint64_t r : {1, 3, 5, 7}) {
        const Rational q = majority_success_probability(p, r);
        c.require(q >= previous, "monotone at r=" + std::to_string(r));
        previous = q;
    }
    if (c.passed) c.detail = g.label() + " per-input " + to_string(p) + ", r=3 " + to_string(three);
    return c;
}

Criterion suite_uncorrelated(std::size_t max_n, std::uint64_t seed) {
    Criterion c;
    c.provenance = kExactRational;
    Rng rng(derive_seed(seed, 8));
    const std::size_t top = std::min<std::size_t>(max_n, 8);
    int checked = 0;
    for (int i = 0; i < 20 && top >= 2; ++i) {
        const std::size_t n = 2 + uniform_below(rng, top - 1);
        std::vector<DecisionTree> trees;
        const std::size_t count = 1 + uniform_below(rng, 3);
        for (std::size_t t = 0; t < count; ++t) trees.push_back(random_tree(n, static_cast<int>(n) - 1, 0, rng));
        const auto d = TreeDistribution::uniform(n, trees);
        c.require(correlation_with_parity(acceptance_profile(d)) == 0, "distribution " + std::to_string(i));
        ++checked;
    }
    if (c.passed) c.detail = std::to_string(checked) + " distributions";
    return c;
}

Criterion suite_degree(std::size_t max_n, std::uint64_t seed) {
    Criterion c;
    const std::size_t small = std::min<std::size_t>(max_n, 3);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (std::uint64_t{1} << small)); ++code) {
        const auto f = TruthTable::from_function(small, [&](InputWord x) { return ((code >> x) & 1U) != 0; });
        c.require(degree_mobius(f) == degree_subcube(f), "exhaustive n=" + std::to_string(small));
    }
    Rng rng(derive_seed(seed, 9));
    for (int i = 0; i < 100; ++i) {
        const auto f = random_table(max_n, rng);
        c.require(degree_mobius(f) == degree_subcube(f), "random n=" + std::to_string(max_n));
    }
    if (c.passed) c.detail = "all at n=" + std::to_string(small) + ", 100 at n=" + std::to_string(max_n);
    return c;
}

Criterion suite_lambda(std::size_t max_n) {
    Criterion c;
    std::string values;
    for (std::size_t n = 2; n <= std::min<std::size_t>(max_n, limits().lambda_exact_cap); ++n) {
        const auto cert = lambda_exact(n);
        c.require(cert.exact, "exact flag n=" + std::to_string(n));
        c.require(lambda_lower_bound(n) <= cert.value, "lower bound n=" + std::to_string(n));
        c.require(cert.value <= std::sqrt(static_cast<double>(n)) + 1, "upper bound n=" + std::to_string(n));
        try {
            verify_certificate(cert);
        } catch (const Error&) {
            c.require(false, "certificate n=" + std::to_string(n));
        }
        values += (values.empty() ? "" : ",") + std::to_string(cert.value);
    }
    if (c.passed) c.detail = "values " + values;
    return c;
}

Criterion suite_complement_degree(std::size_t max_n, std::uint64_t seed) {
    Criterion c;
    const std::size_t n = std::clamp<std::size_t>(max_n, 2, limits().lambda_exact_cap);
    const int lam = lambda_exact(n).value;
    Rng rng(derive_seed(seed, 11));
    int checked = 0;
    while (checked < 50) {
        const VertexSet g(random_table(n, rng));
        if (2 * g.size() == (std::uint64_t{1} << n)) continue;
        const auto [a, b] = gotsman_linial_check(g);
        c.require(std::max(a, b) >= lam, "set " + g.membership().to_hex());
        ++checked;
    }
    if (c.passed) c.detail = "50 sets at n=" + std::to_string(n);
    return c;
}

Criterion suite_weak_any(std::size_t max_n, std::uint64_t seed) {
    Criterion c;
    auto check = [&](const TruthTable& f, Flavor flavor) {
        const std::size_t n = f.arity();
        const auto g = weak_any(f, flavor);
        c.require(agreement_count(g.table(), f) >= (std::uint64_t{1} << (n - 1)) + 1, "f=" + f.to_hex());
    };
    const std::size_t small = std::min<std::size_t>(max_n, 3);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (std::uint64_t{1} << small)); ++code) {
        check(TruthTable::from_function(small, [&](InputWord x) { return ((code >> x) & 1U) != 0; }), Flavor::kOr);
    }
    Rng rng(derive_seed(seed, 12));
    for (int i = 0; i < 100; ++i) check(random_table(max_n, rng), Flavor::kOr);
    for (std::size_t n : {4, 8}) {
        if (n > max_n) continue;
        for (int i = 0; i < 100; ++i) {
            TruthTable f = random_table(n, rng);
            if (i % 2 == 0) {
                // x1 xor h is balanced, which exercises the non-constant branch.
                f = TruthTable::from_function(n, [&](InputWord x) { return f(x & ~InputWord{1}) != ((x & 1U) != 0); });
            }
            check(f, Flavor::kAndOr);
        }
    }
    if (c.passed) c.detail = "all at n=" + std::to_string(small) + ", random up to n=" + std::to_string(max_n);
    return c;
}

Criterion suite_quantum(std::size_t max_n) {
    Criterion c;
    for (InputWord x = 0; x < 4; ++x) {
        qsim::QueryOracle oracle(2, x);
        const auto dist = qsim::dj_pair_distribution(oracle, 0, 1);
        const int b = parity_of(x);
        c.require(std::abs(dist[b] - 1) <= 1e-12 && oracle.query_count() == 1, "dj pair " + hex_word(x));
    }
    for (std::size_t n = 2; n <= max_n; n += 2) {
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            qsim::QueryOracle oracle(n, x);
            const auto run = qsim::exact_parity_quantum(n, oracle);
            c.require(run.output == (parity_of(x) != 0) && oracle.query_count() == n / 2,
                      "parity n=" + std::to_string(n));
        }
    }
    double min_success = 1;
    for (std::size_t n : {2, 4, 8}) {
        if (n > max_n) continue;
        for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
            const auto e = qsim::grover_or_exact(n, x);
            min_success = std::min(min_success, e.success_probability);
            c.require(e.success_probability >= 2.0 / 3.0, "grover success n=" + std::to_string(n));
            c.require(e.worst_case_queries <= qsim::grover_query_budget(n), "grover budget n=" + std::to_string(n));
        }
    }
    if (c.passed) c.detail = "min Grover success " + fixed(min_success, 4);
    return c;
}

Criterion suite_read_all(std::size_t max_n) {
    Criterion c;
    c.provenance = kExactRational;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (const Rational& eps : {Rational(1, 4), Rational(1, 8)}) {
            const ReadAllOrGuess alg(n, eps);
            for (InputWord x = 0; x < (InputWord{1} << n); ++x) {
                c.require(alg.success_probability(x) >= Rational(1, 2), "success n=" + std::to_string(n));
                c.require(alg.expected_queries(x) == Rational(2 * eps * n), "queries n=" + std::to_string(n));
            }
        }
    }
    if (c.passed) c.detail = "n=1.." + std::to_string(max_n);
    return c;
}

Report cmd_paper_suite(const Params& p, std::uint64_t seed) {
    const std::size_t max_n = p.size("max-n", 4);
    if (max_n < 2) {
        throw Error("--max-n must be at least 2");
    }
    require_cap("SUITE_CAP", max_n, kSuiteCap);

    const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
        {"or-parity agreement", [&] { return suite_agreement(max_n); }},
        {"and/or parity agreement", [&] { return suite_andor_agreement(max_n); }},
        {"worst-case growth", [&] { return suite_growth(max_n); }},
        {"zero-error evaluation", [&] { return suite_zero_error(max_n, seed); }},
        {"composition law", [&] { return suite_composition(max_n); }},
        {"composed upper bound", [&] { return suite_upper(max_n); }},
        {"random self-reduction", [&] { return suite_rsr(max_n); }},
        {"shallow trees uncorrelated", [&] { return suite_uncorrelated(max_n, seed); }},
        {"degree oracles agree", [&] { return suite_degree(max_n, seed); }},
        {"lambda bounds", [&] { return suite_lambda(max_n); }},
        {"complement degree bridge", [&] { return suite_complement_degree(max_n, seed); }},
        {"weak guesser for any function", [&] { return suite_weak_any(max_n, seed); }},
        {"quantum query counts", [&] { return suite_quantum(max_n); }},
        {"read-all-or-guess", [&] { return suite_read_all(max_n); }},
    };

    Report r;
    r.json = header("paper-suite", seed);
    r.json["max_n"] = max_n;
    Json list = Json::array();
    int passed = 0;
    int id = 1;
    for (const auto& [name, fn] : criteria) {
        const Criterion c = fn();
        passed += c.passed ? 1 : 0;
        list.push_back({{"id", id++}, {"name", name}, {"passed", c.passed}, {"detail", c.detail},
                        {"provenance", c.provenance}});
    }
    r.json["criteria"] = list;
    r.json["passed_count"] = passed;
    r.json["total"] = criteria.size();
    r.passed = passed == static_cast<int>(criteria.size());
    r.json["passed"] = r.passed;
    return r;
}

// ---------------------------------------------------------------- output

using Handler = Report (*)(const Params&, std::uint64_t);

struct CommandInfo {
    const char* name;
    Handler handler;
    Format native;
};

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> table = {
        {"measures", cmd_measures, Format::kJson},
        {"andor-profile", cmd_andor_profile, Format::kCsv},
        {"weakparity-verify", cmd_weakparity_verify, Format::kJson},
        {"weakparity-rsr", cmd_weakparity_rsr, Format::kCsv},
        {"lambda-exact", cmd_lambda_exact, Format::kJson},
        {"lambda-search", cmd_lambda_search, Format::kJson},
        {"qsim-grover", cmd_qsim_grover, Format::kJson},
        {"qsim-parity", cmd_qsim_parity, Format::kCsv},
        {"paper-suite", cmd_paper_suite, Format::kJson},
    };
    return table;
}

void write_csv(std::ostream& out, const std::string& command, std::uint64_t seed, const Report& r) {
    out << "# schema=" << kSchema << " command=" << command << " seed=" << seed
        << " passed=" << (r.passed ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_json(std::ostream& out, Report r) {
    if (!r.columns.empty()) {
        Json rows = Json::array();
        for (const auto& row : r.rows) {
            Json obj;
            for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = row[i];
            rows.push_back(obj);
        }
        r.json["rows"] = rows;
    }
    out << r.json.dump(2) << "\n";
}

class ThreadScope {
public:
    explicit ThreadScope(std::size_t n) : saved_(thread_count()) {
        if (n > 0) set_thread_count(n);
    }
    ~ThreadScope() { set_thread_count(saved_); }
    ThreadScope(const ThreadScope&) = delete;
    ThreadScope& operator=(const ThreadScope&) = delete;

private:
    std::size_t saved_;
};

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : commands()) v.emplace_back(c.name);
        return v;
    }();
    return names;
}

std::string join_command(const std::string& group, const std::string& verb) {
    const std::string joined = group + "-" + verb;
    const auto& names = command_names();
    return std::find(names.begin(), names.end(), joined) != names.end() ? joined : "";
}

int run(const ExperimentManifest& manifest, std::ostream& out, std::ostream& err) {
    try {
        const auto& table = commands();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const CommandInfo& c) { return manifest.command == c.name; });
        if (it == table.end()) {
            throw Error("unknown command '" + manifest.command + "'");
        }
        Format format = it->native;
        if (manifest.format == "json") {
            format = Format::kJson;
        } else if (manifest.format == "csv") {
            format = Format::kCsv;
        } else if (!manifest.format.empty()) {
            throw ParseError("--format: expected json or csv, got '" + manifest.format + "'");
        }

        const Params params(manifest.params);
        const ThreadScope threads(params.size("threads", 0));
        const Report report = it->handler(params, manifest.seed);
        if (format == Format::kCsv && report.columns.empty()) {
            throw Error("command '" + manifest.command + "' has no CSV form");
        }

        std::ofstream file;
        if (!manifest.out.empty()) {
            file.open(manifest.out);
            if (!file) {
                throw Error("cannot write '" + manifest.out + "'");
            }
        }
        std::ostream& sink = manifest.out.empty() ? out : file;
        if (format == Format::kCsv) {
            write_csv(sink, manifest.command, manifest.seed, report);
        } else {
            write_json(sink, report);
        }
        return report.passed ? kPass : kIdentityFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

std::string csv_help() {
    return R"(CSV reports start with a '# schema=1 command=... seed=... passed=...' line.

andor-profile (one row per depth and input class):
  depth, input_class (worst0|worst1|zeros|ones|random), value,
  exact_expectation, exact_decimal, empirical_mean, empirical_stderr,
  trials, w0, w1 (worst-case table row), provenance
weakparity-rsr (one row per input):
  input (hex), parity, guess, exact_success, exact_decimal,
  empirical_success, trials, provenance
qsim-parity (one row per input):
  input (hex), parity, output, probability, queries

Caps: MAX_ARITY (env WEAKPAR_MAX_ARITY), BS_CAP, SUBCUBE_CAP, D_CAP,
LAMBDA_EXACT_CAP, SUITE_CAP=12 (--max-n), RSR_CAP=12, QSIM_CAP=16,
GROVER_ALL_INPUTS_CAP=12, --depth<=20 for andor-profile.
Exit status: 0 pass, 1 an asserted identity failed, 2 usage or input error.)";
}

}  // namespace weakpar::cli
