#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weakpar/cli.hpp"

namespace {

// "weakparity verify ..." -> "weakparity-verify ...".
std::vector<std::string> normalize(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.size() >= 2 && args[0].rfind('-', 0) != 0) {
        const std::string joined = weakpar::cli::join_command(args[0], args[1]);
        if (!joined.empty()) {
            args[0] = joined;
            args.erase(args.begin() + 1);
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = weakpar::cli;

    std::string commands;
    for (const auto& c : cli::command_names()) commands += (commands.empty() ? "" : ", ") + c;

    CLI::App app{"weakpar: weak parity experiments"};
    app.footer("Commands: " + commands + "\n\n" + cli::csv_help());

    cli::ExperimentManifest m;
    app.add_option("command", m.command, "Command to run")->required();
    app.add_option("--seed", m.seed, "Random seed (default 1)");
    app.add_option("--out", m.out, "Write the report here instead of stdout");
    app.add_option("--format", m.format, "json or csv (default: the command's native format)");

    const std::vector<std::pair<std::string, std::string>> valued = {
        {"n", "Input arity"},
        {"depth", "AND/OR tree depth"},
        {"eps", "Advantage epsilon as a/b"},
        {"iters", "Annealing iterations"},
        {"trials", "Monte Carlo trials (or samples above MAX_ARITY)"},
        {"flavor", "Guesser family: or | andor"},
        {"threads", "Worker threads (default: available parallelism)"},
        {"input", "Hex input word"},
        {"max-n", "Largest arity for paper-suite"},
        {"table", "Truth-table file"},
        {"function", "Named function: parity, or, andor, const0, const1"},
        {"dist", "Tree-distribution file"},
        {"save-table", "Write the measured truth table here"},
    };
    std::map<std::string, std::string> values;
    for (const auto& [name, help] : valued) {
        app.add_option("--" + name, values[name], help);
    }
    bool compose = false;
    bool exact = false;
    app.add_flag("--compose", compose, "Build the guesser by block composition");
    app.add_flag("--exact", exact, "Exact analysis instead of sampling");

    auto args = normalize(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kUsageError;
    }

    for (const auto& [name, help] : valued) {
        if (app.get_option("--" + name)->count() > 0) m.params[name] = values[name];
    }
    if (compose) m.params["compose"] = "true";
    if (exact) m.params["exact"] = "true";

    return cli::run(m, std::cout, std::cerr);
}
