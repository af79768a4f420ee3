#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace weakpar::cli {

enum class Format { kJson, kCsv };

/// One experiment: a command plus its string parameters. Identical manifests
/// produce identical report bytes.
struct ExperimentManifest {
    std::string command;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 1;
    /// Report path; empty writes to the stream handed to run().
    std::string out;
    /// Unset means the command's native format.
    std::string format;
};

/// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kIdentityFailed = 1;
inline constexpr int kUsageError = 2;

const std::vector<std::string>& command_names();

/// Accepts "andor profile" style pairs; returns the hyphenated command or "".
std::string join_command(const std::string& group, const std::string& verb);

/// Runs the manifest. Errors are reported on `err` and yield kUsageError.
int run(const ExperimentManifest& manifest, std::ostream& out, std::ostream& err);

/// Column documentation for the CSV reports, shown by --help.
std::string csv_help();

}  // namespace weakpar::cli
