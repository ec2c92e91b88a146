#pragma once

// Command dispatch shared by the shortcalc executable, the tests and the
// Python module.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shortcalc/io.hpp"
#include "shortcalc/report.hpp"

namespace shortcalc {

enum class ExitCode : int { ok = 0, assertion_failed = 1, input_error = 2 };

struct CommandOptions {
    std::string command;
    std::optional<std::string> problem_path;
    /// (identifier, path) pairs from --csv ID=PATH.
    std::vector<std::pair<std::string, std::string>> csv;
    std::string w = "W";
    std::string s = "S";
    std::string a = "A";
    std::string b = "B";
    std::string c = "C";
    std::optional<std::string> rel;
    std::optional<double> p;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    int trials = 100;
    int n = 6;
    std::optional<std::string> json_path;
    std::string suite = "all";
};

struct CommandResult {
    ExitCode exit_code = ExitCode::ok;
    Json report;
    std::string summary;
};

/// Tolerance precedence: defaults, then SHORTCALC_TOL, then the problem file,
/// then --tol.
Tolerance resolve_tolerance(const CommandOptions& opts, const ProblemFile& problem);

/// Runs one command on an already loaded problem. Input errors propagate as
/// exceptions; failed mathematical assertions come back as exit code 1.
CommandResult execute(const CommandOptions& opts, const ProblemFile& problem);

/// Loads the problem named by `opts`, runs it, writes --json if requested and
/// maps every error onto the exit-code contract.
int run(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Full command line front end (argv[0] is the program name).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Suite names accepted by `verify --suite`.
const std::vector<std::string>& suite_names();

/// One verify suite on random instances of size n.
Report run_suite(const std::string& suite, int n, int trials, std::uint64_t seed,
                 const Tolerance& tol, std::optional<double> p = std::nullopt);

}  // namespace shortcalc
