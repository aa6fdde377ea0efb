#pragma once

#include "aq/sweep.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace aq::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kConvergence = 4,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Share of unconverged rows above which the run exits with kConvergence.
inline constexpr double kMaxUnconvergedFraction = 0.10;

/// Builds a validated SweepConfig from command-line arguments (without the
/// program name). `--config FILE` reads flat `key = value` lines using the
/// flag names without dashes; flags given on the command line win.
/// Throws UsageError.
SweepConfig parse_config(const std::vector<std::string>& args);

/// Reads a config file into flag tokens ("--key", value...).
std::vector<std::string> config_file_tokens(const std::string& path);

/// Whole program: parse, sweep, emit. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aq::cli
