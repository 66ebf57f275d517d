#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plastiflow {

struct CliOptions {
    std::string command;
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;  // 0: PLASTIFLOW_THREADS or hardware
    bool quiet = false;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitOracle = 4 };

const std::vector<std::string>& command_names();

/// Runs one subcommand; errors are reported on `err` and mapped to exit codes.
int run_command(const CliOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace plastiflow
