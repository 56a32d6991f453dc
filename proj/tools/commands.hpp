#pragma once

#include "config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace relaxrd::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSolverFault = 2 };

struct CommandOptions {
    std::filesystem::path out = ".";
    int threads = 1;
};

/// Resolves --threads, falling back to RELAXRD_THREADS and then 1.
int resolve_threads(std::optional<int> flag, const char* env_value);

int run_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int study_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int oracle_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Full driver used by main(): loads the config and maps failures to exit codes.
int dispatch(const std::string& command, const std::string& config_path, const CommandOptions& opts,
             std::ostream& log, std::ostream& err);

} // namespace relaxrd::cli
