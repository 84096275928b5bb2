#pragma once

// Runs the tasks of an experiment config and writes their outputs.
//
// Exit status: 0 all tasks ran and every verification passed; 1 a report
// failed its ceiling or a solve did not converge; 2 config or usage error;
// 3 numeric failure; 4 IO error.

#include "nlpl/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace nlpl {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNumeric = 3, kExitIo = 4 };

struct RunOptions {
  std::optional<std::filesystem::path> out;  // overrides output.directory
  int threads = 1;
  std::uint64_t seed = 1;
  std::optional<Task::Kind> only;  // run just the tasks of this kind (a default one when there is none)
};

// Throws the library errors; run_config_file maps them to exit codes.
int run_config(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

// Loads, runs and maps every error to its exit status, with a message on err.
int run_config_file(const std::filesystem::path& path, const RunOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace nlpl
