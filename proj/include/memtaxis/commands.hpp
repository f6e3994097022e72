#pragma once

// The four batch commands behind the memtaxis executable. Each writes its
// artifacts into the output directory, prints the summary to `log` and
// returns the process exit code.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "memtaxis/config.hpp"
#include "memtaxis/errors.hpp"

namespace memtaxis {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitUndecided = 4,
};

int exit_code_for(const Error& e);

/// --out, then MEMTAXIS_OUT, then [output] dir, then the working directory.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& cli_out,
                                         const RunConfig& cfg);

int cmd_analyze(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_normal_form(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Dispatches on the command name; library errors are reported on `err` and
/// mapped to exit codes.
int run_command(const std::string& name, const RunConfig& cfg, const std::filesystem::path& out,
                std::ostream& log, std::ostream& err);

}  // namespace memtaxis
