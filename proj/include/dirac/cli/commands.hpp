#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "dirac/cli/config.hpp"

namespace dirac::cli {

/// Runs one command and writes its artifacts plus manifest.toml into
/// cfg.output. Returns the files written, in write order.
///
/// Throws ConfigError for missing or inconsistent settings and lets
/// dirac::Error from the numerics propagate.
std::vector<std::filesystem::path> run_command(const std::string& command, ExperimentConfig cfg, std::ostream& log);

/// Full command-line entry point: parses flags, runs, maps errors to exit
/// status (2 config, 3 numerical).
int cli_main(int argc, char** argv);

}  // namespace dirac::cli
