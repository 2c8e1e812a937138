#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/table.hpp"

namespace cvmdi::cli {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

struct CommandOutput {
  Table table;
  Provenance provenance;
};

CommandOutput run_keyrate(const RunConfig& config);
CommandOutput run_sweep(const RunConfig& config);
CommandOutput run_maxdist(const RunConfig& config);
CommandOutput run_optnoise(const RunConfig& config);
CommandOutput run_compare(const RunConfig& config);

/// Parses arguments (argv[0] is the program name), runs the subcommand and
/// writes the result to `out` (or the --out file). Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cvmdi::cli
