#pragma once

// Subcommand pipelines shared by the CLI and the determinism checks.

#include <string>
#include <string_view>
#include <vector>

#include "dfock/config.hpp"
#include "dfock/report.hpp"

namespace dfock {

struct RunOutcome {
  Report report;
  int exit_code = 0;                    // 0 ok, 2 a checked inequality failed
  std::vector<std::string> violations;  // one line per failed check
  std::string summary;                  // short human-readable result
};

std::vector<std::string> subcommands();

/// Runs one pipeline in memory; operational problems throw Error.
RunOutcome run_subcommand(std::string_view name, const RunConfig& config);

/// config.out, else $DFOCK_OUT/<name>, else dfock_out/<name>.
std::string resolve_output_dir(std::string_view name, const RunConfig& config);

}  // namespace dfock
