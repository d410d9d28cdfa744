#pragma once

#include <string>
#include <vector>

#include "robinspec/config.hpp"

namespace robinspec {

/// Outcome of one command execution. Exit codes: 0 = success, 2 = the run
/// finished but a hypothesis verdict is FAIL, 1 = any error (bad config,
/// grid capacity, solver failure).
struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;  // files written, in write order
  std::string message;                 // one-line outcome or error text
};

/// Validate and execute one config end to end, writing every requested
/// artifact into config.out_dir. Never throws: failures come back as
/// exit_code 1 with the diagnostic in `message`.
RunResult run(const RunConfig& config);

}  // namespace robinspec
