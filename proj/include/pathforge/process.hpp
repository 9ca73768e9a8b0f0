#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace pathforge {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;
  std::string err;
};

// Runs `argv` with a hard timeout; the child is killed on expiry. Captures
// stdout and stderr separately.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout);

}  // namespace pathforge
