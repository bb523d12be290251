#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace codemap {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

struct ProcessOptions {
  std::filesystem::path cwd;
  /// Extra NAME=value pairs layered over the inherited environment.
  std::vector<std::pair<std::string, std::string>> env;
  std::string stdin_data;
};

/// Runs argv[0] (looked up on PATH) without a shell and captures both output
/// streams. Throws std::system_error when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const ProcessOptions& options = {});

}  // namespace codemap
