#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wbp/cli/config.hpp"

namespace wbp::cli {

struct RunOutput {
  nlohmann::json report;
  std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
  /// 0: every verdict definite; 2: some verdict indeterminate.
  int exit_code = 0;
};

/// Runs the configured scenario without touching the filesystem.
RunOutput execute(const ScenarioConfig& config);

/// WBP_OUT_DIR if set, else "wbp_out".
std::string default_output_dir();

/// execute() plus artifacts on disk. Errors are reported on `log` and give exit code 1.
int run(const ScenarioConfig& config, std::ostream& log);

}  // namespace wbp::cli
