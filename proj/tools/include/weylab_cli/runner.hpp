#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "weylab_cli/config.hpp"

namespace weylab::cli {

struct ExperimentResult {
  std::vector<std::pair<std::string, bool>> checks;
  /// (file name, body); written atomically into the output directory.
  std::vector<std::pair<std::string, std::string>> files;
  nlohmann::json summary = nlohmann::json::object();

  bool all_pass() const;
};

/// Reads every parameter, validates, then computes. Unknown keys are a ConfigError.
ExperimentResult run_experiment(const ExperimentConfig& c);

enum ExitCode { kExitPass = 0, kExitCheckFailed = 1, kExitError = 2 };

struct RunOutcome {
  int exit_code = kExitError;
  std::string output_dir;
  std::string manifest_path;
  nlohmann::json manifest;
  std::string message;
};

/// Worker count: WEYLAB_WORKERS if set, else the config key `workers`, else 1.
int resolve_workers(const ExperimentConfig& c);

RunOutcome run_config(const ExperimentConfig& c, const std::string& output_dir, std::ostream& log);
RunOutcome run_file(const std::string& config_path, std::ostream& log);
/// Re-runs the manifest's embedded config into <output_dir>/reproduce and compares CSV bodies.
RunOutcome reproduce(const std::string& manifest_path, std::ostream& log);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& body);

}  // namespace weylab::cli
