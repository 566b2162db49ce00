#pragma once

#include <string>
#include <vector>

#include "levyfield/config.hpp"

namespace levyfield {

/// Exit codes shared by the pipeline and the CLI.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_indeterminate = 3,
  exit_precondition = 4,
  exit_io_error = 5,
};

struct RunResult {
  int exit_code = exit_ok;
  std::string message;      // failure description (stage + operation)
  std::string out_dir;      // out_root/<config digest>
  std::string report_json;  // full report document
};

/// Executes the configured stages in dependency order and writes
/// out/<digest>/{report.json, tables/*.csv, fields/*}. Never throws;
/// failures are encoded in the exit code and message.
RunResult run_experiment(const ExperimentConfig& config, const std::string& out_root);

struct SweepResult {
  int exit_code = exit_ok;
  std::string csv;          // aggregated index table
  std::string csv_path;
  std::vector<std::string> row_errors;  // one entry per failed value
};

/// One index run per value of the dotted parameter path (e.g. "model.alpha"),
/// aggregated into a CSV. Individual failures are recorded per row and the
/// sweep continues. Deterministic row order.
SweepResult sweep_experiment(const nlohmann::json& base_doc, const std::string& parameter,
                             const std::vector<double>& values, const std::string& out_root);

}  // namespace levyfield
