#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "asymint/problem.hpp"

namespace asymint {

/// Pipeline depth: each stage includes the previous ones.
enum class Stage { Analyze, Solve, Verify, Report };

struct RunOptions {
  Stage stage = Stage::Report;
  std::vector<int> roots{1, 2, 3, 4};
  std::optional<std::filesystem::path> out_dir;  // report.json and CSV files
  bool trace = false;                            // iterate snapshots as CSV
  bool parallel = true;
};

struct RunResult {
  nlohmann::json report;
  int exit_code = 0;  // 0 all checks pass, 1 numerical failure, 2 input error
};

/// Runs spectra, hypotheses, fixed point, synthesis and oracle per requested root and
/// assembles a report with the same keys on every run (unreached values are null).
[[nodiscard]] RunResult run_report(const ProblemSpec& spec, const RunOptions& opts);

/// Exit code for an exception escaping the pipeline.
[[nodiscard]] int exit_code_for(const std::exception& e) noexcept;

}  // namespace asymint
