#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ammbp/config.hpp"
#include "ammbp/harness.hpp"
#include "ammbp/timestepper.hpp"

namespace ammbp {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitAdmissibility = 3, kExitHalvings = 4 };

struct RunSummary {
  int exit_code = kExitOk;
  std::string message;
  long steps = 0;
  double t = 0.0;
  int total_halvings = 0;
  double theta_min = 1.0;
  std::vector<std::string> quantity_names;
  std::vector<double> quantity_min;  // over every accepted stage
  std::vector<double> quantity_max;
  std::filesystem::path out_dir;
};

// Problem defaults with the config's overrides applied.
ProblemSpec resolve_problem(const RunConfig& cfg);
StepSettings step_settings(const ProblemSpec& p, const RunConfig& cfg);
int resolved_cells(const ProblemSpec& p, const RunConfig& cfg);

// AMM_BP_OUT_DIR wins over the config value.
std::filesystem::path output_dir(const RunConfig& cfg);

// Runs the configured problem and writes solution.csv, mesh.csv, bounds.csv
// and diagnostics.csv. Errors are reported through the summary, not thrown.
RunSummary run_problem(const RunConfig& cfg, std::ostream& log);

// Writes table.csv and table.md for the scalar problem at each N.
RunSummary run_convergence(const RunConfig& cfg, const std::vector<int>& ns, std::ostream& log);

}  // namespace ammbp
