#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ammbp {

struct RunConfig {
  std::string problem;
  std::optional<int> n;
  double cfl = 0.16;
  bool limiter = true;
  bool moving_mesh = true;
  std::optional<double> beta;
  int m = 8;
  int s = 8;
  std::string out_dir = "out";
  unsigned long long seed = 20240611ULL;
  std::optional<double> t_final;
  std::optional<std::string> monitor;
  std::optional<double> advection_speed;  // key "a"

  std::vector<std::string> warnings;
};

// Key reference printed by `amm-bp --help`.
std::string config_help();

// Parses a JSON object. Throws ConfigError naming the offending key, or the
// line and column of a syntax error.
RunConfig parse_config(const std::string& text);

// Re-checks field ranges; also used after command-line overrides.
void validate(RunConfig& cfg);

}  // namespace ammbp
