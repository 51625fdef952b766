#include "ammbp/config.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "ammbp/harness.hpp"
#include "ammbp/types.hpp"

namespace ammbp {
namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {"problem", "N",   "CFL",     "limiter", "moving_mesh", "beta", "m",
                                        "s",       "out_dir", "seed", "t_final", "monitor",     "a"};

template <class T>
T get(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string config_help() {
  std::ostringstream s;
  s << "Config keys (JSON object):\n"
    << "  problem      required; one of";
  for (const auto& id : problem_ids()) s << ' ' << id;
  s << "\n"
    << "  N            number of cells (default: problem default)\n"
    << "  CFL          nominal CFL number (default 0.16)\n"
    << "  limiter      bound-preserving limiter on/off (default true)\n"
    << "  moving_mesh  adaptive mesh on/off (default true)\n"
    << "  beta         monitor concentration in (0,1) (default: problem default)\n"
    << "  m            monitor smoothing passes (default 8)\n"
    << "  s            Jacobi sweeps (default 8)\n"
    << "  out_dir      output directory (default \"out\"; AMM_BP_OUT_DIR overrides)\n"
    << "  seed         RNG seed for the random monitor (default 20240611)\n"
    << "  t_final      final time (default: problem default)\n"
    << "  monitor      monitor id override; one of";
  for (const auto& id : monitor_ids()) s << ' ' << id;
  s << "\n"
    << "  a            advection speed (advection problem only, default 5)\n";
  return s.str();
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "config parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(msg.str());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  if (!j.contains("problem")) throw ConfigError("missing required key 'problem'");
  c.problem = get<std::string>(j, "problem");
  if (j.contains("N")) c.n = get<int>(j, "N");
  if (j.contains("CFL")) c.cfl = get<double>(j, "CFL");
  if (j.contains("limiter")) c.limiter = get<bool>(j, "limiter");
  if (j.contains("moving_mesh")) c.moving_mesh = get<bool>(j, "moving_mesh");
  if (j.contains("beta")) c.beta = get<double>(j, "beta");
  if (j.contains("m")) c.m = get<int>(j, "m");
  if (j.contains("s")) c.s = get<int>(j, "s");
  if (j.contains("out_dir")) c.out_dir = get<std::string>(j, "out_dir");
  if (j.contains("seed")) c.seed = get<unsigned long long>(j, "seed");
  if (j.contains("t_final")) c.t_final = get<double>(j, "t_final");
  if (j.contains("monitor")) c.monitor = get<std::string>(j, "monitor");
  if (j.contains("a")) c.advection_speed = get<double>(j, "a");
  validate(c);
  return c;
}

void validate(RunConfig& c) {
  const auto ids = problem_ids();
  if (std::find(ids.begin(), ids.end(), c.problem) == ids.end()) throw ConfigError("unknown problem '" + c.problem + "'");
  if (c.n && *c.n < 5) throw ConfigError("N must be at least 5");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("CFL must lie in (0, 1]");
  if (c.beta && !(*c.beta > 0.0 && *c.beta < 1.0)) throw ConfigError("beta must lie in (0,1)");
  if (c.m < 0) throw ConfigError("m must be >= 0");
  if (c.s < 0) throw ConfigError("s must be >= 0");
  if (c.t_final && !(*c.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (c.monitor) {
    const auto ms = monitor_ids();
    if (std::find(ms.begin(), ms.end(), *c.monitor) == ms.end()) throw ConfigError("unknown monitor '" + *c.monitor + "'");
  }
  if (c.advection_speed && c.problem != "advection") throw ConfigError("key 'a' applies to the advection problem only");
  c.warnings.clear();
  if (c.limiter && c.cfl > 1.0 / 6.0) {
    c.warnings.push_back("CFL above 1/6: the accuracy-preserving bound will force step halvings");
  }
}

}  // namespace ammbp
