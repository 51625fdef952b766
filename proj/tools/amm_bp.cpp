#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ammbp/config.hpp"
#include "ammbp/run.hpp"
#include "ammbp/types.hpp"

namespace {

ammbp::RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ammbp::ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ammbp::parse_config(ss.str());
}

std::vector<int> parse_ns(const std::string& text) {
  std::vector<int> ns;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      ns.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ammbp::ConfigError("--Ns expects comma-separated integers, got '" + item + "'");
    }
  }
  return ns;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-preserving adaptive moving mesh finite volume solver"};
  app.footer(ammbp::config_help());
  app.require_subcommand(1);

  std::string config_path;
  bool no_limiter = false, uniform = false;
  std::string out;
  auto* run = app.add_subcommand("run", "run one problem and write solution, mesh, bounds and diagnostics CSVs");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_flag("--no-limiter", no_limiter, "disable bound-preserving limiting");
  run->add_flag("--uniform-mesh", uniform, "keep the mesh fixed (grid velocity zero)");
  run->add_option("--out", out, "output directory");

  std::string ns_text;
  auto* conv = app.add_subcommand("converge", "convergence table for a scalar problem");
  conv->add_option("config", config_path, "JSON config file")->required();
  conv->add_option("--Ns", ns_text, "comma-separated cell counts, e.g. 40,80,160")->required();
  conv->add_flag("--no-limiter", no_limiter, "disable bound-preserving limiting");
  conv->add_flag("--uniform-mesh", uniform, "keep the mesh fixed");
  conv->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    ammbp::RunConfig cfg = load(config_path);
    if (no_limiter) cfg.limiter = false;
    if (uniform) cfg.moving_mesh = false;
    if (!out.empty()) cfg.out_dir = out;
    ammbp::validate(cfg);
    ammbp::RunSummary s;
    if (run->parsed()) {
      s = ammbp::run_problem(cfg, std::cerr);
    } else {
      s = ammbp::run_convergence(cfg, parse_ns(ns_text), std::cerr);
    }
    return s.exit_code;
  } catch (const ammbp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ammbp::kExitConfig;
  }
}
