#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relaxflow/cli.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{
      "relaxflow: hyperbolic stress-relaxation flow solver, reference viscous "
      "solver, and structure/convergence certification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;  // 0: keep the config file's value

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file");
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_option("--threads", threads, "worker threads (overrides config)");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the relaxation solver and write snapshots");
  CLI::App* compare = app.add_subcommand(
      "compare", "run both solvers and write the error series");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep the relaxation scales and fit the convergence rate");
  CLI::App* check = app.add_subcommand(
      "check", "certify the algebraic entropy structure on random states");
  for (CLI::App* cmd : {simulate, compare, sweep, check}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "cannot open config file: %s\n", config_path.c_str());
      return relaxflow::kExitUsage;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  const relaxflow::ParseResult parsed = relaxflow::parse_config(text);
  for (const std::string& w : parsed.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!parsed.config) {
    std::fprintf(stderr, "config error: %s\n", parsed.error.c_str());
    return relaxflow::kExitUsage;
  }

  relaxflow::ExperimentConfig cfg = *parsed.config;
  if (threads > 0) cfg.threads = threads;

  try {
    if (simulate->parsed()) return relaxflow::cmd_simulate(cfg, out_dir);
    if (compare->parsed()) return relaxflow::cmd_compare(cfg, out_dir);
    if (sweep->parsed()) return relaxflow::cmd_sweep(cfg, out_dir);
    return relaxflow::cmd_check(cfg, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return relaxflow::kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
