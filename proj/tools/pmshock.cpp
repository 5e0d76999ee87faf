// Batch experiment runner: one subcommand per experiment kind plus a numeric
// artifact diff. Flags override the config file.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "pmshock/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::optional<double> dx;
  std::optional<double> m;
  std::optional<double> t_end;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "64-bit experiment seed");
  cmd->add_option("--dx", args.dx, "grid spacing override");
  cmd->add_option("--m", args.m, "diffusion exponent override");
  cmd->add_option("--t-end", args.t_end, "run horizon override");
}

int run_kind(const std::string& kind, const CommonArgs& args) {
  pmshock::ExperimentConfig cfg;
  if (!args.config_path.empty())
    cfg = pmshock::ExperimentConfig::from_file(args.config_path);
  cfg.kind = kind;
  if (args.seed) cfg.seed = *args.seed;
  if (args.dx) cfg.dx = *args.dx;
  if (args.m) cfg.m = *args.m;
  if (args.t_end) {
    cfg.t_end = *args.t_end;
    cfg.fit_t_max = std::min(cfg.fit_t_max, cfg.t_end);
  }

  auto summary = pmshock::run_experiment(cfg, args.out_dir);
  for (const auto& c : summary.checks)
    std::printf("[%s] %s: %.6g%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.value, c.detail.empty() ? "" : " - ", c.detail.c_str());
  std::printf("%s: %zu checks, %s\n", kind.c_str(), summary.checks.size(),
              summary.all_pass() ? "all passed" : "FAILURES");
  return summary.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscous shock laboratory for the convective porous-media equation"};
  app.require_subcommand(1);

  std::map<std::string, CommonArgs> args;
  for (const char* kind : {"profile", "evolve", "decay", "semigroup",
                           "inequalities", "regularized", "report"}) {
    auto* cmd = app.add_subcommand(kind, std::string("run the ") + kind +
                                             " experiment");
    add_common(cmd, args[kind]);
  }

  std::string diff_current, diff_baseline;
  double diff_tol = 1e-12;
  std::vector<std::string> diff_col_tols;
  auto* diff = app.add_subcommand("diff", "compare artifacts against a baseline");
  diff->add_option("current", diff_current, "current artifact directory")
      ->required();
  diff->add_option("baseline", diff_baseline, "baseline artifact directory")
      ->required();
  diff->add_option("--tol", diff_tol, "default numeric tolerance");
  diff->add_option("--col-tol", diff_col_tols,
                   "per-column tolerance as column=tol (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (diff->parsed()) {
      std::map<std::string, double> col_tol;
      for (const auto& spec : diff_col_tols) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("--col-tol expects column=tol");
        col_tol[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
      }
      auto rep = pmshock::compare_baseline(diff_current, diff_baseline,
                                           diff_tol, col_tol);
      for (const auto& e : rep.schema_errors)
        std::printf("[SCHEMA] %s\n", e.c_str());
      for (const auto& d : rep.drifts)
        std::printf("[DRIFT] %s %s row %ld: %.17g vs %.17g (tol %.3g)\n",
                    d.file.c_str(), d.column.c_str(), d.row, d.current,
                    d.baseline, d.tolerance);
      if (rep.clean()) std::printf("no drift\n");
      if (!rep.schema_errors.empty()) return 2;
      return rep.clean() ? 0 : 1;
    }
    for (auto& [kind, a] : args)
      if (app.get_subcommand(kind)->parsed()) return run_kind(kind, a);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
