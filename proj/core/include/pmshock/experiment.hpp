#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmshock/io.hpp"

namespace pmshock {

// One batch experiment: everything needed to reproduce a run byte for byte.
struct ExperimentConfig {
  std::string kind = "profile";  // profile | evolve | decay | semigroup |
                                 // inequalities | regularized | report

  // flux
  std::string flux = "burgers";  // burgers | quadratic | poly
  double flux_coef = 1.0;        // quadratic coefficient
  std::vector<double> flux_poly;

  // wave
  double m = 1.25;
  double u_minus = 1.0;
  double profile_tol = 1e-10;
  double xi_min = -120.0, xi_max = 60.0;
  double knot_spacing = 0.05;

  // grid / run
  double x_left = -80.0, x_right = 120.0, dx = 0.1;
  double t_end = 200.0, cadence = 0.5, safety = 0.9;
  std::string scheme = "godunov";  // godunov | engquist-osher
  std::string frame = "lab";       // lab | traveling

  // perturbation
  std::string bump_shape = "gauss";  // gauss | dipole | none
  double bump_amplitude = 0.02, bump_center = -6.0, bump_width = 3.0;

  // analysis
  double q = 4.0;
  std::vector<double> p_moments = {2, 4, 8};
  double fit_t_min = 1.0, fit_t_max = 200.0;
  double c1_threshold = 0.05;
  double eps0 = 0.35;
  double region_cadence = 5.0;  // spacing of the region-report rows

  // semigroup suite
  int sg_seeds = 50;
  double sg_t_end = 0.15;
  std::vector<double> sg_m = {1.1, 1.25, 4.0 / 3.0};
  std::vector<double> sg_dx = {0.05, 0.1};

  // inequality lab
  long samples = 100000;

  // regularized cascade
  std::vector<double> cascade_n = {10, 40, 160};
  double reg_t_end = 0.5, reg_dx = 0.05;
  double window_half_width = 3.0;

  uint64_t seed = 42;

  // Stable serialization; its hash goes into every artifact's manifest line.
  std::string canonical() const;
  uint64_t config_hash() const;
  std::string manifest_line() const;

  static ExperimentConfig from_config(const ConfigFile& file);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

struct ExperimentSummary {
  std::string kind;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  bool all_pass() const;
};

// Executes the configured pipeline, writes artifacts + summary.json under
// out_dir, and returns the check list (exit status of the CLI is derived
// from it). Runtime check failures are recorded, not thrown.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir);

struct DiffEntry {
  std::string file;
  std::string column;
  long row = 0;
  double current = 0.0, baseline = 0.0, tolerance = 0.0;
};

struct DiffReport {
  std::vector<DiffEntry> drifts;
  std::vector<std::string> schema_errors;
  bool clean() const { return drifts.empty() && schema_errors.empty(); }
};

// Field-by-field numeric diff of two artifact directories; per-column
// tolerances override the default.
DiffReport compare_baseline(const std::filesystem::path& current,
                            const std::filesystem::path& baseline,
                            double tolerance,
                            const std::map<std::string, double>& column_tol = {});

}  // namespace pmshock
