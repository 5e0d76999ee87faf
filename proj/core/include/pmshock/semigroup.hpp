#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmshock/solver.hpp"

namespace pmshock {

// Scheme-level checks of the solution-operator properties: translation
// commutation, order preservation, L^1 contraction and conservation. The
// monotone scheme satisfies all four exactly in exact arithmetic, so the
// returned violations should sit at roundoff.

// max_i |T(t) u_{(y)} - (T(t) u)_{(y)}| where y must be an integer multiple
// of dx; grid translation fills vacated cells from the boundary values.
double check_translation(const CauchyProblem& prob, const FieldState& u0,
                         double y, double t_end, double safety = 0.9);

// max_i max(0, (T(t)u0)_i - (T(t)v0)_i) for ordered inputs u0 <= v0,
// maximized over the recorded times.
double check_monotone(const CauchyProblem& prob, const FieldState& u0,
                      const FieldState& v0, double t_end, double cadence = 0.0);

struct L1ContractionResult {
  std::vector<double> times;
  std::vector<double> l1;
  double worst_step_increase = 0.0;  // max_k (l1[k+1] - l1[k])
};
L1ContractionResult check_l1_contraction(const CauchyProblem& prob,
                                         const FieldState& u0,
                                         const FieldState& v0, double t_end,
                                         double cadence);

struct ConservationResult {
  std::vector<double> times;
  std::vector<double> mass_difference;
  double drift = 0.0;  // max_k |mass[k] - mass[0]|
};
ConservationResult check_conservation(const CauchyProblem& prob,
                                      const FieldState& u0,
                                      const FieldState& v0, double t_end,
                                      double cadence);

struct SemigroupCaseResult {
  std::string check;
  double m = 0.0;
  double dx = 0.0;
  uint64_t seed = 0;
  double worst_violation = 0.0;
  bool pass = false;
};

struct SemigroupSuiteConfig {
  std::vector<double> ms = {1.1, 1.25, 4.0 / 3.0};
  std::vector<double> dxs = {0.05, 0.1};
  int n_seeds = 50;
  uint64_t master_seed = 20240801;
  double t_end = 0.15;
  double u_minus = 1.0;
  double tol_translation = 1e-12;
  double tol_monotone = 1e-12;
  double tol_l1_rel = 1e-10;           // allowed per-step increase / initial
  double tol_conservation_rel = 1e-10; // allowed drift / (||u0||_1 + ||v0||_1)
};

// Randomized bump-perturbation suite over all (m, dx) pairs; one row per
// check per seed per pair. The ordered pair additionally asserts that
// contraction + conservation force the L^1 distance to stay constant.
std::vector<SemigroupCaseResult> run_semigroup_suite(const SemigroupSuiteConfig& cfg);

}  // namespace pmshock
