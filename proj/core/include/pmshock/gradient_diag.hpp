#pragma once

#include <vector>

#include "pmshock/solver.hpp"

namespace pmshock {

struct GradientReport {
  std::vector<double> t;
  std::vector<double> sup_dumx;        // sup |Delta(u^m)| / dx
  std::vector<double> sup_dum1x;       // sup |Delta(u^{m-1})| / dx
  std::vector<double> sup_dux;         // sup |Delta u| / dx
  std::vector<double> sup_dux_vacuum;  // same, restricted to cells with u < dx^2

  double initial_lipschitz = 0.0;  // K, Lipschitz constant of u0^m
  double lipschitz_bound = 0.0;    // max(K, M^m)
  double max_sup_dumx = 0.0;
  bool lipschitz_ok = false;
  bool sup_dumx_nonincreasing = false;  // within the tolerance factor

  double holder_exponent = 0.0;  // fit of sup_x |u(t)-u(s)| ~ |t-s|^theta
  double holder_prefactor = 0.0;
  bool holder_ok = false;  // exponent >= 0.5 - 0.05
};

// Needs a trajectory recorded with snapshots.
GradientReport gradient_diagnostics(const CauchyProblem& prob,
                                    const Trajectory& traj, double tol = 0.05);

}  // namespace pmshock
