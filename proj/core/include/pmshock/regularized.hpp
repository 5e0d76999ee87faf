#pragma once

#include <functional>
#include <vector>

#include "pmshock/flux.hpp"

namespace pmshock {

// One rung of the uniformly parabolic approximation ladder: the problem is
// solved for v = u^m on [-n, n], with the initial v floored at 1/n, clamped
// to M^m outside radius n-1, and Dirichlet value M^m at x = +-n.
struct RegularizedRun {
  int n = 1;               // regularization index (floor 1/n, domain [-n, n])
  double sup_bound = 1.0;  // M, global bound of the initial data
};

struct RegularizedResult {
  std::vector<double> x;  // cell centers
  std::vector<double> u;  // alpha(v) = v^{1/m} at t_end
  std::vector<double> v;
  double min_v_seen = 0.0;
  double max_v_seen = 0.0;
  std::vector<double> record_times;
  std::vector<double> min_v_series;
  long steps_taken = 0;
};

// Explicit update of alpha'(v) v_t = -f(alpha(v))_x + v_xx with alpha(v) =
// v^{1/m} and a Godunov flux for the composite convective flux f(v^{1/m}).
// The floor 1/n <= v <= M^m is enforced at every step; a violation means the
// time step was too large and raises a scheme-instability error.
RegularizedResult regularized_solve(const RegularizedRun& run,
                                    const FluxSpec& flux, double m,
                                    const std::function<double(double)>& u0,
                                    double t_end, double dx,
                                    double safety = 0.9, double cadence = 0.0);

}  // namespace pmshock
