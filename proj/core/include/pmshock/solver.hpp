#pragma once

#include <functional>
#include <vector>

#include "pmshock/flux.hpp"
#include "pmshock/grid.hpp"
#include "pmshock/numerics.hpp"

namespace pmshock {

enum class ConvectiveScheme { godunov, engquist_osher };

// Everything a single evolution needs. In the traveling frame the effective
// convective flux is f(u) - gamma*u.
struct CauchyProblem {
  Grid1D grid;
  FluxSpec flux = FluxSpec::burgers();
  double m = 1.0;
  Frame frame = Frame::lab;
  double gamma = 0.0;  // only used in the traveling frame
  ConvectiveScheme scheme = ConvectiveScheme::godunov;
};

// Monotonicity bound for the explicit update:
//   dt = safety / (max|f'(u)|/dx + 2 m max(u)^{m-1}/dx^2),
// with the extrema taken over the state values and both ghost values.
double cfl_dt(const CauchyProblem& prob, const FieldState& state, double safety);

// Total face flux (convective minus diffusive) at the two domain boundaries,
// as seen by the step that produced it; dt * (left - right) is the exact mass
// gained by the interior.
struct StepFluxes {
  double left = 0.0;
  double right = 0.0;
};

// One conservative explicit step. Throws if dt exceeds the CFL bound or the
// input has a negative cell.
StepFluxes step(const CauchyProblem& prob, FieldState& state, double dt);

// Same update without the CFL guard; exists for instability experiments.
StepFluxes step_unchecked(const CauchyProblem& prob, FieldState& state, double dt);

struct TrajectoryRecord {
  double t = 0.0;
  double mass = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double sup_dux = 0.0;   // sup |Delta u| / dx
  double sup_dumx = 0.0;  // sup |Delta u^m| / dx
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<FieldState> snapshots;  // empty unless requested
  double mass_initial = 0.0;
  // Time integral of (left flux - right flux); equals the mass change.
  double boundary_flux_integral = 0.0;
  FieldState final_state;
  long steps_taken = 0;
};

struct EvolveOptions {
  double t_end = 0.0;
  double cadence = 0.0;  // <= 0 records only the endpoints
  bool record_snapshots = false;
  double safety = 0.9;
  // Perturbations must stay this many cells away from each boundary...
  int guard_cells = 10;
  // ...meaning |u - bc| stays below this there; checked at record times.
  double guard_tol = 1e-7;
  bool enforce_support_guard = true;
};

using Observer = std::function<void(const CauchyProblem&, const FieldState&)>;

// Repeated CFL-limited steps with records (and observer calls) at the given
// cadence. Throws if t_end precedes the state's time or the support guard
// trips.
Trajectory evolve(const CauchyProblem& prob, FieldState state,
                  const EvolveOptions& opt,
                  const std::vector<Observer>& observers = {});

struct PairSeries {
  std::vector<double> times;
  std::vector<double> l1_distance;     // ||u - v||_1
  std::vector<double> mass_difference;  // integral of (u - v)
  std::vector<double> order_violation;  // max_i max(0, u_i - v_i)
  FieldState final_u, final_v;
};

// Evolves two states with a shared time-step sequence (the smaller of the
// two CFL bounds each step), recording comparison series at the cadence.
PairSeries evolve_pair(const CauchyProblem& prob, FieldState u, FieldState v,
                       const EvolveOptions& opt);

}  // namespace pmshock
