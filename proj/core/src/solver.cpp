#include "pmshock/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmshock {

namespace {

// Argmin of f(u) - shift*u on [lo, hi]; f' - shift is non-decreasing.
double sonic(const FluxSpec& flux, double lo, double hi, double shift) {
  if (flux.deriv(lo) - shift >= 0.0) return lo;
  if (flux.deriv(hi) - shift <= 0.0) return hi;
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    double mid = 0.5 * (a + b);
    (flux.deriv(mid) - shift < 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

// Monotone numerical flux for a flux function that decreases then increases
// about its sonic point (convex f, possibly shifted by -gamma*u).
struct FaceFlux {
  const FluxSpec* flux;
  double shift;
  double us, f_us;
  ConvectiveScheme scheme;

  FaceFlux(const CauchyProblem& prob, double lo, double hi)
      : flux(&prob.flux),
        shift(prob.frame == Frame::traveling ? prob.gamma : 0.0),
        scheme(prob.scheme) {
    us = sonic(*flux, lo, hi, shift);
    f_us = f(us);
  }

  double f(double u) const { return flux->eval(u) - shift * u; }

  double operator()(double a, double b) const {
    if (scheme == ConvectiveScheme::godunov) {
      if (a <= b) return f(std::clamp(us, a, b));
      return std::max(f(a), f(b));
    }
    return f(std::max(a, us)) + f(std::min(b, us)) - f_us;
  }
};

void check_state(const Grid1D& g, const FieldState& state) {
  if (int(state.u.size()) != g.n_cells)
    throw std::invalid_argument("state size does not match grid");
  for (double v : state.u)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("invalid state: negative or non-finite cell");
}

struct Workspace {
  std::vector<double> beta;
};

StepFluxes step_core(const CauchyProblem& prob, FieldState& state, double dt,
                     Workspace& ws, bool check_cfl) {
  const Grid1D& g = prob.grid;
  check_state(g, state);
  if (check_cfl && dt > cfl_dt(prob, state, 1.0) * (1.0 + 1e-12))
    throw std::runtime_error("step rejected: dt exceeds the CFL bound");

  const int n = g.n_cells;
  const double dx = g.dx();
  const double lam = dt / dx;

  auto& u = state.u;
  double lo = std::min({g.bc_left, g.bc_right,
                        *std::min_element(u.begin(), u.end())});
  double hi = std::max({g.bc_left, g.bc_right,
                        *std::max_element(u.begin(), u.end())});
  FaceFlux F(prob, lo, hi);

  PowM pm(prob.m);
  ws.beta.resize(n);
  for (int i = 0; i < n; ++i) ws.beta[i] = pm(u[i]);
  const double beta_left = pm(g.bc_left);
  const double beta_right = pm(g.bc_right);

  // Total face flux H = F_conv - d(u^m)/dx; face i sits left of cell i.
  StepFluxes bf;
  double H_prev = F(g.bc_left, u[0]) - (ws.beta[0] - beta_left) / dx;
  bf.left = H_prev;
  for (int i = 0; i < n; ++i) {
    double H_next;
    if (i + 1 < n)
      H_next = F(u[i], u[i + 1]) - (ws.beta[i + 1] - ws.beta[i]) / dx;
    else
      H_next = F(u[n - 1], g.bc_right) - (beta_right - ws.beta[n - 1]) / dx;
    u[i] -= lam * (H_next - H_prev);
    H_prev = H_next;
  }
  bf.right = H_prev;
  state.t += dt;
  return bf;
}

double grid_mass(const Grid1D& g, const std::vector<double>& u) {
  long double acc = 0.0L;
  for (double v : u) acc += v;
  return double(acc * g.dx());
}

TrajectoryRecord make_record(const CauchyProblem& prob, const FieldState& s) {
  const Grid1D& g = prob.grid;
  const double dx = g.dx();
  PowM pm(prob.m);
  TrajectoryRecord r;
  r.t = s.t;
  r.mass = grid_mass(g, s.u);
  r.min_u = *std::min_element(s.u.begin(), s.u.end());
  r.max_u = *std::max_element(s.u.begin(), s.u.end());
  double prev_u = g.bc_left, prev_b = pm(g.bc_left);
  for (std::size_t i = 0; i <= s.u.size(); ++i) {
    double cur_u = i < s.u.size() ? s.u[i] : g.bc_right;
    double cur_b = i < s.u.size() ? pm(s.u[i]) : pm(g.bc_right);
    r.sup_dux = std::max(r.sup_dux, std::abs(cur_u - prev_u) / dx);
    r.sup_dumx = std::max(r.sup_dumx, std::abs(cur_b - prev_b) / dx);
    prev_u = cur_u;
    prev_b = cur_b;
  }
  return r;
}

void check_support_guard(const Grid1D& g, const FieldState& s, int guard_cells,
                         double tol, const char* what) {
  const int n = g.n_cells;
  const int k = std::min(guard_cells, n / 2);
  for (int i = 0; i < k; ++i) {
    if (std::abs(s.u[i] - g.bc_left) > tol ||
        std::abs(s.u[n - 1 - i] - g.bc_right) > tol) {
      std::ostringstream msg;
      msg << what << " reached the boundary guard band at t = " << s.t
          << " (cell " << (std::abs(s.u[i] - g.bc_left) > tol ? i : n - 1 - i)
          << ")";
      throw std::runtime_error(msg.str());
    }
  }
}

}  // namespace

double cfl_dt(const CauchyProblem& prob, const FieldState& state, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("safety factor must lie in (0, 1]");
  check_state(prob.grid, state);
  const auto [mn, mx] = std::minmax_element(state.u.begin(), state.u.end());
  double lo = std::min({*mn, prob.grid.bc_left, prob.grid.bc_right});
  double hi = std::max({*mx, prob.grid.bc_left, prob.grid.bc_right});
  const double shift = prob.frame == Frame::traveling ? prob.gamma : 0.0;
  const double conv = std::max(std::abs(prob.flux.deriv(lo) - shift),
                               std::abs(prob.flux.deriv(hi) - shift));
  const double diff = 2.0 * prob.m * std::pow(hi, prob.m - 1.0);
  const double dx = prob.grid.dx();
  return safety / (conv / dx + diff / (dx * dx));
}

StepFluxes step(const CauchyProblem& prob, FieldState& state, double dt) {
  Workspace ws;
  return step_core(prob, state, dt, ws, true);
}

StepFluxes step_unchecked(const CauchyProblem& prob, FieldState& state, double dt) {
  Workspace ws;
  return step_core(prob, state, dt, ws, false);
}

Trajectory evolve(const CauchyProblem& prob, FieldState state,
                  const EvolveOptions& opt,
                  const std::vector<Observer>& observers) {
  prob.grid.validate();
  check_state(prob.grid, state);
  const double t0 = state.t;
  const double horizon_eps = 1e-12 * std::max(1.0, std::abs(opt.t_end));
  if (opt.t_end < t0 - horizon_eps)
    throw std::invalid_argument("t_end precedes the state's time");

  Trajectory traj;
  traj.mass_initial = grid_mass(prob.grid, state.u);
  long double flux_integral = 0.0L;
  Workspace ws;

  auto record = [&](const FieldState& s) {
    traj.records.push_back(make_record(prob, s));
    if (opt.record_snapshots) traj.snapshots.push_back(s);
    if (opt.enforce_support_guard)
      check_support_guard(prob.grid, s, opt.guard_cells, opt.guard_tol,
                          "perturbation support");
    for (const auto& obs : observers) obs(prob, s);
  };

  record(state);
  long k = 1;
  while (state.t < opt.t_end - horizon_eps) {
    double t_target = opt.cadence > 0.0
                          ? std::min(t0 + double(k) * opt.cadence, opt.t_end)
                          : opt.t_end;
    while (state.t < t_target - horizon_eps) {
      double dt = std::min(cfl_dt(prob, state, opt.safety), t_target - state.t);
      StepFluxes f = step_core(prob, state, dt, ws, false);
      flux_integral += (long double)(dt) * ((long double)f.left - (long double)f.right);
      ++traj.steps_taken;
    }
    state.t = t_target;
    record(state);
    ++k;
  }
  traj.boundary_flux_integral = double(flux_integral);
  traj.final_state = std::move(state);
  return traj;
}

PairSeries evolve_pair(const CauchyProblem& prob, FieldState u, FieldState v,
                       const EvolveOptions& opt) {
  prob.grid.validate();
  check_state(prob.grid, u);
  check_state(prob.grid, v);
  if (u.t != v.t) throw std::invalid_argument("paired states must share a time");
  const double t0 = u.t;
  const double horizon_eps = 1e-12 * std::max(1.0, std::abs(opt.t_end));
  if (opt.t_end < t0 - horizon_eps)
    throw std::invalid_argument("t_end precedes the states' time");

  const double dx = prob.grid.dx();
  PairSeries out;
  Workspace ws;

  auto record = [&]() {
    long double l1 = 0.0L, md = 0.0L;
    double viol = 0.0;
    for (std::size_t i = 0; i < u.u.size(); ++i) {
      double d = u.u[i] - v.u[i];
      l1 += std::abs((long double)d);
      md += (long double)d;
      viol = std::max(viol, d);
    }
    out.times.push_back(u.t);
    out.l1_distance.push_back(double(l1) * dx);
    out.mass_difference.push_back(double(md) * dx);
    out.order_violation.push_back(std::max(viol, 0.0));
    if (opt.enforce_support_guard) {
      const int n = prob.grid.n_cells;
      const int kk = std::min(opt.guard_cells, n / 2);
      for (int i = 0; i < kk; ++i)
        if (std::abs(u.u[i] - v.u[i]) > opt.guard_tol ||
            std::abs(u.u[n - 1 - i] - v.u[n - 1 - i]) > opt.guard_tol)
          throw std::runtime_error(
              "run invalid: pair difference support reached the boundary");
    }
  };

  record();
  long k = 1;
  while (u.t < opt.t_end - horizon_eps) {
    double t_target = opt.cadence > 0.0
                          ? std::min(t0 + double(k) * opt.cadence, opt.t_end)
                          : opt.t_end;
    while (u.t < t_target - horizon_eps) {
      double dt = std::min({cfl_dt(prob, u, opt.safety),
                            cfl_dt(prob, v, opt.safety), t_target - u.t});
      step_core(prob, u, dt, ws, false);
      step_core(prob, v, dt, ws, false);
    }
    u.t = v.t = t_target;
    record();
    ++k;
  }
  out.final_u = std::move(u);
  out.final_v = std::move(v);
  return out;
}

}  // namespace pmshock
