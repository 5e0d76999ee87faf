#include "pmshock/regularized.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmshock {

namespace {

// Godunov flux for g(v) = f(v^{1/m}) - unimodal about v_s once f is convex.
struct CompositeFlux {
  const FluxSpec* flux;
  double inv_m;
  double vs;

  double g(double v) const { return flux->eval(std::pow(v, inv_m)); }
  double operator()(double a, double b) const {
    if (a <= b) return g(std::clamp(vs, a, b));
    return std::max(g(a), g(b));
  }
};

}  // namespace

RegularizedResult regularized_solve(const RegularizedRun& run,
                                    const FluxSpec& flux, double m,
                                    const std::function<double(double)>& u0,
                                    double t_end, double dx, double safety,
                                    double cadence) {
  if (run.n < 1) throw std::invalid_argument("regularization index n must be >= 1");
  if (!(m > 1.0 && m < 2.0))
    throw std::invalid_argument("regularized mode needs 1 < m < 2");
  if (!(run.sup_bound > 0.0))
    throw std::invalid_argument("sup bound M must be positive");

  const double M = run.sup_bound;
  const double v_ceil = std::pow(M, m);
  const double v_floor = 1.0 / double(run.n);
  if (v_floor > v_ceil)
    throw std::invalid_argument("floor 1/n exceeds M^m; increase n or M");
  flux.validate_on(M);

  const double half = double(run.n);
  const int n_cells = std::max(8, int(std::lround(2.0 * half / dx)));
  RegularizedResult out;
  out.x.resize(n_cells);
  out.v.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    double x = -half + (i + 0.5) * dx;
    out.x[i] = x;
    double vc = std::clamp(std::pow(std::max(u0(x), 0.0), m), v_floor, v_ceil);
    double ax = std::abs(x);
    if (ax >= half - 1.0)
      out.v[i] = v_ceil;
    else if (ax > half - 2.0) {
      double s = ax - (half - 2.0);
      out.v[i] = (1.0 - s) * vc + s * v_ceil;
    } else {
      out.v[i] = vc;
    }
  }

  const double u_floor = std::pow(v_floor, 1.0 / m);
  CompositeFlux F{&flux, 1.0 / m, 0.0};
  F.vs = std::pow(flux.sonic_point(u_floor, M), m);

  const double conv = flux.max_abs_deriv(u_floor, M);
  const double diff = 2.0 * m * std::pow(M, m - 1.0);
  const double dt_max = safety / (conv / dx + diff / (dx * dx));

  out.min_v_seen = *std::min_element(out.v.begin(), out.v.end());
  out.max_v_seen = *std::max_element(out.v.begin(), out.v.end());
  out.record_times.push_back(0.0);
  out.min_v_series.push_back(out.min_v_seen);

  std::vector<double>& v = out.v;
  double t = 0.0;
  long k = 1;
  const double eps = 1e-12 * std::max(1.0, t_end);
  while (t < t_end - eps) {
    double t_target =
        cadence > 0.0 ? std::min(double(k) * cadence, t_end) : t_end;
    while (t < t_target - eps) {
      double dt = std::min(dt_max, t_target - t);
      double H_prev = F(v_ceil, v[0]) - (v[0] - v_ceil) / dx;
      double step_min = v_ceil, step_max = v_floor;
      for (int i = 0; i < n_cells; ++i) {
        double H_next = (i + 1 < n_cells)
                            ? F(v[i], v[i + 1]) - (v[i + 1] - v[i]) / dx
                            : F(v[n_cells - 1], v_ceil) - (v_ceil - v[n_cells - 1]) / dx;
        double theta = m * std::pow(v[i], (m - 1.0) / m);  // 1/alpha'(v)
        v[i] -= dt / dx * theta * (H_next - H_prev);
        step_min = std::min(step_min, v[i]);
        step_max = std::max(step_max, v[i]);
        H_prev = H_next;
      }
      if (step_min < v_floor * (1.0 - 1e-11) || step_max > v_ceil * (1.0 + 1e-11)) {
        std::ostringstream msg;
        msg << "regularized floor violated at t = " << t + dt << " (min v = "
            << step_min << ", max v = " << step_max
            << "); time step too large for stability";
        throw std::runtime_error(msg.str());
      }
      out.min_v_seen = std::min(out.min_v_seen, step_min);
      out.max_v_seen = std::max(out.max_v_seen, step_max);
      t += dt;
      ++out.steps_taken;
    }
    t = t_target;
    out.record_times.push_back(t);
    out.min_v_series.push_back(*std::min_element(v.begin(), v.end()));
    ++k;
  }

  out.u.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) out.u[i] = std::pow(v[i], 1.0 / m);
  return out;
}

}  // namespace pmshock
