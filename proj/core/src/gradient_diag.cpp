#include "pmshock/gradient_diag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmshock {

GradientReport gradient_diagnostics(const CauchyProblem& prob,
                                    const Trajectory& traj, double tol) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("gradient diagnostics need recorded snapshots");

  const Grid1D& g = prob.grid;
  const double dx = g.dx();
  const double vac = dx * dx;
  const double m = prob.m;
  PowM pm(m);
  PowM pm1(m - 1.0);

  GradientReport r;
  for (const FieldState& s : traj.snapshots) {
    double dumx = 0.0, dum1x = 0.0, dux = 0.0, dux_vac = 0.0;
    double prev = g.bc_left;
    for (std::size_t i = 0; i <= s.u.size(); ++i) {
      double cur = i < s.u.size() ? s.u[i] : g.bc_right;
      double du = std::abs(cur - prev) / dx;
      dux = std::max(dux, du);
      dumx = std::max(dumx, std::abs(pm(cur) - pm(prev)) / dx);
      dum1x = std::max(dum1x, std::abs(pm1(cur) - pm1(prev)) / dx);
      if (cur < vac && prev < vac) dux_vac = std::max(dux_vac, du);
      prev = cur;
    }
    r.t.push_back(s.t);
    r.sup_dumx.push_back(dumx);
    r.sup_dum1x.push_back(dum1x);
    r.sup_dux.push_back(dux);
    r.sup_dux_vacuum.push_back(dux_vac);
  }

  r.initial_lipschitz = r.sup_dumx.front();
  const FieldState& u0 = traj.snapshots.front();
  double sup0 = std::max({*std::max_element(u0.u.begin(), u0.u.end()),
                          g.bc_left, g.bc_right});
  r.lipschitz_bound = std::max(r.initial_lipschitz, pm(sup0));
  r.max_sup_dumx = *std::max_element(r.sup_dumx.begin(), r.sup_dumx.end());
  r.lipschitz_ok = r.max_sup_dumx <= r.lipschitz_bound * (1.0 + tol);

  r.sup_dumx_nonincreasing = true;
  for (std::size_t i = 1; i < r.sup_dumx.size(); ++i)
    if (r.sup_dumx[i] > r.sup_dumx[i - 1] * (1.0 + tol))
      r.sup_dumx_nonincreasing = false;

  // Time-Hölder fit against the first snapshot: sup_x |u(t)-u(t0)| vs t-t0,
  // cut off once the difference saturates at the field scale (a translating
  // front eventually replaces the whole profile, which says nothing about
  // short-time continuity).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const FieldState& s = traj.snapshots[k];
    double diff = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
      diff = std::max(diff, std::abs(s.u[i] - u0.u[i]));
    if (diff > 0.4 * std::max(sup0, 1e-300)) break;
    double dt = s.t - u0.t;
    if (diff <= 0.0 || dt <= 0.0) continue;
    double x = std::log(dt), y = std::log(diff);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n >= 3) {
    double denom = double(n) * sxx - sx * sx;
    r.holder_exponent = (double(n) * sxy - sx * sy) / denom;
    r.holder_prefactor = std::exp((sy - r.holder_exponent * sx) / double(n));
    r.holder_ok = r.holder_exponent >= 0.5 - 0.05;
  }
  return r;
}

}  // namespace pmshock
