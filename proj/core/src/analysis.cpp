#include "pmshock/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pmshock {

PerturbationField perturbation(const FieldState& state, const Grid1D& grid,
                               const ShockProfile& profile) {
  PerturbationField f;
  f.t = state.t;
  f.dx = grid.dx();
  const double offset = state.frame == Frame::lab ? profile.gamma() * state.t : 0.0;
  f.xi.resize(state.u.size());
  f.phi.resize(state.u.size());
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    double xi = grid.cell_center(int(i)) - offset;
    f.xi[i] = xi;
    f.phi[i] = state.u[i] - profile(xi);
  }
  return f;
}

PerturbationField perturbation_window(const FieldState& state, const Grid1D& grid,
                                      const ShockProfile& profile, double xi_lo,
                                      double xi_hi) {
  PerturbationField full = perturbation(state, grid, profile);
  if (xi_lo < full.xi.front() - 0.5 * full.dx ||
      xi_hi > full.xi.back() + 0.5 * full.dx) {
    std::ostringstream msg;
    msg << "resample window [" << xi_lo << ", " << xi_hi
        << "] exceeds the grid's xi range [" << full.xi.front() << ", "
        << full.xi.back() << "] at t = " << state.t;
    throw std::runtime_error(msg.str());
  }
  PerturbationField out;
  out.t = full.t;
  out.dx = full.dx;
  for (std::size_t i = 0; i < full.xi.size(); ++i) {
    if (full.xi[i] < xi_lo || full.xi[i] > xi_hi) continue;
    out.xi.push_back(full.xi[i]);
    out.phi.push_back(full.phi[i]);
  }
  return out;
}

std::vector<double> antiderivative(const std::vector<double>& phi, double dx) {
  std::vector<double> Phi(phi.size());
  if (phi.empty()) return Phi;
  long double acc = 0.0L;
  Phi[0] = 0.0;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    acc += 0.5L * (long double)(phi[i - 1] + phi[i]) * (long double)dx;
    Phi[i] = double(acc);
  }
  return Phi;
}

double lp_norm(const std::vector<double>& v, double dx, double p) {
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  long double acc = 0.0L;
  for (double x : v) acc += std::pow(std::abs((long double)x), (long double)p);
  return double(std::pow(acc * (long double)dx, 1.0L / (long double)p));
}

std::vector<double> centered_derivative(const std::vector<double>& v, double dx) {
  std::vector<double> d(v.size(), 0.0);
  if (v.size() < 2) return d;
  d.front() = (v[1] - v[0]) / dx;
  d.back() = (v[v.size() - 1] - v[v.size() - 2]) / dx;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
  return d;
}

double h1_norm(const std::vector<double>& v, double dx) {
  double a = lp_norm(v, dx, 2.0);
  double b = lp_norm(centered_derivative(v, dx), dx, 2.0);
  return std::sqrt(a * a + b * b);
}

double compute_shift(const std::vector<double>& u0, const Grid1D& grid,
                     const ShockProfile& profile) {
  if (!(profile.u_minus() > 0.0))
    throw std::invalid_argument("degenerate profile: u_minus = 0");
  long double acc = 0.0L;
  for (std::size_t i = 0; i < u0.size(); ++i)
    acc += u0[i] - profile(grid.cell_center(int(i)));
  return -double(acc) * grid.dx() / profile.u_minus();
}

ShiftedData mass_neutral_initial_data(const Grid1D& grid,
                                      const ShockProfile& profile,
                                      const std::function<double(double)>& bump) {
  const int n = grid.n_cells;
  ShiftedData out;
  out.state.t = 0.0;
  out.state.u.resize(std::size_t(n));

  double x0 = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    long double mass = 0.0L;
    for (int i = 0; i < n; ++i) {
      double x = grid.cell_center(i) - x0;
      double v = profile(x) + bump(x);
      out.state.u[std::size_t(i)] = v;
      mass += v - profile(grid.cell_center(i));
    }
    out.residual_mass = double(mass) * grid.dx();
    if (std::abs(out.residual_mass) < 1e-12 * profile.u_minus()) break;
    x0 -= out.residual_mass / profile.u_minus();
  }
  out.x0 = x0;
  for (double v : out.state.u)
    if (v < 0.0)
      throw std::invalid_argument(
          "bump amplitude too negative: initial data leaves u >= 0");
  return out;
}

RegionMasks region_partition(const PerturbationField& field,
                             const std::vector<double>& phi_xi, double x_right) {
  if (phi_xi.size() != field.phi.size())
    throw std::invalid_argument("phi and phi_xi must share the grid");
  RegionMasks masks;
  masks.dx = field.dx;
  masks.region.resize(field.phi.size());
  for (std::size_t i = 0; i < field.phi.size(); ++i) {
    uint8_t r;
    if (field.xi[i] >= x_right)
      r = 0;
    else if (field.phi[i] >= 0.0)
      r = 1;
    else if (phi_xi[i] < 0.0)
      r = 2;
    else
      r = 3;  // ties phi_xi = 0 land here
    masks.region[i] = r;
    ++masks.counts[r];
  }
  return masks;
}

RegionDiagConfig::RegionDiagConfig(double C1_in, double m, double q_in)
    : C1(C1_in), q(q_in) {
  if (!(C1 > 0.0 && C1 < 1.0))
    throw std::invalid_argument("C1 must lie in (0, 1), ideally << 1");
  if (!(m > 1.0 && m < 2.0)) throw std::invalid_argument("need 1 < m < 2");
  if (!(q >= 4.0)) throw std::invalid_argument("need q >= 4");
  // C1 = y/(1-y) with y = (1-C2)^{m-1}  =>  C2 = 1 - (C1/(1+C1))^{1/(m-1)}.
  C2 = 1.0 - std::pow(C1 / (1.0 + C1), 1.0 / (m - 1.0));
}

double RegionDiagConfig::relation_residual(double m) const {
  double y = std::pow(1.0 - C2, m - 1.0);
  return std::abs(C1 - y / (1.0 - y));
}

B1Report b1_integrals(const PerturbationField& field, const ShockProfile& profile,
                      const RegionDiagConfig& cfg) {
  const double m = profile.exponent();
  const double q = cfg.q;
  const auto phi_xi = centered_derivative(field.phi, field.dx);
  const auto masks = region_partition(field, phi_xi, profile.x_right());

  B1Report rep;
  rep.d0_min_integrand = std::numeric_limits<double>::infinity();
  rep.b2_min = std::numeric_limits<double>::infinity();
  std::array<long double, 4> integral{};
  long double d1_energy = 0.0L, d1_mass = 0.0L;

  for (std::size_t i = 0; i < field.phi.size(); ++i) {
    const double xi = field.xi[i];
    const double phi = field.phi[i];
    const double pxi = phi_xi[i];
    const double U = profile(xi);
    const double Up = profile.derivative(xi);
    const double u = U + phi;
    if (u < -1e-14)
      throw std::invalid_argument("invalid state: U + phi < 0 in b1_integrals");

    const double abs_phi = std::abs(phi);
    const double b1 = (std::pow(std::max(u, 0.0), m - 1.0) * (Up + pxi) -
                       std::pow(U, m - 1.0) * Up) *
                      std::pow(abs_phi, q - 2.0) * pxi;
    const uint8_t r = masks.region[i];
    integral[r] += b1;

    if (r == 0) {
      rep.d0_min_integrand = std::min(rep.d0_min_integrand, b1);
      double ident = std::pow(std::max(phi, 0.0), m + q - 3.0) * pxi * pxi;
      rep.d0_identity_residual =
          std::max(rep.d0_identity_residual, std::abs(b1 - ident));
    } else if (r == 1) {
      d1_energy += std::pow(phi, m + q - 3.0) * pxi * pxi;
      d1_mass += std::pow(phi, m + q - 3.0);
    } else if (U > 0.0) {
      const double d = phi / U;
      const double one_pd = std::pow(std::max(1.0 + d, 0.0), m - 1.0);
      if (pxi != 0.0) {
        double b2 = (one_pd * pxi + (one_pd - 1.0) * Up) /
                    ((1.0 + std::pow(std::abs(d), m - 1.0)) * pxi);
        rep.b2_min = std::min(rep.b2_min, b2);
      }
      const bool deep = cfg.C2 < std::abs(d) && std::abs(d) <= 1.0 + 1e-14;
      if (r == 2 && deep && pxi != 0.0 &&
          std::abs(Up / pxi) <= 0.5 * cfg.C1) {
        ++rep.flagged_count_part3;
      }
      if (r == 3 && deep &&
          (pxi == 0.0 ? Up == 0.0 : std::abs(Up / pxi) < cfg.C1)) {
        ++rep.flagged_count_part4;
      }
    }
  }

  for (int r = 0; r < 4; ++r) {
    rep.integral[std::size_t(r)] = double(integral[std::size_t(r)]) * field.dx;
    rep.count[std::size_t(r)] = masks.counts[std::size_t(r)];
  }
  rep.d1_energy_integral = double(d1_energy) * field.dx;
  rep.d1_mass_integral = double(d1_mass) * field.dx;
  rep.flagged_measure_part3 = rep.flagged_count_part3 * field.dx;
  rep.flagged_measure_part4 = rep.flagged_count_part4 * field.dx;
  if (!std::isfinite(rep.d0_min_integrand)) rep.d0_min_integrand = 0.0;
  if (!std::isfinite(rep.b2_min)) rep.b2_min = 0.0;
  return rep;
}

FitResult fit_power_law(const std::vector<double>& t,
                        const std::vector<double>& value, double t_min,
                        double t_max) {
  if (t.size() != value.size())
    throw std::invalid_argument("fit_power_law: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(value[i] > 0.0))
      throw std::invalid_argument("fit_power_law: non-positive value in window");
    double x = std::log1p(t[i]);
    double y = std::log(value[i]);
    xs.push_back(x);
    ys.push_back(y);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 10)
    throw std::invalid_argument("fit_power_law: need at least 10 records");
  FitResult r;
  r.n_used = n;
  const double denom = double(n) * sxx - sx * sx;
  r.slope = (double(n) * sxy - sx * sy) / denom;
  const double intercept = (sy - r.slope * sx) / double(n);
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    double resid = ys[std::size_t(i)] - (intercept + r.slope * xs[std::size_t(i)]);
    ss += resid * resid;
  }
  r.stderr_ = std::sqrt(ss / double(n - 2) / (sxx - sx * sx / double(n)));
  return r;
}

double theorem_rate_l2(double m) { return 1.0 / (4.0 * (11.0 * m + 7.0)); }
double theorem_rate_linf(double m) { return 1.0 / (6.0 * (11.0 * m + 7.0)); }

DecaySeries build_decay_series(const Trajectory& traj, const Grid1D& grid,
                               const ShockProfile& profile,
                               const std::vector<int>& p_moments) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("decay series needs recorded snapshots");
  DecaySeries s;
  const double inf = std::numeric_limits<double>::infinity();
  for (const FieldState& snap : traj.snapshots) {
    auto f = perturbation(snap, grid, profile);
    auto Phi = antiderivative(f.phi, f.dx);
    s.t.push_back(snap.t);
    s.l1_phi.push_back(lp_norm(f.phi, f.dx, 1.0));
    s.l2_phi.push_back(lp_norm(f.phi, f.dx, 2.0));
    s.linf_phi.push_back(lp_norm(f.phi, f.dx, inf));
    s.l2_Phi.push_back(lp_norm(Phi, f.dx, 2.0));
    double l2P = s.l2_Phi.back(), l2p = s.l2_phi.back();
    s.h1_Phi.push_back(std::sqrt(l2P * l2P + l2p * l2p));  // Phi_xi = phi
    long double mass = 0.0L;
    for (double v : f.phi) mass += v;
    s.phi_mass.push_back(double(mass) * f.dx);
    s.linf_phi_xi.push_back(lp_norm(centered_derivative(f.phi, f.dx), f.dx, inf));
    for (int p : p_moments)
      s.lp_Phi[p].push_back(lp_norm(Phi, f.dx, double(p)));
  }
  return s;
}

PhiEnergyReport phi_lp_energy_check(const DecaySeries& series, int p, double m,
                                    double eps0, double fit_t_min,
                                    double fit_t_max) {
  if (p < 2) throw std::invalid_argument("phi_lp_energy_check needs p >= 2");
  PhiEnergyReport rep;
  rep.p = p;
  rep.m = m;
  rep.initial_h1 = series.h1_Phi.empty() ? 0.0 : series.h1_Phi.front();
  rep.small_data = rep.initial_h1 <= eps0;

  const std::vector<double>& norm =
      p == 2 ? series.l2_Phi : series.lp_Phi.at(p);
  std::vector<double> h(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i)
    h[i] = std::pow(norm[i], double(p));

  const double h0 = h.empty() ? 0.0 : h.front();
  rep.monotone = true;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    double rel = (h[k + 1] - h[k]) / std::max(h0, 1e-300);
    rep.worst_increase_rel = std::max(rep.worst_increase_rel, rel);
  }
  rep.monotone = rep.worst_increase_rel <= 1e-12;

  rep.bound = p > 2 ? double(p - 2) / (3.0 * m + 1.0) : 0.0;
  if (h0 > 0.0) {
    auto fit = fit_power_law(series.t, h, fit_t_min, fit_t_max);
    rep.fitted_exponent = fit.slope;
    rep.fit_stderr = fit.stderr_;
    rep.decay_ok = -fit.slope >= rep.bound - 0.05;
    double C = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
      C = std::max(C, h[i] * std::pow(1.0 + series.t[i], rep.bound) / h0);
    rep.C_prefactor = C;
    // Empirical constant of h' + c h^nu <= 0 along the run (p > 2).
    if (p > 2) {
      double nu = 1.0 + (3.0 * m + 1.0) / double(p - 2);
      double c_min = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k + 1 < h.size(); ++k) {
        double hp = (h[k + 1] - h[k - 1]) / (series.t[k + 1] - series.t[k - 1]);
        if (h[k] > 1e-300)
          c_min = std::min(c_min, -hp / std::pow(h[k], nu));
      }
      rep.c_ode_min = std::isfinite(c_min) ? c_min : 0.0;
    }
  } else {
    rep.decay_ok = true;  // identically zero perturbation
    rep.monotone = true;
  }
  return rep;
}

double interpolation_constant(const DecaySeries& series, int p) {
  const auto& PhiP = p == 2 ? series.l2_Phi : series.lp_Phi.at(p);
  double C = 0.0;
  const double e1 = double(p + 1) / double(2 * p + 1);
  const double e2 = double(p) / double(2 * p + 1);
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    double denom =
        std::pow(series.linf_phi_xi[i], e1) * std::pow(PhiP[i], e2);
    if (denom > 1e-300) C = std::max(C, series.linf_phi[i] / denom);
  }
  return C;
}

}  // namespace pmshock
