#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "pmshock/profile.hpp"
#include "pmshock/solver.hpp"

namespace pmshock {

// phi(t, xi) = u(t, xi + gamma t) - U(xi). The lab grid rides along with the
// wave (xi_i = x_i - gamma t), so no interpolation is involved.
struct PerturbationField {
  double t = 0.0;
  double dx = 0.0;
  std::vector<double> xi;
  std::vector<double> phi;
};

PerturbationField perturbation(const FieldState& state, const Grid1D& grid,
                               const ShockProfile& profile);

// Restriction to a fixed xi window; throws when the window leaves the grid.
PerturbationField perturbation_window(const FieldState& state, const Grid1D& grid,
                                      const ShockProfile& profile, double xi_lo,
                                      double xi_hi);

// Trapezoid cumulative integral from the left end (Phi(xi_min) = 0).
std::vector<double> antiderivative(const std::vector<double>& phi, double dx);

// Grid quadrature of (integral |v|^p dx)^{1/p}; p = inf gives max |v|.
double lp_norm(const std::vector<double>& v, double dx, double p);
double h1_norm(const std::vector<double>& v, double dx);
std::vector<double> centered_derivative(const std::vector<double>& v, double dx);

// Zero-mass shift: integral of (u0(x) - U(x + x0)) dx vanishes at
// x0 = -(integral of (u0 - U)) / u_-.
double compute_shift(const std::vector<double>& u0, const Grid1D& grid,
                     const ShockProfile& profile);

// u0(x) = U(x - x0) + bump(x - x0), with x0 polished until the discrete
// perturbation mass is below 1e-12 * u_-.
struct ShiftedData {
  FieldState state;
  double x0 = 0.0;
  double residual_mass = 0.0;
};
ShiftedData mass_neutral_initial_data(const Grid1D& grid,
                                      const ShockProfile& profile,
                                      const std::function<double(double)>& bump);

// Sign-based decomposition: D0 right of the free boundary; left of it
// D1: phi >= 0, D2: phi < 0 and phi_xi < 0, D3: phi < 0 and phi_xi >= 0.
struct RegionMasks {
  std::vector<uint8_t> region;  // 0..3 per cell
  std::array<int, 4> counts{};
  double dx = 0.0;
  double measure(int r) const { return counts[std::size_t(r)] * dx; }
};
RegionMasks region_partition(const PerturbationField& field,
                             const std::vector<double>& phi_xi, double x_right);

// Threshold pair for the impossible-regime flags: C1 << 1 and C2 solving
// C1 = (1 - C2)^{m-1} / (1 - (1 - C2)^{m-1}).
struct RegionDiagConfig {
  double C1 = 0.05;
  double C2 = 0.0;
  double q = 4.0;
  RegionDiagConfig(double C1_in, double m, double q_in = 4.0);
  double relation_residual(double m) const;
};

struct B1Report {
  std::array<double, 4> integral{};  // cellwise B1 integrated over each region
  std::array<int, 4> count{};
  double d0_min_integrand = 0.0;      // min of B1 over D0 (non-negative exactly)
  double d0_identity_residual = 0.0;  // max |B1 - phi^{m+q-3} phi_xi^2| on D0
  double d1_energy_integral = 0.0;    // int_{D1} phi^{m+q-3} phi_xi^2
  double d1_mass_integral = 0.0;      // int_{D1} phi^{m+q-3}
  double flagged_measure_part3 = 0.0;
  double flagged_measure_part4 = 0.0;
  int flagged_count_part3 = 0;
  int flagged_count_part4 = 0;
  double b2_min = 0.0;  // min B2 over D2 u D3 cells with U > 0 and phi_xi != 0
};
B1Report b1_integrals(const PerturbationField& field, const ShockProfile& profile,
                      const RegionDiagConfig& cfg);

struct FitResult {
  double slope = 0.0;
  double stderr_ = 0.0;
  int n_used = 0;
};
// Least-squares slope of log(value) against log(1 + t) over [t_min, t_max].
FitResult fit_power_law(const std::vector<double>& t,
                        const std::vector<double>& value, double t_min,
                        double t_max);

double theorem_rate_l2(double m);    // 1 / (4 (11 m + 7))
double theorem_rate_linf(double m);  // 1 / (6 (11 m + 7))

struct DecaySeries {
  std::vector<double> t;
  std::vector<double> l1_phi, l2_phi, linf_phi;
  std::vector<double> l2_Phi, h1_Phi;
  std::map<int, std::vector<double>> lp_Phi;  // p -> ||Phi||_p series
  std::vector<double> phi_mass;               // zero-mass drift monitor
  std::vector<double> linf_phi_xi;
};
DecaySeries build_decay_series(const Trajectory& traj, const Grid1D& grid,
                               const ShockProfile& profile,
                               const std::vector<int>& p_moments = {4, 8});

struct PhiEnergyReport {
  int p = 2;
  double m = 0.0;
  bool small_data = false;
  double initial_h1 = 0.0;
  bool monotone = false;  // ||Phi||_p^p non-increasing along the records
  double worst_increase_rel = 0.0;
  double fitted_exponent = 0.0;  // slope of log ||Phi||_p^p vs log(1+t)
  double fit_stderr = 0.0;
  double bound = 0.0;  // (p-2)/(3m+1)
  bool decay_ok = false;
  double c_ode_min = 0.0;     // empirical c in h' + c h^nu <= 0
  double C_prefactor = 0.0;   // fitted constant of the decay estimate
};
PhiEnergyReport phi_lp_energy_check(const DecaySeries& series, int p, double m,
                                    double eps0, double fit_t_min,
                                    double fit_t_max);

// Calibrated constant of the sup-norm interpolation bound
// ||phi||_inf <= C ||phi_xi||_inf^{(p+1)/(2p+1)} ||Phi||_p^{p/(2p+1)}.
double interpolation_constant(const DecaySeries& series, int p);

}  // namespace pmshock
