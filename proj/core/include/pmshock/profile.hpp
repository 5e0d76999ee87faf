#pragma once

#include <cmath>
#include <vector>

#include "pmshock/flux.hpp"

namespace pmshock {

// Wave speed from the jump condition gamma = (f(u+) - f(u-)) / (u+ - u-).
double rh_speed(const FluxSpec& flux, double u_minus, double u_plus);

struct ProfileSolveOptions {
  double xi_min = -120.0;
  double xi_max = 60.0;
  double tol = 1e-10;          // relative integration tolerance
  double knot_spacing = 0.05;  // resolution of the sample table
};

// Monotone traveling-wave table U(xi) with U(-inf) = u_-, U(+inf) = 0.
// For m > 1 the support ends at a finite free boundary x_R; for m = 1 the
// profile stays positive and x_R is +inf.
//
// The table is pinned by U(0) = u_-/2 and evaluated with a monotone cubic
// Hermite interpolant; values clamp to u_- left of the table and to 0 right
// of x_R, so evaluation is total on the real line.
class ShockProfile {
public:
  double gamma() const { return gamma_; }
  double u_minus() const { return u_minus_; }
  double exponent() const { return m_; }
  double tol() const { return tol_; }
  double x_right() const { return x_right_; }
  bool has_free_boundary() const { return std::isfinite(x_right_); }
  double xi_min() const { return xi_.front(); }
  double xi_max() const { return xi_.back(); }

  double value(double xi) const;
  double derivative(double xi) const;
  double operator()(double xi) const { return value(xi); }

  const std::vector<double>& knots() const { return xi_; }
  const std::vector<double>& values() const { return u_; }
  const std::vector<double>& slopes() const { return du_; }

  // Copy with one table value bumped; defect injection for verification
  // exercises.
  ShockProfile with_perturbed_value(std::size_t knot, double delta) const;

private:
  friend ShockProfile solve_profile(const FluxSpec&, double, double,
                                    const ProfileSolveOptions&);
  std::vector<double> xi_, u_, du_;
  double gamma_ = 0.0, u_minus_ = 0.0, m_ = 1.0, tol_ = 0.0;
  double x_right_ = std::numeric_limits<double>::infinity();
};

// Integrates the profile ODE m U^{m-1} U' = f(U) - f(u_-) - gamma (U - u_-)
// in the substituted variable w = U^{m-1}, which crosses zero with the finite
// slope (m-1)(f'(0)-gamma)/m; x_R is the root of w. Throws when the flux is
// not convex on [0, u_-] or when the xi span is too small to reach the far
// field / free boundary.
ShockProfile solve_profile(const FluxSpec& flux, double u_minus, double m,
                           const ProfileSolveOptions& opt = {});

struct ProfileReport {
  double max_ode_residual = 0.0;
  double max_monotonicity_violation = 0.0;
  double max_derivative_bound_violation = 0.0;
  int derivative_bound_violations = 0;  // knot pairs beyond roundoff allowance
};

// Violations are reported, never thrown.
ProfileReport verify_profile(const ShockProfile& profile, const FluxSpec& flux);

}  // namespace pmshock
