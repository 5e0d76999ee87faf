#include "pmshock/profile.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pmshock {

namespace {

namespace ode = boost::numeric::odeint;

// (f(u) - f(0))/u, continued by f'(0) at u = 0. Equals the profile ODE's
// g(U)/U once gamma satisfies the jump condition, without the cancellation
// the raw form suffers near U = 0.
double chord_from_zero(const FluxSpec& f, double u) {
  return u == 0.0 ? f.deriv(0.0) : (f.eval(u) - f.eval(0.0)) / u;
}

struct MarchResult {
  std::vector<double> xi, w;
  bool reached_target = false;
  double stop_xi = 0.0;
};

// Integrates dw/dxi from xi = 0 with dense-output sampling every `spacing`,
// stopping when `stop(w)` first holds (refined by bisection on the dense
// interpolant) or when |xi| passes `xi_limit`.
template <class Rhs, class Stop>
MarchResult march(Rhs rhs, Stop stop, double w0, double spacing, double xi_limit,
                  double abs_tol, double rel_tol) {
  const double dir = xi_limit >= 0.0 ? 1.0 : -1.0;
  auto stepper = ode::make_dense_output(abs_tol, rel_tol,
                                        ode::runge_kutta_dopri5<double>());
  stepper.initialize(w0, 0.0, dir * spacing);

  MarchResult out;
  double next_knot = dir * spacing;
  while (true) {
    stepper.do_step(rhs);
    const double t1 = stepper.current_time();
    while (dir * next_knot <= dir * t1) {
      double w;
      stepper.calc_state(next_knot, w);
      out.xi.push_back(next_knot);
      out.w.push_back(w);
      if (stop(w)) {
        out.reached_target = true;
        out.stop_xi = next_knot;
        return out;
      }
      next_knot += dir * spacing;
    }
    if (stop(stepper.current_state())) {
      // Locate the first knot-free crossing inside the last step.
      double lo = stepper.previous_time(), hi = t1;
      for (int it = 0; it < 128; ++it) {
        double mid = 0.5 * (lo + hi), w;
        stepper.calc_state(mid, w);
        (stop(w) ? hi : lo) = mid;
      }
      double w;
      stepper.calc_state(hi, w);
      out.xi.push_back(hi);
      out.w.push_back(w);
      out.reached_target = true;
      out.stop_xi = hi;
      return out;
    }
    if (dir * t1 >= dir * xi_limit) return out;
  }
}

}  // namespace

double rh_speed(const FluxSpec& flux, double u_minus, double u_plus) {
  if (u_minus == u_plus)
    throw std::invalid_argument("degenerate jump: u_minus == u_plus");
  return (flux.eval(u_plus) - flux.eval(u_minus)) / (u_plus - u_minus);
}

ShockProfile solve_profile(const FluxSpec& flux, double u_minus, double m,
                           const ProfileSolveOptions& opt) {
  if (!(u_minus > 0.0)) throw std::invalid_argument("u_minus must be positive");
  if (!(m >= 1.0 && m < 2.0)) throw std::invalid_argument("need 1 <= m < 2");
  if (!(opt.xi_min < 0.0 && opt.xi_max > 0.0))
    throw std::invalid_argument("xi span must contain the pin point 0");
  flux.validate_on(u_minus);

  const double gamma = rh_speed(flux, u_minus, 0.0);
  const double w_far = std::pow(u_minus, m - 1.0);
  const double abs_tol = opt.tol * w_far;

  // State variable: w = U^{m-1} for m > 1, w = U for m = 1. In both cases
  // the right-hand side is regular through U = 0.
  auto u_of_w = [&](double w) {
    if (m == 1.0) return std::max(w, 0.0);
    return std::pow(std::max(w, 0.0), 1.0 / (m - 1.0));
  };
  auto rhs = [&](const double& w, double& dwdxi, double /*xi*/) {
    const double u = u_of_w(w);
    const double s = chord_from_zero(flux, u) - gamma;
    dwdxi = (m == 1.0) ? u * s : (m - 1.0) / m * s;
  };

  const double w0 = (m == 1.0) ? 0.5 * u_minus : std::pow(0.5 * u_minus, m - 1.0);

  // Right march: to the root of w (m > 1) or until U decays to tol*u_- (m = 1).
  const double w_floor = (m == 1.0) ? opt.tol * u_minus : 0.0;
  auto right = march(rhs, [&](double w) { return w <= w_floor; }, w0,
                     opt.knot_spacing, opt.xi_max, abs_tol, opt.tol);
  if (m > 1.0 && !right.reached_target) {
    std::ostringstream msg;
    msg << "xi span too small: free boundary not reached by xi_max = "
        << opt.xi_max;
    throw std::runtime_error(msg.str());
  }

  // Left march: until the far field u_- is met to relative tolerance.
  const double w_stop_left =
      (m == 1.0) ? u_minus * (1.0 - opt.tol)
                 : std::pow(u_minus * (1.0 - opt.tol), m - 1.0);
  auto left = march(rhs, [&](double w) { return w >= w_stop_left; }, w0,
                    opt.knot_spacing, opt.xi_min, abs_tol, opt.tol);
  if (!left.reached_target) {
    std::ostringstream msg;
    msg << "xi span too small: far field not reached by xi_min = " << opt.xi_min;
    throw std::runtime_error(msg.str());
  }

  ShockProfile p;
  p.gamma_ = gamma;
  p.u_minus_ = u_minus;
  p.m_ = m;
  p.tol_ = opt.tol;

  for (std::size_t i = left.xi.size(); i-- > 0;) {
    p.xi_.push_back(left.xi[i]);
    p.u_.push_back(u_of_w(left.w[i]));
  }
  p.xi_.push_back(0.0);
  p.u_.push_back(0.5 * u_minus);
  double x_right = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < right.xi.size(); ++i) {
    double w = right.w[i];
    if (m > 1.0 && w <= 0.0) {
      // Root of w by linear extrapolation from the last positive sample.
      double xa = p.xi_.back(), wa = std::pow(p.u_.back(), m - 1.0);
      double xb = right.xi[i];
      x_right = (w == 0.0 || wa <= 0.0) ? xb : xa + wa * (xb - xa) / (wa - w);
      break;
    }
    p.xi_.push_back(right.xi[i]);
    p.u_.push_back(u_of_w(w));
  }
  if (m > 1.0) {
    if (!std::isfinite(x_right)) x_right = right.stop_xi;
    p.x_right_ = x_right;
    p.xi_.push_back(x_right);
    p.u_.push_back(0.0);
  }

  // Roundoff-level cleanup so the table is monotone and within [0, u_-]
  // exactly; corrections stay inside the integration tolerance.
  double prev = u_minus;
  for (auto& u : p.u_) {
    u = std::clamp(u, 0.0, prev);
    prev = u;
  }

  // Knot slopes from the ODE: U' = (chord(U) - gamma) U^{2-m} / m, which
  // vanishes at U = 0 for m < 2.
  p.du_.resize(p.u_.size());
  for (std::size_t i = 0; i < p.u_.size(); ++i) {
    const double u = p.u_[i];
    p.du_[i] = (chord_from_zero(flux, u) - gamma) * std::pow(u, 2.0 - m) / m;
  }

  // Fritsch-Carlson box limits keep the interpolant monotone.
  const std::size_t n = p.xi_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double lim = 0.0;  // most negative slope allowed at knot i
    if (i > 0)
      lim = std::min(lim, 3.0 * (p.u_[i] - p.u_[i - 1]) / (p.xi_[i] - p.xi_[i - 1]));
    if (i + 1 < n)
      lim = std::min(lim, 3.0 * (p.u_[i + 1] - p.u_[i]) / (p.xi_[i + 1] - p.xi_[i]));
    p.du_[i] = std::clamp(p.du_[i], lim, 0.0);
  }
  return p;
}

ShockProfile ShockProfile::with_perturbed_value(std::size_t knot,
                                                double delta) const {
  ShockProfile p = *this;
  p.u_.at(knot) += delta;
  return p;
}

double ShockProfile::value(double xi) const {
  if (xi <= xi_.front()) return u_minus_;
  if (xi >= x_right_) return 0.0;
  if (xi >= xi_.back()) return u_.back();
  auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  std::size_t i = std::size_t(it - xi_.begin()) - 1;
  const double h = xi_[i + 1] - xi_[i];
  const double t = (xi - xi_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return u_[i] * (2 * t3 - 3 * t2 + 1) + h * du_[i] * (t3 - 2 * t2 + t) +
         u_[i + 1] * (-2 * t3 + 3 * t2) + h * du_[i + 1] * (t3 - t2);
}

double ShockProfile::derivative(double xi) const {
  if (xi <= xi_.front() || xi >= x_right_) return 0.0;
  if (xi >= xi_.back()) return 0.0;
  auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  std::size_t i = std::size_t(it - xi_.begin()) - 1;
  const double h = xi_[i + 1] - xi_[i];
  const double t = (xi - xi_[i]) / h;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * (u_[i] - u_[i + 1]) / h +
         du_[i] * (3 * t2 - 4 * t + 1) + du_[i + 1] * (3 * t2 - 2 * t);
}

ProfileReport verify_profile(const ShockProfile& p, const FluxSpec& flux) {
  ProfileReport r;
  const auto& xi = p.knots();
  const auto& u = p.values();
  const auto& du = p.slopes();
  const double gamma = p.gamma();
  const double m = p.exponent();
  const double u_minus = p.u_minus();
  const double lower = flux.deriv(0.0) - gamma;  // Rankine-Hugoniot slope bound
  const double allowance = 1e-12 * std::max(1.0, std::abs(lower));

  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > 1e-6 * u_minus) {
      double lhs = m * std::pow(u[i], m - 1.0) * du[i];
      double g = flux.eval(u[i]) - flux.eval(u_minus) - gamma * (u[i] - u_minus);
      r.max_ode_residual = std::max(r.max_ode_residual, std::abs(lhs - g));
    }
    if (i + 1 < u.size()) {
      r.max_monotonicity_violation =
          std::max(r.max_monotonicity_violation, u[i + 1] - u[i]);
      double q = (u[i + 1] - u[i]) / (xi[i + 1] - xi[i]);
      double v = std::max({q - 0.0, lower - q, 0.0});
      r.max_derivative_bound_violation =
          std::max(r.max_derivative_bound_violation, v);
      if (v > allowance) ++r.derivative_bound_violations;
    }
  }
  return r;
}

}  // namespace pmshock
