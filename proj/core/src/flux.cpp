#include "pmshock/flux.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmshock {

namespace {

double horner(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

}  // namespace

FluxSpec FluxSpec::burgers() { return polynomial({0.0, 0.0, 0.5}, 1.0); }

FluxSpec FluxSpec::quadratic(double a) {
  if (a <= 0.0) throw std::invalid_argument("quadratic flux needs a > 0");
  return polynomial({0.0, 0.0, a}, 2.0 * a);
}

FluxSpec FluxSpec::polynomial(std::vector<double> coef, double convexity_floor) {
  if (coef.empty() || coef[0] != 0.0)
    throw std::invalid_argument("polynomial flux requires f(0) = 0 (coef[0] == 0)");
  if (convexity_floor <= 0.0)
    throw std::invalid_argument("convexity floor must be positive");
  FluxSpec s;
  s.poly_ = true;
  s.coef_ = std::move(coef);
  s.floor_ = convexity_floor;
  std::ostringstream name;
  name << "poly[";
  for (std::size_t k = 0; k < s.coef_.size(); ++k)
    name << (k ? "," : "") << s.coef_[k];
  name << "]";
  s.name_ = name.str();
  return s;
}

FluxSpec FluxSpec::custom(std::string name,
                          std::function<double(double)> f,
                          std::function<double(double)> df,
                          std::function<double(double)> d2f,
                          double convexity_floor) {
  if (convexity_floor <= 0.0)
    throw std::invalid_argument("convexity floor must be positive");
  FluxSpec s;
  s.f_ = std::move(f);
  s.df_ = std::move(df);
  s.d2f_ = std::move(d2f);
  s.floor_ = convexity_floor;
  s.name_ = std::move(name);
  return s;
}

double FluxSpec::eval(double u) const {
  return poly_ ? horner(coef_, u) : f_(u);
}

double FluxSpec::deriv(double u) const {
  if (!poly_) return df_(u);
  double acc = 0.0;
  for (std::size_t k = coef_.size(); k-- > 1;) acc = acc * u + double(k) * coef_[k];
  return acc;
}

double FluxSpec::deriv2(double u) const {
  if (!poly_) return d2f_(u);
  return horner(poly_derivative(poly_derivative(coef_)), u);
}

double FluxSpec::max_abs_deriv(double lo, double hi) const {
  return std::max(std::abs(deriv(lo)), std::abs(deriv(hi)));
}

double FluxSpec::sonic_point(double lo, double hi) const {
  if (deriv(lo) >= 0.0) return lo;
  if (deriv(hi) <= 0.0) return hi;
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    double mid = 0.5 * (a + b);
    (deriv(mid) < 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

void FluxSpec::validate_on(double u_max, int n_samples) const {
  if (eval(0.0) != 0.0)
    throw std::invalid_argument("flux violates f(0) = 0");
  if (u_max <= 0.0) throw std::invalid_argument("empty flux working range");
  for (int i = 0; i < n_samples; ++i) {
    double u = u_max * double(i) / double(n_samples - 1);
    double d2 = deriv2(u);
    if (!(d2 >= floor_ * (1.0 - 1e-12))) {
      std::ostringstream msg;
      msg << "flux not uniformly convex: f''(" << u << ") = " << d2
          << " < declared floor " << floor_;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace pmshock
