#pragma once

#include <functional>
#include <string>
#include <vector>

namespace pmshock {

// Convex flux f with f(0) = 0 and f'' >= C_f > 0 on the working range.
// Polynomial fluxes keep their coefficients so hot loops evaluate them
// directly instead of going through std::function.
class FluxSpec {
public:
  static FluxSpec burgers();            // u^2/2
  static FluxSpec quadratic(double a);  // a*u^2 with a > 0
  // f(u) = sum_k coef[k] u^k; coef[0] must be 0.
  static FluxSpec polynomial(std::vector<double> coef, double convexity_floor);
  static FluxSpec custom(std::string name,
                         std::function<double(double)> f,
                         std::function<double(double)> df,
                         std::function<double(double)> d2f,
                         double convexity_floor);

  double eval(double u) const;
  double deriv(double u) const;
  double deriv2(double u) const;

  double convexity_floor() const { return floor_; }
  const std::string& name() const { return name_; }

  // f' is non-decreasing, so |f'| attains its max at an interval end.
  double max_abs_deriv(double lo, double hi) const;

  // Minimizer of f on [lo, hi]; the interior zero of f' is bisected.
  double sonic_point(double lo, double hi) const;

  // Throws std::invalid_argument if f(0) != 0 or a sampled f'' drops below
  // the declared convexity floor on [0, u_max].
  void validate_on(double u_max, int n_samples = 257) const;

private:
  FluxSpec() = default;

  bool poly_ = false;
  std::vector<double> coef_;
  std::function<double(double)> f_, df_, d2f_;
  double floor_ = 0.0;
  std::string name_;
};

}  // namespace pmshock
