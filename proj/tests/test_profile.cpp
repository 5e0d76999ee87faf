#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pmshock/flux.hpp"
#include "pmshock/profile.hpp"

using namespace pmshock;

namespace {

// Closed form for m = 1, f = u^2/2, u_- = 1 with the U(0) = 1/2 pin:
// the profile ODE reduces to U' = U(U-1)/2, solved by the logistic below.
double logistic_wave(double xi) { return 1.0 / (1.0 + std::exp(0.5 * xi)); }

}  // namespace

TEST_CASE("rh_speed matches the jump condition") {
  auto burgers = FluxSpec::burgers();
  CHECK(rh_speed(burgers, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  auto sq = FluxSpec::quadratic(1.0);
  CHECK(rh_speed(sq, 2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(rh_speed(burgers, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("rh_speed is symmetric in its states") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(0.1, 3.0), state(0.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    auto f = FluxSpec::quadratic(coef(rng));
    double a = state(rng), b = state(rng);
    if (a == b) continue;
    CHECK(rh_speed(f, a, b) == rh_speed(f, b, a));
  }
}

TEST_CASE("flux validation") {
  CHECK_THROWS_AS(FluxSpec::polynomial({1.0, 0.0, 0.5}, 1.0),
                  std::invalid_argument);  // f(0) != 0
  auto cubic = FluxSpec::polynomial({0.0, 0.0, 0.0, 1.0}, 1.0);  // f'' = 6u
  CHECK_THROWS_AS(cubic.validate_on(1.0), std::invalid_argument);
  CHECK_NOTHROW(FluxSpec::burgers().validate_on(1.0));
  CHECK(FluxSpec::burgers().sonic_point(-1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("m = 1 profile reproduces the logistic closed form") {
  ProfileSolveOptions opt;
  opt.xi_min = -60.0;
  opt.xi_max = 60.0;
  auto p = solve_profile(FluxSpec::burgers(), 1.0, 1.0, opt);

  CHECK(p.gamma() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(!p.has_free_boundary());
  CHECK(p.value(0.0) == doctest::Approx(0.5).epsilon(1e-12));

  double worst = 0.0;
  for (int i = 0; i <= 1200; ++i) {
    double xi = -30.0 + 0.05 * i;
    worst = std::max(worst, std::abs(p.value(xi) - logistic_wave(xi)));
  }
  CHECK(worst < 1e-6);

  for (double u : p.values()) CHECK(u > 0.0);  // no free boundary for m = 1

  auto rep = verify_profile(p, FluxSpec::burgers());
  CHECK(rep.max_ode_residual < 1e-8);
  CHECK(rep.max_monotonicity_violation <= 0.0);
  CHECK(rep.derivative_bound_violations == 0);
}

TEST_CASE("m = 1.5 free boundary and the degenerate-slope asymptotics") {
  auto p = solve_profile(FluxSpec::burgers(), 1.0, 1.5);
  REQUIRE(p.has_free_boundary());
  const double xr = p.x_right();

  CHECK(p.value(xr + 5.0) == 0.0);
  CHECK(p.value(p.xi_min() - 10.0) == 1.0);

  // Slope of w = U^{1/2} at the free boundary: (m-1)(f'(0)-gamma)/m = -1/6.
  const double delta = 0.25;
  double w1 = std::sqrt(p.value(xr - delta));
  double w2 = std::sqrt(p.value(xr - 2.0 * delta));
  double slope = (w1 - w2) / delta;
  CHECK(slope == doctest::Approx(-1.0 / 6.0).epsilon(0.01));

  // Equivalent local form U ~ (x_R - xi)^2 / 36.
  double s = 0.3;
  CHECK(p.value(xr - s) == doctest::Approx(s * s / 36.0).epsilon(0.02));

  auto rep = verify_profile(p, FluxSpec::burgers());
  CHECK(rep.max_ode_residual < 1e-8);
  CHECK(rep.derivative_bound_violations == 0);
  CHECK(rep.max_derivative_bound_violation < 1e-10);
}

TEST_CASE("profiles across the exponent range are monotone with compact support") {
  for (double m : {1.1, 1.25, 4.0 / 3.0, 1.9}) {
    CAPTURE(m);
    auto p = solve_profile(FluxSpec::burgers(), 1.0, m);
    REQUIRE(p.has_free_boundary());
    const auto& u = p.values();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) CHECK(u[i + 1] <= u[i]);
    CHECK(u.back() == 0.0);
    CHECK(p.value(p.x_right() + 1.0) == 0.0);
    CHECK(std::abs(p.values().front() - 1.0) <= 1e-9);

    auto rep = verify_profile(p, FluxSpec::burgers());
    CHECK(rep.max_ode_residual < 1e-8);
    CHECK(rep.max_monotonicity_violation <= 0.0);
    CHECK(rep.derivative_bound_violations == 0);
  }
}

TEST_CASE("verify_profile flags an injected defect") {
  auto p = solve_profile(FluxSpec::burgers(), 1.0, 1.25);
  auto bad = p.with_perturbed_value(p.knots().size() / 2, 0.1);
  auto rep = verify_profile(bad, FluxSpec::burgers());
  CHECK(rep.max_monotonicity_violation > 0.0);
  CHECK(rep.max_ode_residual > 1e-3);
}

TEST_CASE("span errors") {
  ProfileSolveOptions narrow_right;
  narrow_right.xi_max = 0.5;  // x_R sits near 4 for m = 1.5
  CHECK_THROWS_AS(solve_profile(FluxSpec::burgers(), 1.0, 1.5, narrow_right),
                  std::runtime_error);

  ProfileSolveOptions narrow_left;
  narrow_left.xi_min = -5.0;  // far field needs |xi| ~ 60 at tol = 1e-10
  CHECK_THROWS_AS(solve_profile(FluxSpec::burgers(), 1.0, 1.5, narrow_left),
                  std::runtime_error);
}

TEST_CASE("solve_profile rejects bad parameters") {
  CHECK_THROWS_AS(solve_profile(FluxSpec::burgers(), -1.0, 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_profile(FluxSpec::burgers(), 1.0, 2.0),
                  std::invalid_argument);
  auto cubic = FluxSpec::polynomial({0.0, 0.0, 0.0, 1.0}, 1.0);
  CHECK_THROWS_AS(solve_profile(cubic, 1.0, 1.5), std::invalid_argument);
}
