#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pmshock/gradient_diag.hpp"
#include "pmshock/profile.hpp"
#include "pmshock/regularized.hpp"
#include "pmshock/solver.hpp"

using namespace pmshock;

namespace {

CauchyProblem burgers_problem(double x_left, double x_right, int n, double m,
                              double bc_left = 1.0, double bc_right = 0.0) {
  CauchyProblem p;
  p.grid = Grid1D{x_left, x_right, n, bc_left, bc_right};
  p.flux = FluxSpec::burgers();
  p.m = m;
  return p;
}

FieldState constant_state(int n, double c) {
  return FieldState{0.0, std::vector<double>(std::size_t(n), c)};
}

// Initial data sampled from a profile, optionally with a bump added.
FieldState profile_state(const CauchyProblem& prob, const ShockProfile& p,
                         double amp = 0.0, double center = 0.0,
                         double width = 1.0) {
  FieldState s;
  s.u.resize(std::size_t(prob.grid.n_cells));
  for (int i = 0; i < prob.grid.n_cells; ++i) {
    double x = prob.grid.cell_center(i);
    double b = amp * std::exp(-((x - center) / width) * ((x - center) / width));
    s.u[std::size_t(i)] = p(x) + b;
  }
  return s;
}

}  // namespace

TEST_CASE("cfl_dt evaluates the stated bound") {
  auto prob = burgers_problem(0.0, 1.6, 16, 1.5);
  auto s = constant_state(16, 1.0);
  CHECK(cfl_dt(prob, s, 0.4) == doctest::Approx(0.4 / 310.0).epsilon(1e-12));
  CHECK(cfl_dt(prob, s, 1.0) ==
        doctest::Approx(2.0 * cfl_dt(prob, s, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(cfl_dt(prob, s, 0.0), std::invalid_argument);
}

TEST_CASE("cfl_dt quadruples under grid halving when diffusion dominates") {
  auto coarse = burgers_problem(0.0, 1.6, 16, 1.0, 0.0, 0.0);
  auto fine = burgers_problem(0.0, 1.6, 32, 1.0, 0.0, 0.0);
  auto sc = constant_state(16, 0.0);
  auto sf = constant_state(32, 0.0);
  CHECK(cfl_dt(coarse, sc, 0.9) ==
        doctest::Approx(4.0 * cfl_dt(fine, sf, 0.9)).epsilon(1e-13));
}

TEST_CASE("constant states are fixed points of step") {
  auto prob = burgers_problem(-2.0, 2.0, 40, 1.25, 0.7, 0.7);
  auto s = constant_state(40, 0.7);
  double dt = cfl_dt(prob, s, 0.9);
  step(prob, s, dt);
  for (double v : s.u) CHECK(v == 0.7);
}

TEST_CASE("step guards: CFL violation and negative input") {
  auto prob = burgers_problem(-2.0, 2.0, 40, 1.25);
  auto s = constant_state(40, 1.0);
  double dt = cfl_dt(prob, s, 1.0);
  CHECK_THROWS_AS(step(prob, s, 3.0 * dt), std::runtime_error);
  s.u[5] = -0.1;
  CHECK_THROWS_AS(step(prob, s, 0.5 * dt), std::invalid_argument);
}

TEST_CASE("monotone update keeps random data non-negative") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double m = 1.0 + 0.9 * val(rng);
    auto prob = burgers_problem(-1.0, 1.0, 32, m, val(rng), val(rng));
    FieldState s;
    s.u.resize(32);
    for (auto& v : s.u) v = val(rng);
    for (int k = 0; k < 5; ++k) {
      double dt = cfl_dt(prob, s, 1.0);
      step(prob, s, dt);
    }
    double mn = *std::min_element(s.u.begin(), s.u.end());
    double mx = *std::max_element(s.u.begin(), s.u.end());
    CHECK(mn >= 0.0);
    CHECK(mx <= 1.0 + 1e-12);  // discrete maximum principle
  }
}

TEST_CASE("evolve records at the requested cadence") {
  auto prob = burgers_problem(-4.0, 4.0, 80, 1.25, 0.5, 0.5);
  auto s = constant_state(80, 0.5);
  EvolveOptions opt;
  opt.t_end = 2.0;
  opt.cadence = 0.5;
  auto traj = evolve(prob, s, opt);
  REQUIRE(traj.records.size() == 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(traj.records[k].t == doctest::Approx(0.5 * double(k)).epsilon(1e-14));

  auto zero = evolve(prob, constant_state(80, 0.5), EvolveOptions{0.0});
  CHECK(zero.steps_taken == 0);
  CHECK_THROWS_AS(
      evolve(prob, FieldState{1.0, std::vector<double>(80, 0.5)},
             EvolveOptions{0.5}),
      std::invalid_argument);
}

TEST_CASE("interior mass changes exactly by the boundary flux integral") {
  auto prob = burgers_problem(-40.0, 15.0, 1100, 1.25);
  auto profile = solve_profile(FluxSpec::burgers(), 1.0, 1.25);
  auto s = profile_state(prob, profile, 0.05, -5.0, 2.0);
  EvolveOptions opt;
  opt.t_end = 1.0;
  opt.cadence = 0.25;
  opt.guard_tol = 1e-5;  // profile tail at the left boundary is ~1e-7 here
  auto traj = evolve(prob, s, opt);
  double drift = std::abs(traj.records.back().mass - traj.mass_initial -
                          traj.boundary_flux_integral);
  CHECK(drift < 1e-10 * traj.mass_initial);
}

TEST_CASE("lab-frame run tracks the traveling wave at first order") {
  auto profile = solve_profile(FluxSpec::burgers(), 1.0, 1.25);
  const double T = 3.0;
  auto l1_error = [&](double dx) {
    int n = int(std::lround(65.0 / dx));
    auto prob = burgers_problem(-50.0, 15.0, n, 1.25);
    auto s = profile_state(prob, profile);
    EvolveOptions opt;
    opt.t_end = T;
    opt.guard_tol = 1e-4;
    auto traj = evolve(prob, s, opt);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = prob.grid.cell_center(i);
      err += std::abs(traj.final_state.u[std::size_t(i)] -
                      profile(x - profile.gamma() * T));
    }
    return err * dx;
  };
  double e1 = l1_error(0.1);
  double e2 = l1_error(0.05);
  CHECK(e1 < 0.05);       // O(dx) tracking
  CHECK(e1 / e2 >= 1.8);  // first-order refinement
}

TEST_CASE("grid convergence on smooth positive data") {
  // Strictly positive smooth data keeps the degeneracy away, so the scheme
  // converges at first order against the half-grid reference.
  auto run = [&](double dx) {
    int n = int(std::lround(20.0 / dx));
    auto prob = burgers_problem(-10.0, 10.0, n, 1.25, 0.5, 0.5);
    FieldState s;
    s.u.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
      double x = prob.grid.cell_center(i);
      s.u[std::size_t(i)] = 0.5 + 0.3 * std::exp(-x * x);
    }
    EvolveOptions opt;
    opt.t_end = 0.5;
    opt.enforce_support_guard = false;
    return evolve(prob, s, opt).final_state.u;
  };
  auto coarse = run(0.1);
  auto mid = run(0.05);
  auto fine = run(0.025);
  auto restrict_half = [](const std::vector<double>& v) {
    std::vector<double> r(v.size() / 2);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = 0.5 * (v[2 * i] + v[2 * i + 1]);
    return r;
  };
  auto l1 = [](const std::vector<double>& a, const std::vector<double>& b,
               double dx) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc * dx;
  };
  double e1 = l1(coarse, restrict_half(mid), 0.1);
  double e2 = l1(mid, restrict_half(fine), 0.05);
  CHECK(e1 / e2 >= 1.8);
}

TEST_CASE("support guard aborts when the perturbation hits the boundary band") {
  auto prob = burgers_problem(-2.0, 2.0, 64, 1.25, 0.5, 0.5);
  FieldState s = constant_state(64, 0.5);
  s.u[1] = 0.9;  // inside the guard band from the start
  EvolveOptions opt;
  opt.t_end = 0.1;
  CHECK_THROWS_AS(evolve(prob, s, opt), std::runtime_error);
}

TEST_CASE("regularized solve keeps constants and respects the floor") {
  auto flat = regularized_solve(RegularizedRun{4, 1.0}, FluxSpec::burgers(),
                                1.25, [](double) { return 1.0; }, 0.2, 0.1);
  for (double u : flat.u) CHECK(u == doctest::Approx(1.0).epsilon(1e-12));

  auto bump = regularized_solve(
      RegularizedRun{8, 1.0}, FluxSpec::burgers(), 1.25,
      [](double x) { return 0.8 * std::exp(-x * x); }, 0.3, 0.05, 0.9, 0.1);
  const double floor = 1.0 / 8.0;
  CHECK(bump.min_v_seen >= floor * (1.0 - 1e-11));
  for (double v : bump.min_v_series) CHECK(v >= floor * (1.0 - 1e-11));
  CHECK(bump.max_v_seen <= 1.0 + 1e-11);
}

TEST_CASE("regularized cascade approaches the degenerate solver as n grows") {
  auto u0 = [](double x) { return 0.8 * std::exp(-x * x); };
  const double t_end = 0.2, dx = 0.1;

  CauchyProblem direct = burgers_problem(-8.0, 8.0, 160, 1.25, 0.0, 0.0);
  FieldState s;
  s.u.resize(160);
  for (int i = 0; i < 160; ++i) s.u[std::size_t(i)] = u0(direct.grid.cell_center(i));
  EvolveOptions opt;
  opt.t_end = t_end;
  opt.enforce_support_guard = false;
  auto ref = evolve(direct, s, opt).final_state.u;

  double prev = 1e300;
  for (int n : {5, 10, 20}) {
    auto reg = regularized_solve(RegularizedRun{n, 0.8}, FluxSpec::burgers(),
                                 1.25, u0, t_end, dx);
    double sup = 0.0;
    for (std::size_t i = 0; i < reg.x.size(); ++i) {
      double x = reg.x[i];
      if (std::abs(x) > 2.0) continue;
      int j = int(std::floor((x - direct.grid.x_left) / dx));
      sup = std::max(sup, std::abs(reg.u[i] - ref[std::size_t(j)]));
    }
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("gradient diagnostics on a profile run") {
  auto profile = solve_profile(FluxSpec::burgers(), 1.0, 1.25);
  auto prob = burgers_problem(-45.0, 15.0, 1200, 1.25);
  auto s = profile_state(prob, profile);
  EvolveOptions opt;
  opt.t_end = 4.0;
  opt.cadence = 0.25;
  opt.record_snapshots = true;
  opt.guard_tol = 1e-4;
  auto traj = evolve(prob, s, opt);
  auto rep = gradient_diagnostics(prob, traj);
  CHECK(rep.lipschitz_ok);
  CHECK(rep.sup_dumx_nonincreasing);
  CHECK(rep.holder_ok);
  CHECK(rep.holder_exponent >= 0.45);
  for (double v : rep.sup_dux_vacuum) CHECK(v <= 2.0 * prob.grid.dx());
}

TEST_CASE("near-vacuum gradients vanish under refinement") {
  auto profile = solve_profile(FluxSpec::burgers(), 1.0, 1.25);
  auto vacuum_sup = [&](double dx) {
    int n = int(std::lround(60.0 / dx));
    auto prob = burgers_problem(-45.0, 15.0, n, 1.25);
    auto s = profile_state(prob, profile);
    EvolveOptions opt;
    opt.t_end = 1.0;
    opt.record_snapshots = true;
    opt.guard_tol = 1e-4;
    auto traj = evolve(prob, s, opt);
    auto rep = gradient_diagnostics(prob, traj);
    return *std::max_element(rep.sup_dux_vacuum.begin(),
                             rep.sup_dux_vacuum.end());
  };
  CHECK(vacuum_sup(0.05) < vacuum_sup(0.1));
}
