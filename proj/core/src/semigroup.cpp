#include "pmshock/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pmshock/profile.hpp"

namespace pmshock {

namespace {

std::vector<double> translate_filled(const std::vector<double>& u, long k,
                                     double fill_left, double fill_right) {
  const long n = long(u.size());
  std::vector<double> s(u.size());
  for (long i = 0; i < n; ++i) {
    long j = i - k;
    s[std::size_t(i)] =
        j < 0 ? fill_left : (j >= n ? fill_right : u[std::size_t(j)]);
  }
  return s;
}

}  // namespace

double check_translation(const CauchyProblem& prob, const FieldState& u0,
                         double y, double t_end, double safety) {
  const double dx = prob.grid.dx();
  const double k_real = y / dx;
  const long k = std::lround(k_real);
  if (std::abs(k_real - double(k)) > 1e-9)
    throw std::invalid_argument("translation must be an integer multiple of dx");

  EvolveOptions opt;
  opt.t_end = u0.t + t_end;
  opt.safety = safety;
  opt.enforce_support_guard = false;

  FieldState shifted = u0;
  shifted.u = translate_filled(u0.u, k, prob.grid.bc_left, prob.grid.bc_right);

  auto a = evolve(prob, u0, opt);       // T(t) u
  auto b = evolve(prob, shifted, opt);  // T(t) u_{(y)}
  auto a_shifted = translate_filled(a.final_state.u, k, prob.grid.bc_left,
                                    prob.grid.bc_right);
  double worst = 0.0;
  for (std::size_t i = 0; i < a_shifted.size(); ++i)
    worst = std::max(worst, std::abs(b.final_state.u[i] - a_shifted[i]));
  return worst;
}

double check_monotone(const CauchyProblem& prob, const FieldState& u0,
                      const FieldState& v0, double t_end, double cadence) {
  for (std::size_t i = 0; i < u0.u.size(); ++i)
    if (u0.u[i] > v0.u[i])
      throw std::invalid_argument("check_monotone needs u0 <= v0 pointwise");
  EvolveOptions opt;
  opt.t_end = u0.t + t_end;
  opt.cadence = cadence;
  opt.enforce_support_guard = false;
  auto series = evolve_pair(prob, u0, v0, opt);
  return *std::max_element(series.order_violation.begin(),
                           series.order_violation.end());
}

L1ContractionResult check_l1_contraction(const CauchyProblem& prob,
                                         const FieldState& u0,
                                         const FieldState& v0, double t_end,
                                         double cadence) {
  EvolveOptions opt;
  opt.t_end = u0.t + t_end;
  opt.cadence = cadence;
  auto series = evolve_pair(prob, u0, v0, opt);
  L1ContractionResult out;
  out.times = series.times;
  out.l1 = series.l1_distance;
  for (std::size_t k = 0; k + 1 < out.l1.size(); ++k)
    out.worst_step_increase =
        std::max(out.worst_step_increase, out.l1[k + 1] - out.l1[k]);
  return out;
}

ConservationResult check_conservation(const CauchyProblem& prob,
                                      const FieldState& u0,
                                      const FieldState& v0, double t_end,
                                      double cadence) {
  EvolveOptions opt;
  opt.t_end = u0.t + t_end;
  opt.cadence = cadence;
  auto series = evolve_pair(prob, u0, v0, opt);
  ConservationResult out;
  out.times = series.times;
  out.mass_difference = series.mass_difference;
  for (double md : out.mass_difference)
    out.drift = std::max(out.drift, std::abs(md - out.mass_difference.front()));
  return out;
}

namespace {

struct SuiteDomain {
  // Wide enough that every profile in the sweep matches its far-field values
  // to ~1e-13 at the boundaries; widths divide evenly by both suite dx's.
  static constexpr double x_left = -88.0;
  static constexpr double x_right = 32.0;
};

double gauss(double x, double a, double c, double w) {
  double z = (x - c) / w;
  return a * std::exp(-z * z);
}

}  // namespace

std::vector<SemigroupCaseResult> run_semigroup_suite(
    const SemigroupSuiteConfig& cfg) {
  std::vector<SemigroupCaseResult> rows;

  for (double m : cfg.ms) {
    ProfileSolveOptions popt;
    popt.tol = 1e-13;
    auto profile = solve_profile(FluxSpec::burgers(), cfg.u_minus, m, popt);

    for (double dx : cfg.dxs) {
      CauchyProblem prob;
      const int n = int(std::lround((SuiteDomain::x_right - SuiteDomain::x_left) / dx));
      prob.grid = Grid1D{SuiteDomain::x_left, SuiteDomain::x_right, n,
                         cfg.u_minus, 0.0};
      prob.flux = FluxSpec::burgers();
      prob.m = m;

      std::vector<double> base(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i)
        base[std::size_t(i)] = profile(prob.grid.cell_center(i));

      for (int s = 0; s < cfg.n_seeds; ++s) {
        uint64_t seed = derive_seed(cfg.master_seed,
                                    uint64_t(s) * 1000 + uint64_t(dx * 100) +
                                        uint64_t(m * 10000));
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> amp(0.01, 0.08);
        std::uniform_real_distribution<double> center(-25.0, 2.0);
        std::uniform_real_distribution<double> width(0.5, 3.0);
        std::uniform_real_distribution<double> sign(-1.0, 1.0);

        double a1 = amp(rng), c1 = center(rng), w1 = width(rng);
        double a2 = amp(rng), c2 = center(rng), w2 = width(rng);
        double a3 = amp(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
        double c3 = std::min(center(rng), -4.0), w3 = width(rng);

        FieldState u0{0.0, base};
        FieldState v0{0.0, base};  // u0 + second bump (ordered pair)
        FieldState w0{0.0, base};  // independent mixed-sign perturbation
        for (int i = 0; i < n; ++i) {
          double x = prob.grid.cell_center(i);
          u0.u[std::size_t(i)] += gauss(x, a1, c1, w1);
          v0.u[std::size_t(i)] += gauss(x, a1, c1, w1) + gauss(x, a2, c2, w2);
          w0.u[std::size_t(i)] += gauss(x, a3, c3, w3);
        }

        auto push = [&](const char* check, double viol, double tol) {
          rows.push_back({check, m, dx, seed, viol, viol <= tol});
        };

        long shift_cells = 1 + long(rng() % 8);
        double trans = check_translation(prob, u0, double(shift_cells) * dx,
                                         cfg.t_end);
        push("translation", trans, cfg.tol_translation);

        double mono = check_monotone(prob, u0, v0, cfg.t_end, cfg.t_end / 4.0);
        push("monotone", mono, cfg.tol_monotone);

        auto l1 = check_l1_contraction(prob, u0, w0, cfg.t_end, cfg.t_end / 8.0);
        push("l1_contraction", std::max(0.0, l1.worst_step_increase),
             cfg.tol_l1_rel * std::max(l1.l1.front(), 1e-300));

        auto cons = check_conservation(prob, u0, w0, cfg.t_end, cfg.t_end / 8.0);
        double mass_scale = 0.0;
        for (std::size_t i = 0; i < u0.u.size(); ++i)
          mass_scale += (std::abs(u0.u[i]) + std::abs(w0.u[i])) * dx;
        push("conservation", cons.drift, cfg.tol_conservation_rel * mass_scale);

        // Ordered pair: contraction + conservation leave ||u - v||_1 constant.
        auto ordered = check_l1_contraction(prob, u0, v0, cfg.t_end,
                                            cfg.t_end / 8.0);
        double constancy = 0.0;
        for (double val : ordered.l1)
          constancy = std::max(constancy, std::abs(val - ordered.l1.front()));
        push("ordered_l1_constancy", constancy,
             cfg.tol_conservation_rel * std::max(ordered.l1.front(), 1e-300));
      }
    }
  }
  return rows;
}

}  // namespace pmshock
