#include "pmshock/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "pmshock/analysis.hpp"
#include "pmshock/gradient_diag.hpp"
#include "pmshock/inequalities.hpp"
#include "pmshock/numerics.hpp"
#include "pmshock/regularized.hpp"
#include "pmshock/semigroup.hpp"
#include "pmshock/solver.hpp"

namespace pmshock {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "pmshock 0.1.0";

std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + format_double(v[i]);
  return s;
}

FluxSpec make_flux(const ExperimentConfig& cfg) {
  if (cfg.flux == "burgers") return FluxSpec::burgers();
  if (cfg.flux == "quadratic") return FluxSpec::quadratic(cfg.flux_coef);
  if (cfg.flux == "poly") {
    if (cfg.flux_poly.empty())
      throw std::invalid_argument("config: flux.poly coefficients missing");
    // Estimate the convexity floor on the working range, then re-validate.
    double floor = std::numeric_limits<double>::infinity();
    auto probe = FluxSpec::polynomial(cfg.flux_poly, 1.0);
    for (int i = 0; i <= 512; ++i)
      floor = std::min(floor, probe.deriv2(cfg.u_minus * i / 512.0));
    if (!(floor > 0.0))
      throw std::invalid_argument("config: flux.poly is not uniformly convex");
    return FluxSpec::polynomial(cfg.flux_poly, floor);
  }
  throw std::invalid_argument("config: unknown flux '" + cfg.flux + "'");
}

ConvectiveScheme parse_scheme(const std::string& s) {
  if (s == "godunov") return ConvectiveScheme::godunov;
  if (s == "engquist-osher") return ConvectiveScheme::engquist_osher;
  throw std::invalid_argument("config: unknown scheme '" + s + "'");
}

Frame parse_frame(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "traveling") return Frame::traveling;
  throw std::invalid_argument("config: unknown frame '" + s + "'");
}

std::function<double(double)> make_bump(const ExperimentConfig& cfg) {
  const double a = cfg.bump_amplitude, c = cfg.bump_center, w = cfg.bump_width;
  if (cfg.bump_shape == "none") return [](double) { return 0.0; };
  if (cfg.bump_shape == "gauss")
    return [a, c, w](double x) {
      double z = (x - c) / w;
      return a * std::exp(-z * z);
    };
  if (cfg.bump_shape == "dipole")
    return [a, c, w](double x) {
      double z = (x - c) / w;
      return a * z * std::exp(-z * z);
    };
  throw std::invalid_argument("config: unknown bump shape '" + cfg.bump_shape +
                              "'");
}

void validate_config(const ExperimentConfig& cfg) {
  static const std::vector<std::string> kinds = {
      "profile", "evolve",       "decay",      "semigroup",
      "report",  "inequalities", "regularized"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    throw std::invalid_argument("config: unknown experiment kind '" + cfg.kind +
                                "'");
  const bool oracle = cfg.kind == "profile";
  if (oracle ? !(cfg.m >= 1.0 && cfg.m < 2.0) : !(cfg.m > 1.0 && cfg.m < 2.0))
    throw std::invalid_argument(
        "config: m must lie in (1,2); m = 1 only for profile oracle runs");
  if (!(cfg.u_minus > 0.0))
    throw std::invalid_argument("config: u_minus must be positive");
  if (!(cfg.dx > 0.0)) throw std::invalid_argument("config: dx must be positive");
  if (!(cfg.t_end >= 0.0))
    throw std::invalid_argument("config: t_end must be non-negative");
}

struct WaveSetup {
  FluxSpec flux = FluxSpec::burgers();
  ShockProfile profile;
  CauchyProblem prob;
};

WaveSetup make_wave(const ExperimentConfig& cfg) {
  WaveSetup w;
  w.flux = make_flux(cfg);
  ProfileSolveOptions popt;
  popt.xi_min = cfg.xi_min;
  popt.xi_max = cfg.xi_max;
  popt.tol = cfg.profile_tol;
  popt.knot_spacing = cfg.knot_spacing;
  w.profile = solve_profile(w.flux, cfg.u_minus, cfg.m, popt);
  const int n = int(std::lround((cfg.x_right - cfg.x_left) / cfg.dx));
  w.prob.grid = Grid1D{cfg.x_left, cfg.x_right, n, cfg.u_minus, 0.0};
  w.prob.flux = w.flux;
  w.prob.m = cfg.m;
  w.prob.frame = parse_frame(cfg.frame);
  w.prob.gamma = w.profile.gamma();
  w.prob.scheme = parse_scheme(cfg.scheme);
  return w;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

struct Runner {
  const ExperimentConfig& cfg;
  const fs::path& dir;
  ExperimentSummary summary;

  void check(const std::string& name, bool pass, double value,
             const std::string& detail = "") {
    summary.checks.push_back({name, pass, value, detail});
  }
  fs::path artifact(const std::string& name) {
    summary.artifacts.push_back(name);
    return dir / name;
  }
};

void run_profile_kind(Runner& r) {
  auto flux = make_flux(r.cfg);
  ProfileSolveOptions popt;
  popt.xi_min = r.cfg.xi_min;
  popt.xi_max = r.cfg.xi_max;
  popt.tol = r.cfg.profile_tol;
  popt.knot_spacing = r.cfg.knot_spacing;
  auto profile = solve_profile(flux, r.cfg.u_minus, r.cfg.m, popt);

  write_profile(profile, r.artifact("profile.csv"), r.artifact("profile.json"),
                r.cfg.manifest_line());

  auto rep = verify_profile(profile, flux);
  r.check("ode_residual", rep.max_ode_residual < 1e-8, rep.max_ode_residual);
  r.check("monotone_knots", rep.max_monotonicity_violation <= 0.0,
          rep.max_monotonicity_violation);
  r.check("derivative_bound", rep.derivative_bound_violations == 0,
          rep.max_derivative_bound_violation);
  if (profile.has_free_boundary()) {
    // Near-boundary slope of w = U^{m-1} against (m-1)(f'(0)-gamma)/m.
    const double expected = (r.cfg.m - 1.0) *
                            (flux.deriv(0.0) - profile.gamma()) / r.cfg.m;
    const double d = 0.25;
    auto wof = [&](double xi) {
      return std::pow(profile(xi), r.cfg.m - 1.0);
    };
    double slope = (wof(profile.x_right() - d) - wof(profile.x_right() - 2 * d)) / d;
    double rel = std::abs(slope - expected) / std::abs(expected);
    r.check("free_boundary_slope", rel < 0.02, slope,
            "expected " + format_double(expected));
  }
}

CsvTable trajectory_table(const Trajectory& traj, const std::string& manifest) {
  CsvTable t;
  t.manifest = manifest;
  t.columns = {"t", "mass", "min_u", "max_u", "sup_dux", "sup_dumx"};
  for (const auto& rec : traj.records)
    t.rows.push_back(
        {rec.t, rec.mass, rec.min_u, rec.max_u, rec.sup_dux, rec.sup_dumx});
  return t;
}

void run_evolve_kind(Runner& r) {
  auto w = make_wave(r.cfg);
  auto data = mass_neutral_initial_data(w.prob.grid, w.profile, make_bump(r.cfg));

  EvolveOptions opt;
  opt.t_end = r.cfg.t_end;
  opt.cadence = r.cfg.cadence;
  opt.safety = r.cfg.safety;
  opt.record_snapshots = true;
  auto traj = evolve(w.prob, data.state, opt);

  write_csv(r.artifact("trajectory.csv"),
            trajectory_table(traj, r.cfg.manifest_line()));
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%04zu", k);
    CsvTable t;
    t.manifest = r.cfg.manifest_line();
    t.columns = {"x", "u"};
    const auto& s = traj.snapshots[k];
    for (int i = 0; i < w.prob.grid.n_cells; ++i)
      t.rows.push_back({w.prob.grid.cell_center(i), s.u[std::size_t(i)]});
    write_csv(r.artifact(std::string(name) + ".csv"), t);
    ordered_json j;
    j["manifest"] = r.cfg.manifest_line();
    j["t"] = s.t;
    j["dx"] = w.prob.grid.dx();
    j["frame"] = r.cfg.frame;
    j["scheme"] = r.cfg.scheme;
    j["dt_policy"] = "cfl:" + format_double(r.cfg.safety);
    write_json(r.artifact(std::string(name) + ".json"), j);
  }

  double drift = std::abs(traj.records.back().mass - traj.mass_initial -
                          traj.boundary_flux_integral);
  r.check("mass_conservation", drift < 1e-10 * std::max(traj.mass_initial, 1.0),
          drift);
  double min_u = 1e300, max_u = -1e300;
  for (const auto& rec : traj.records) {
    min_u = std::min(min_u, rec.min_u);
    max_u = std::max(max_u, rec.max_u);
  }
  double hi0 = std::max({traj.records.front().max_u, w.prob.grid.bc_left,
                         w.prob.grid.bc_right});
  r.check("positivity", min_u >= 0.0, min_u);
  r.check("max_principle", max_u <= hi0 * (1.0 + 1e-12), max_u);

  auto grad = gradient_diagnostics(w.prob, traj);
  r.check("gradient_bound", grad.lipschitz_ok, grad.max_sup_dumx,
          "bound " + format_double(grad.lipschitz_bound));
}

void run_decay_kind(Runner& r) {
  auto w = make_wave(r.cfg);
  auto data = mass_neutral_initial_data(w.prob.grid, w.profile, make_bump(r.cfg));

  EvolveOptions opt;
  opt.t_end = r.cfg.t_end;
  opt.cadence = r.cfg.cadence;
  opt.safety = r.cfg.safety;
  opt.record_snapshots = true;
  auto traj = evolve(w.prob, data.state, opt);

  std::vector<int> ps;
  for (double p : r.cfg.p_moments)
    if (p > 2.0) ps.push_back(int(std::lround(p)));
  auto series = build_decay_series(traj, w.prob.grid, w.profile, ps);

  CsvTable t;
  t.manifest = r.cfg.manifest_line();
  t.columns = {"t", "l1_phi", "l2_phi", "linf_phi", "l2_Phi", "h1_Phi"};
  for (int p : ps) t.columns.push_back("lp_Phi_" + std::to_string(p));
  for (std::size_t k = 0; k < series.t.size(); ++k) {
    std::vector<double> row = {series.t[k],     series.l1_phi[k],
                               series.l2_phi[k], series.linf_phi[k],
                               series.l2_Phi[k], series.h1_Phi[k]};
    for (int p : ps) row.push_back(series.lp_Phi.at(p)[k]);
    t.rows.push_back(row);
  }
  write_csv(r.artifact("decay.csv"), t);

  CsvTable massT;
  massT.manifest = r.cfg.manifest_line();
  massT.columns = {"t", "phi_mass"};
  for (std::size_t k = 0; k < series.t.size(); ++k)
    massT.rows.push_back({series.t[k], series.phi_mass[k]});
  write_csv(r.artifact("perturbation_mass.csv"), massT);

  // Region decomposition rows on the coarser diagnostic cadence.
  RegionDiagConfig rc(r.cfg.c1_threshold, r.cfg.m, r.cfg.q);
  CsvTable regT;
  regT.manifest = r.cfg.manifest_line();
  regT.columns = {"t", "region", "measure", "B1_integral", "flagged_measure"};
  bool partition_exact = true;
  double d0_min = 0.0;
  double step = std::max(r.cfg.region_cadence, r.cfg.cadence);
  double next_diag = 0.0;
  for (const auto& snap : traj.snapshots) {
    if (snap.t + 1e-9 < next_diag) continue;
    next_diag = snap.t + step;
    auto field = perturbation(snap, w.prob.grid, w.profile);
    auto rep = b1_integrals(field, w.profile, rc);
    int total = 0;
    for (int reg = 0; reg < 4; ++reg) {
      total += rep.count[std::size_t(reg)];
      double flagged = reg == 2 ? rep.flagged_measure_part3
                                : (reg == 3 ? rep.flagged_measure_part4 : 0.0);
      regT.rows.push_back({snap.t, double(reg),
                           rep.count[std::size_t(reg)] * w.prob.grid.dx(),
                           rep.integral[std::size_t(reg)], flagged});
    }
    partition_exact = partition_exact && total == w.prob.grid.n_cells;
    d0_min = std::min(d0_min, rep.d0_min_integrand);
  }
  write_csv(r.artifact("regions.csv"), regT);

  // Fits and the energy checks.
  ordered_json fits = ordered_json::array();
  auto fit_entry = [&](const std::string& norm, const FitResult& fit,
                       double bound, double slack, bool pass) {
    ordered_json j;
    j["m"] = r.cfg.m;
    j["norm"] = norm;
    j["q"] = r.cfg.q;
    j["exponent"] = fit.slope;
    j["stderr"] = fit.stderr_;
    j["bound"] = bound;
    j["slack"] = slack;
    j["pass"] = pass;
    fits.push_back(j);
    return pass;
  };

  auto l2fit = fit_power_law(series.t, series.l2_phi, r.cfg.fit_t_min,
                             r.cfg.fit_t_max);
  double r2 = theorem_rate_l2(r.cfg.m);
  r.check("l2_phi_rate", fit_entry("l2_phi", l2fit, r2, 0.005,
                                   -l2fit.slope >= r2 - 0.005),
          -l2fit.slope);

  auto lifit = fit_power_law(series.t, series.linf_phi, r.cfg.fit_t_min,
                             r.cfg.fit_t_max);
  double ri = theorem_rate_linf(r.cfg.m);
  r.check("linf_phi_rate", fit_entry("linf_phi", lifit, ri, 0.005,
                                     -lifit.slope >= ri - 0.005),
          -lifit.slope);

  auto p2 = phi_lp_energy_check(series, 2, r.cfg.m, r.cfg.eps0, r.cfg.fit_t_min,
                                r.cfg.fit_t_max);
  r.check("Phi_l2_monotone", p2.monotone, p2.worst_increase_rel,
          p2.small_data ? "small data" : "large data (bound not claimed)");
  for (int p : ps) {
    auto rep = phi_lp_energy_check(series, p, r.cfg.m, r.cfg.eps0,
                                   r.cfg.fit_t_min, r.cfg.fit_t_max);
    ordered_json j;
    j["m"] = r.cfg.m;
    j["p"] = p;
    j["exponent"] = rep.fitted_exponent;
    j["stderr"] = rep.fit_stderr;
    j["bound"] = rep.bound;
    j["c_ode_min"] = rep.c_ode_min;
    j["C_prefactor"] = rep.C_prefactor;
    j["pass"] = rep.decay_ok;
    fits.push_back(j);
    r.check("Phi_l" + std::to_string(p) + "_decay", rep.decay_ok,
            -rep.fitted_exponent, "bound " + format_double(rep.bound));
  }

  double mass_worst = 0.0;
  for (double v : series.phi_mass) mass_worst = std::max(mass_worst, std::abs(v));
  r.check("mass_identity", mass_worst < 1e-8, mass_worst);
  r.check("partition_exact", partition_exact, partition_exact ? 1.0 : 0.0);
  r.check("d0_integrand_nonneg", d0_min >= 0.0, d0_min);
  double Cbu3 = interpolation_constant(series, ps.empty() ? 2 : ps.front());
  r.check("interpolation_constant_finite", std::isfinite(Cbu3), Cbu3);

  ordered_json fitdoc;
  fitdoc["manifest"] = r.cfg.manifest_line();
  fitdoc["fits"] = fits;
  write_json(r.artifact("fit_summary.json"), fitdoc);
}

void run_semigroup_kind(Runner& r) {
  SemigroupSuiteConfig sc;
  sc.ms = r.cfg.sg_m;
  sc.dxs = r.cfg.sg_dx;
  sc.n_seeds = r.cfg.sg_seeds;
  sc.master_seed = r.cfg.seed;
  sc.t_end = r.cfg.sg_t_end;
  sc.u_minus = r.cfg.u_minus;
  auto rows = run_semigroup_suite(sc);

  ordered_json arr = ordered_json::array();
  std::map<std::string, double> worst;
  std::map<std::string, bool> ok;
  for (const auto& row : rows) {
    ordered_json j;
    j["check"] = row.check;
    j["m"] = row.m;
    j["dx"] = row.dx;
    j["seed"] = row.seed;
    j["worst_violation"] = row.worst_violation;
    j["pass"] = row.pass;
    arr.push_back(j);
    worst[row.check] = std::max(worst[row.check], row.worst_violation);
    auto it = ok.find(row.check);
    ok[row.check] = (it == ok.end() ? true : it->second) && row.pass;
  }
  ordered_json doc;
  doc["manifest"] = r.cfg.manifest_line();
  doc["results"] = arr;
  write_json(r.artifact("semigroup.json"), doc);
  for (const auto& [name, pass] : ok)
    r.check(name, pass, worst[name]);
}

void run_inequalities_kind(Runner& r) {
  ordered_json arr = ordered_json::array();
  auto record = [&](const VerifierReport& rep, const std::string& params) {
    ordered_json j;
    j["prop"] = rep.prop;
    j["params"] = params;
    j["empirical_constant"] = rep.empirical_constant;
    j["samples"] = rep.samples;
    j["refinement_drift"] = rep.refinement_drift;
    j["pass"] = rep.pass;
    arr.push_back(j);
  };

  bool ab_ok = true;
  double ab_worst_drift = 0.0;
  int tag = 0;
  for (double mu : {1.0, 1.5, 2.0, 3.0}) {
    auto rep = verify_prop_ab(r.cfg.samples, mu, derive_seed(r.cfg.seed, ++tag));
    record(rep, "mu=" + format_double(mu));
    ab_ok = ab_ok && rep.pass;
    ab_worst_drift = std::max(ab_worst_drift, rep.refinement_drift);
  }
  r.check("prop_ab_convergent", ab_ok, ab_worst_drift);

  bool pow_ok = true;
  double pow_worst = 0.0;
  for (double mu : {1.0 / 3.0, 0.5, 1.0}) {
    auto rep = verify_prop_pow(r.cfg.samples, mu, derive_seed(r.cfg.seed, ++tag));
    record(rep, "mu=" + format_double(mu));
    pow_ok = pow_ok && rep.pass;
    pow_worst = std::max(pow_worst, rep.empirical_constant);
  }
  r.check("prop_pow_sharp", pow_ok, pow_worst);

  bool i103_ok = true;
  for (auto gen : {FunctionFamily::Generator::gaussian,
                   FunctionFamily::Generator::ramp,
                   FunctionFamily::Generator::random_spline}) {
    FunctionFamily fam;
    fam.generator = gen;
    fam.count = 24;
    fam.seed = derive_seed(r.cfg.seed, ++tag);
    for (auto [p, m] : std::initializer_list<std::pair<double, double>>{
             {2.0, 1.25}, {4.0, 1.25}, {4.0, 4.0 / 3.0}}) {
      auto rep = verify_interp_103a(fam, p, m);
      record(rep, "gen=" + std::to_string(int(gen)) + " p=" + format_double(p) +
                      " m=" + format_double(m));
      i103_ok = i103_ok && rep.pass;
    }
  }
  r.check("interp_103a_stable", i103_ok, 0.0);

  bool i402_ok = true;
  {
    FunctionFamily fam;
    fam.generator = FunctionFamily::Generator::bump;
    fam.count = 24;
    fam.seed = derive_seed(r.cfg.seed, ++tag);
    for (auto [p, m] : std::initializer_list<std::pair<double, double>>{
             {4.0, 1.25}, {8.0, 1.25}, {4.0, 1.5}}) {
      auto rep = verify_interp_402a(fam, p, m);
      record(rep, "p=" + format_double(p) + " m=" + format_double(m));
      i402_ok = i402_ok && rep.pass;
    }
  }
  r.check("interp_402a_stable", i402_ok, 0.0);

  bool ledger_ok = true;
  int ledger_checked = 0;
  for (int p = 2; p <= 20; ++p) {
    for (double m : {1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 4.0 / 3.0}) {
      auto led = exponent_ledger(double(p), m);
      ledger_ok = ledger_ok && led.consistent;
      ++ledger_checked;
      if (!led.consistent) {
        ordered_json j;
        j["prop"] = "exponent_ledger";
        j["params"] = "p=" + std::to_string(p) + " m=" + format_double(m);
        j["violations"] = led.violations;
        j["pass"] = false;
        arr.push_back(j);
      }
    }
  }
  r.check("exponent_ledger_sweep", ledger_ok, double(ledger_checked));

  {
    auto fast = verify_decay_lemma(
        1.0, [](double t) { return std::pow(1.0 + t, -2.0); },
        [](double t) { return -2.0 * std::pow(1.0 + t, -3.0); }, 500.0);
    ordered_json j;
    j["prop"] = "decay_lemma";
    j["params"] = "f=(1+t)^-2 alpha=1";
    j["empirical_constant"] = fast.fitted_C;
    j["pass"] = fast.pass;
    arr.push_back(j);
    r.check("decay_lemma_fast_case",
            fast.pass && fast.fitted_C <= 1.0 + 1e-12, fast.fitted_C);
  }

  bool gauge_ok = true;
  double gauge_worst = 0.0;
  for (double N : {0.5, 1.0, 7.0}) {
    auto rep = g_gauge_check(N);
    gauge_ok = gauge_ok && rep.pass;
    gauge_worst = std::max(gauge_worst, rep.max_violation);
    ordered_json j;
    j["prop"] = "g_gauge";
    j["params"] = "N=" + format_double(N);
    j["empirical_constant"] = rep.max_violation;
    j["pass"] = rep.pass;
    arr.push_back(j);
  }
  r.check("g_gauge_properties", gauge_ok, gauge_worst);

  ordered_json doc;
  doc["manifest"] = r.cfg.manifest_line();
  doc["reports"] = arr;
  write_json(r.artifact("inequalities.json"), doc);
}

void run_regularized_kind(Runner& r) {
  auto flux = make_flux(r.cfg);
  auto bump = make_bump(r.cfg);
  const double dx = r.cfg.reg_dx;

  double M = 0.0;
  for (int i = 0; i <= 4000; ++i)
    M = std::max(M, bump(-20.0 + 40.0 * i / 4000.0));
  if (!(M > 0.0))
    throw std::invalid_argument("regularized run needs a non-trivial bump");

  // Direct degenerate reference on a window-covering domain with zero
  // far-field data.
  const double D = std::max(8.0, r.cfg.window_half_width + 5.0);
  CauchyProblem direct;
  direct.grid = Grid1D{-D, D, int(std::lround(2.0 * D / dx)), 0.0, 0.0};
  direct.flux = flux;
  direct.m = r.cfg.m;
  FieldState s0;
  s0.u.resize(std::size_t(direct.grid.n_cells));
  for (int i = 0; i < direct.grid.n_cells; ++i)
    s0.u[std::size_t(i)] = std::max(bump(direct.grid.cell_center(i)), 0.0);
  EvolveOptions opt;
  opt.t_end = r.cfg.reg_t_end;
  opt.safety = r.cfg.safety;
  opt.enforce_support_guard = false;
  auto ref = evolve(direct, s0, opt).final_state.u;

  CsvTable t;
  t.manifest = r.cfg.manifest_line();
  t.columns = {"n", "sup_distance", "min_v", "floor"};
  bool decreasing = true, floors_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double n_real : r.cfg.cascade_n) {
    int n = int(std::lround(n_real));
    auto reg = regularized_solve(RegularizedRun{n, M}, flux, r.cfg.m,
                                 [&](double x) { return std::max(bump(x), 0.0); },
                                 r.cfg.reg_t_end, dx, r.cfg.safety);
    double sup = 0.0;
    for (std::size_t i = 0; i < reg.x.size(); ++i) {
      double x = reg.x[i];
      if (std::abs(x) > r.cfg.window_half_width) continue;
      int j = int(std::floor((x - direct.grid.x_left) / dx));
      if (j < 0 || j >= direct.grid.n_cells) continue;
      sup = std::max(sup, std::abs(reg.u[i] - ref[std::size_t(j)]));
    }
    floors_ok = floors_ok && reg.min_v_seen >= (1.0 / n) * (1.0 - 1e-11);
    decreasing = decreasing && sup < prev;
    prev = sup;
    t.rows.push_back({double(n), sup, reg.min_v_seen, 1.0 / n});
  }
  write_csv(r.artifact("cascade.csv"), t);
  r.check("cascade_monotone", decreasing, prev);
  r.check("cascade_floors", floors_ok, floors_ok ? 1.0 : 0.0);
}

void run_report_kind(Runner& r) {
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (auto it = fs::recursive_directory_iterator(r.dir);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file() || it->path().filename() != "summary.json")
      continue;
    if (it->path().parent_path() == r.dir) continue;  // skip our own output
    std::ifstream in(it->path());
    ordered_json j = ordered_json::parse(in);
    ordered_json row;
    row["path"] = fs::relative(it->path(), r.dir).string();
    row["kind"] = j.value("kind", "?");
    row["all_pass"] = j.value("all_pass", false);
    all = all && j.value("all_pass", false);
    rows.push_back(row);
  }
  ordered_json doc;
  doc["manifest"] = r.cfg.manifest_line();
  doc["experiments"] = rows;
  write_json(r.artifact("report.json"), doc);
  r.check("aggregated", all, double(rows.size()),
          std::to_string(rows.size()) + " experiments");
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::ostringstream s;
  s << "kind=" << kind << "\nflux=" << flux
    << "\nflux_coef=" << format_double(flux_coef)
    << "\nflux_poly=" << join_list(flux_poly) << "\nm=" << format_double(m)
    << "\nu_minus=" << format_double(u_minus)
    << "\nprofile_tol=" << format_double(profile_tol)
    << "\nxi_min=" << format_double(xi_min)
    << "\nxi_max=" << format_double(xi_max)
    << "\nknot_spacing=" << format_double(knot_spacing)
    << "\nx_left=" << format_double(x_left)
    << "\nx_right=" << format_double(x_right) << "\ndx=" << format_double(dx)
    << "\nt_end=" << format_double(t_end)
    << "\ncadence=" << format_double(cadence)
    << "\nsafety=" << format_double(safety) << "\nscheme=" << scheme
    << "\nframe=" << frame << "\nbump_shape=" << bump_shape
    << "\nbump_amplitude=" << format_double(bump_amplitude)
    << "\nbump_center=" << format_double(bump_center)
    << "\nbump_width=" << format_double(bump_width)
    << "\nq=" << format_double(q) << "\np_moments=" << join_list(p_moments)
    << "\nfit_t_min=" << format_double(fit_t_min)
    << "\nfit_t_max=" << format_double(fit_t_max)
    << "\nc1_threshold=" << format_double(c1_threshold)
    << "\neps0=" << format_double(eps0)
    << "\nregion_cadence=" << format_double(region_cadence)
    << "\nsg_seeds=" << sg_seeds << "\nsg_t_end=" << format_double(sg_t_end)
    << "\nsg_m=" << join_list(sg_m) << "\nsg_dx=" << join_list(sg_dx)
    << "\nsamples=" << samples << "\ncascade_n=" << join_list(cascade_n)
    << "\nreg_t_end=" << format_double(reg_t_end)
    << "\nreg_dx=" << format_double(reg_dx)
    << "\nwindow_half_width=" << format_double(window_half_width)
    << "\nseed=" << seed << "\n";
  return s.str();
}

uint64_t ExperimentConfig::config_hash() const { return fnv1a64(canonical()); }

std::string ExperimentConfig::manifest_line() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash()));
  return std::string(kVersion) + " kind=" + kind + " config=" + buf;
}

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& f) {
  ExperimentConfig c;
  c.kind = f.get("experiment.kind", c.kind);
  c.seed = uint64_t(f.get_int("experiment.seed", int64_t(c.seed)));
  c.flux = f.get("flux.type", c.flux);
  c.flux_coef = f.get_double("flux.coef", c.flux_coef);
  c.flux_poly = f.get_list("flux.poly", c.flux_poly);
  c.m = f.get_double("profile.m", c.m);
  c.u_minus = f.get_double("profile.u_minus", c.u_minus);
  c.profile_tol = f.get_double("profile.tol", c.profile_tol);
  c.xi_min = f.get_double("profile.xi_min", c.xi_min);
  c.xi_max = f.get_double("profile.xi_max", c.xi_max);
  c.knot_spacing = f.get_double("profile.knot_spacing", c.knot_spacing);
  c.x_left = f.get_double("grid.x_left", c.x_left);
  c.x_right = f.get_double("grid.x_right", c.x_right);
  c.dx = f.get_double("grid.dx", c.dx);
  c.t_end = f.get_double("run.t_end", c.t_end);
  c.cadence = f.get_double("run.cadence", c.cadence);
  c.safety = f.get_double("run.safety", c.safety);
  c.scheme = f.get("run.scheme", c.scheme);
  c.frame = f.get("run.frame", c.frame);
  c.bump_shape = f.get("perturbation.shape", c.bump_shape);
  c.bump_amplitude = f.get_double("perturbation.amplitude", c.bump_amplitude);
  c.bump_center = f.get_double("perturbation.center", c.bump_center);
  c.bump_width = f.get_double("perturbation.width", c.bump_width);
  c.q = f.get_double("analysis.q", c.q);
  c.p_moments = f.get_list("analysis.p_moments", c.p_moments);
  c.fit_t_min = f.get_double("analysis.fit_t_min", c.fit_t_min);
  c.fit_t_max = f.get_double("analysis.fit_t_max", c.fit_t_max);
  c.c1_threshold = f.get_double("analysis.c1", c.c1_threshold);
  c.eps0 = f.get_double("analysis.eps0", c.eps0);
  c.region_cadence = f.get_double("analysis.region_cadence", c.region_cadence);
  c.sg_seeds = int(f.get_int("semigroup.seeds", c.sg_seeds));
  c.sg_t_end = f.get_double("semigroup.t_end", c.sg_t_end);
  c.sg_m = f.get_list("semigroup.m_values", c.sg_m);
  c.sg_dx = f.get_list("semigroup.dx_values", c.sg_dx);
  c.samples = f.get_int("inequalities.samples", c.samples);
  c.cascade_n = f.get_list("regularized.n_values", c.cascade_n);
  c.reg_t_end = f.get_double("regularized.t_end", c.reg_t_end);
  c.reg_dx = f.get_double("regularized.dx", c.reg_dx);
  c.window_half_width = f.get_double("regularized.window", c.window_half_width);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
  return from_config(parse_config_file(path));
}

bool ExperimentSummary::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 const fs::path& out_dir) {
  validate_config(cfg);
  fs::create_directories(out_dir);
  Runner r{cfg, out_dir, {}};
  r.summary.kind = cfg.kind;

  if (cfg.kind == "profile")
    run_profile_kind(r);
  else if (cfg.kind == "evolve")
    run_evolve_kind(r);
  else if (cfg.kind == "decay")
    run_decay_kind(r);
  else if (cfg.kind == "semigroup")
    run_semigroup_kind(r);
  else if (cfg.kind == "inequalities")
    run_inequalities_kind(r);
  else if (cfg.kind == "regularized")
    run_regularized_kind(r);
  else if (cfg.kind == "report")
    run_report_kind(r);

  ordered_json doc;
  doc["manifest"] = cfg.manifest_line();
  doc["kind"] = cfg.kind;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.summary.checks) {
    ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
  }
  doc["checks"] = checks;
  doc["artifacts"] = r.summary.artifacts;
  doc["all_pass"] = r.summary.all_pass();
  write_json(out_dir / "summary.json", doc);
  return r.summary;
}

namespace {

void diff_json(const std::string& file, const ordered_json& a,
               const ordered_json& b, const std::string& prefix, double tol,
               DiffReport& rep) {
  if (a.is_number() && b.is_number()) {
    double x = a.get<double>(), y = b.get<double>();
    if (!(std::abs(x - y) <= tol) && !(std::isnan(x) && std::isnan(y)))
      rep.drifts.push_back({file, prefix, 0, x, y, tol});
    return;
  }
  if (a.type() != b.type()) {
    rep.schema_errors.push_back(file + ": type mismatch at " + prefix);
    return;
  }
  if (a.is_object()) {
    for (auto& [key, val] : a.items()) {
      if (!b.contains(key)) {
        rep.schema_errors.push_back(file + ": missing key " + prefix + "/" + key);
        continue;
      }
      diff_json(file, val, b.at(key), prefix + "/" + key, tol, rep);
    }
    for (auto& [key, val] : b.items())
      if (!a.contains(key))
        rep.schema_errors.push_back(file + ": extra key " + prefix + "/" + key);
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      rep.schema_errors.push_back(file + ": array length mismatch at " + prefix);
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      diff_json(file, a[i], b[i], prefix + "[" + std::to_string(i) + "]", tol,
                rep);
  } else if (a != b) {
    rep.drifts.push_back({file, prefix, 0, 0.0, 0.0, tol});
  }
}

}  // namespace

DiffReport compare_baseline(const fs::path& current, const fs::path& baseline,
                            double tolerance,
                            const std::map<std::string, double>& column_tol) {
  DiffReport rep;
  if (!fs::exists(baseline)) {
    rep.schema_errors.push_back("baseline directory missing: " +
                                baseline.string());
    return rep;
  }
  for (auto it = fs::recursive_directory_iterator(current);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const fs::path rel = fs::relative(it->path(), current);
    const fs::path other = baseline / rel;
    const std::string ext = it->path().extension().string();
    if (ext != ".csv" && ext != ".json") continue;
    if (!fs::exists(other)) {
      rep.schema_errors.push_back(rel.string() + ": missing from baseline");
      continue;
    }
    if (ext == ".csv") {
      CsvTable a = read_csv(it->path());
      CsvTable b = read_csv(other);
      if (a.columns != b.columns) {
        rep.schema_errors.push_back(rel.string() + ": column schema mismatch");
        continue;
      }
      if (a.rows.size() != b.rows.size()) {
        rep.schema_errors.push_back(rel.string() + ": row count mismatch");
        continue;
      }
      for (std::size_t i = 0; i < a.rows.size(); ++i) {
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
          auto tl = column_tol.find(a.columns[c]);
          double tol = tl == column_tol.end() ? tolerance : tl->second;
          double x = a.rows[i][c], y = b.rows[i][c];
          if (!(std::abs(x - y) <= tol))
            rep.drifts.push_back(
                {rel.string(), a.columns[c], long(i), x, y, tol});
        }
      }
    } else {
      std::ifstream fa(it->path()), fb(other);
      ordered_json a = ordered_json::parse(fa);
      ordered_json b = ordered_json::parse(fb);
      diff_json(rel.string(), a, b, "", tolerance, rep);
    }
  }
  for (auto it = fs::recursive_directory_iterator(baseline);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const std::string ext = it->path().extension().string();
    if (ext != ".csv" && ext != ".json") continue;
    const fs::path rel = fs::relative(it->path(), baseline);
    if (!fs::exists(current / rel))
      rep.schema_errors.push_back(rel.string() + ": missing from current run");
  }
  return rep;
}

}  // namespace pmshock
