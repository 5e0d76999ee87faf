#include "pmshock/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pmshock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double trapz(const std::vector<double>& v, double dx) {
  if (v.size() < 2) return 0.0;
  long double acc = 0.5L * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
  return double(acc) * dx;
}

struct GeneratorParams {
  // up to 6 components: amplitude, center, scale
  std::vector<double> a, c, s;
};

GeneratorParams draw_params(FunctionFamily::Generator gen, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.3, 2.0);
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> sgn(-1.0, 1.0);
  GeneratorParams p;
  switch (gen) {
    case FunctionFamily::Generator::gaussian: {
      std::uniform_real_distribution<double> scale(0.4, 1.8);
      p.a = {amp(rng)};
      p.c = {center(rng)};
      p.s = {scale(rng)};
      break;
    }
    case FunctionFamily::Generator::bump: {
      std::uniform_real_distribution<double> radius(2.0, 8.0);
      p.a = {amp(rng)};
      p.c = {0.0};
      p.s = {radius(rng)};
      break;
    }
    case FunctionFamily::Generator::ramp: {
      std::uniform_real_distribution<double> halfw(1.0, 3.0);
      std::uniform_real_distribution<double> steep(0.3, 0.5);
      p.a = {amp(rng)};
      p.c = {halfw(rng)};
      p.s = {steep(rng)};
      break;
    }
    case FunctionFamily::Generator::random_spline: {
      std::uniform_real_distribution<double> scale(0.4, 1.5);
      std::uniform_int_distribution<int> n_comp(3, 6);
      int k = n_comp(rng);
      for (int j = 0; j < k; ++j) {
        p.a.push_back(sgn(rng));
        p.c.push_back(center(rng));
        p.s.push_back(scale(rng));
      }
      break;
    }
  }
  return p;
}

void eval_generator(FunctionFamily::Generator gen, const GeneratorParams& p,
                    double x, double& w, double& wx) {
  w = 0.0;
  wx = 0.0;
  switch (gen) {
    case FunctionFamily::Generator::gaussian:
    case FunctionFamily::Generator::random_spline:
      for (std::size_t j = 0; j < p.a.size(); ++j) {
        double z = (x - p.c[j]) / p.s[j];
        double g = p.a[j] * std::exp(-z * z);
        w += g;
        wx += g * (-2.0 * z / p.s[j]);
      }
      break;
    case FunctionFamily::Generator::bump: {
      double sc = x / p.s[0];
      if (std::abs(sc) >= 1.0 - 1e-8) return;
      double den = 1.0 - sc * sc;
      w = p.a[0] * std::exp(-1.0 / den);
      wx = w * (-2.0 * sc / p.s[0]) / (den * den);
      break;
    }
    case FunctionFamily::Generator::ramp: {
      double zp = (x + p.c[0]) / p.s[0];
      double zm = (x - p.c[0]) / p.s[0];
      w = 0.5 * p.a[0] * (std::tanh(zp) - std::tanh(zm));
      auto sech2 = [](double z) {
        double c = std::cosh(z);
        return 1.0 / (c * c);
      };
      wx = 0.5 * p.a[0] / p.s[0] * (sech2(zp) - sech2(zm));
      break;
    }
  }
}

}  // namespace

std::vector<SampledFunction> FunctionFamily::generate(int points) const {
  if (points < 16) throw std::invalid_argument("family grid too coarse");
  std::mt19937_64 rng(seed);
  std::vector<SampledFunction> out;
  out.reserve(std::size_t(count));
  for (int k = 0; k < count; ++k) {
    GeneratorParams p = draw_params(generator, rng);
    SampledFunction f;
    f.dx = 2.0 * half_width / double(points - 1);
    f.x.resize(std::size_t(points));
    f.w.resize(std::size_t(points));
    f.wx.resize(std::size_t(points));
    for (int i = 0; i < points; ++i) {
      double x = -half_width + f.dx * double(i);
      f.x[std::size_t(i)] = x;
      eval_generator(generator, p, x, f.w[std::size_t(i)], f.wx[std::size_t(i)]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

double ratio_power_coercivity(double a, double b, double mu) {
  if (mu < 1.0) throw std::invalid_argument("ratio needs mu >= 1");
  if (a == b) return 0.0;
  double num = std::pow(std::abs(a - b), mu + 1.0);
  double den = (std::pow(std::abs(a), mu - 1.0) * a -
                std::pow(std::abs(b), mu - 1.0) * b) *
               (a - b);
  if (den == 0.0) return 0.0;
  return num / den;
}

VerifierReport verify_prop_ab(long n_samples, double mu, uint64_t seed) {
  if (mu < 1.0) throw std::invalid_argument("verify_prop_ab needs mu >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  VerifierReport rep;
  rep.prop = "prop_ab";
  rep.samples = n_samples;
  double sup = 0.0, sup_prefix = 0.0;
  const long prefix = std::max(1L, n_samples / 10);
  for (long i = 0; i < n_samples; ++i) {
    sup = std::max(sup, ratio_power_coercivity(val(rng), val(rng), mu));
    if (i + 1 == prefix) sup_prefix = sup;
  }
  rep.empirical_constant = sup;
  rep.refinement_drift = sup > 0.0 ? (sup - sup_prefix) / sup : 0.0;
  rep.pass = std::isfinite(sup) && rep.refinement_drift < 0.01;
  return rep;
}

VerifierReport verify_prop_pow(long n_samples, double mu, uint64_t seed) {
  if (!(mu > 0.0 && mu <= 1.0))
    throw std::invalid_argument("verify_prop_pow needs 0 < mu <= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(0.0, 2.0);
  VerifierReport rep;
  rep.prop = "prop_pow";
  rep.samples = n_samples;
  double sup = 0.0, sup_prefix = 0.0;
  const long prefix = std::max(1L, n_samples / 10);
  auto ratio = [&](double a, double b) {
    if (a == b) return 0.0;
    return std::abs(std::pow(a, mu) - std::pow(b, mu)) /
           std::pow(std::abs(a - b), mu);
  };
  sup = std::max(sup, ratio(1.0, 0.0));  // the extremal boundary pair
  for (long i = 0; i < n_samples; ++i) {
    double a = val(rng), b = val(rng);
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("negative sample");
    sup = std::max(sup, ratio(a, b));
    if (i + 1 == prefix) sup_prefix = sup;
  }
  rep.empirical_constant = sup;
  rep.refinement_drift = sup > 0.0 ? (sup - sup_prefix) / sup : 0.0;
  rep.pass = sup <= 1.0 + 1e-12;
  return rep;
}

double ratio_interp_weighted(const SampledFunction& f, double p, double m) {
  const std::size_t n = f.w.size();
  std::vector<double> num(n), den_int(n), norm_pow(n);
  const double r = (2.0 - m) / (m - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double aw = std::abs(f.w[i]);
    double awx = std::abs(f.wx[i]);
    num[i] = std::pow(aw, p - 1.0) * f.wx[i] * f.wx[i];
    den_int[i] = std::pow(aw, p - 2.0) * std::pow(awx, m + 1.0);
    norm_pow[i] = std::pow(aw, r);
  }
  double N = trapz(num, f.dx);
  double D1 = std::pow(trapz(norm_pow, f.dx), (2.0 - m) / r);  // ||w||_r^{2-m}
  double D2 = trapz(den_int, f.dx);
  double D = D1 * D2;
  if (D == 0.0) return N == 0.0 ? 0.0 : kInf;
  return N / D;
}

VerifierReport verify_interp_103a(const FunctionFamily& family, double p,
                                  double m) {
  if (!(p >= 2.0)) throw std::invalid_argument("need p >= 2");
  if (!(m > 1.0 && m <= 4.0 / 3.0 + 1e-12))
    throw std::invalid_argument("need 1 < m <= 4/3");
  VerifierReport rep;
  rep.prop = "interp_103a";
  auto sup_over = [&](int points) {
    double sup = 0.0;
    for (const auto& f : family.generate(points))
      sup = std::max(sup, ratio_interp_weighted(f, p, m));
    return sup;
  };
  double sup1 = sup_over(family.n_points);
  double sup2 = sup_over(2 * family.n_points - 1);
  rep.samples = family.count;
  rep.empirical_constant = sup2;
  rep.refinement_drift = sup2 > 0.0 ? std::abs(sup2 - sup1) / sup2 : 0.0;
  rep.pass = std::isfinite(sup2) && rep.refinement_drift < 0.02;
  return rep;
}

double ratio_interp_moment(const SampledFunction& f, double p, double m) {
  const std::size_t n = f.w.size();
  std::vector<double> l2(n), lp(n), den(n);
  for (std::size_t i = 0; i < n; ++i) {
    double aw = std::abs(f.w[i]);
    l2[i] = aw * aw;
    lp[i] = std::pow(aw, p);
    den[i] = std::pow(aw, p - 2.0) * std::pow(std::abs(f.wx[i]), m + 1.0);
  }
  if (trapz(l2, f.dx) > 1.0 + 1e-9)
    throw std::invalid_argument("ratio_interp_moment requires ||w||_2 <= 1");
  const double nu = 1.0 + (3.0 * m + 1.0) / (p - 2.0);
  double N = std::pow(trapz(lp, f.dx), nu);
  double D = trapz(den, f.dx);
  if (D == 0.0) return N == 0.0 ? 0.0 : kInf;
  return N / D;
}

VerifierReport verify_interp_402a(const FunctionFamily& family, double p,
                                  double m) {
  if (!(p > 2.0)) throw std::invalid_argument("need p > 2");
  if (!(m > 1.0 && m < 2.0)) throw std::invalid_argument("need 1 < m < 2");
  VerifierReport rep;
  rep.prop = "interp_402a";
  auto sup_over = [&](int points) {
    double sup = 0.0;
    for (auto f : family.generate(points)) {
      std::vector<double> l2(f.w.size());
      for (std::size_t i = 0; i < f.w.size(); ++i) l2[i] = f.w[i] * f.w[i];
      double norm = std::sqrt(trapz(l2, f.dx));
      if (norm > 0.0)
        for (std::size_t i = 0; i < f.w.size(); ++i) {
          f.w[i] /= norm;
          f.wx[i] /= norm;
        }
      sup = std::max(sup, ratio_interp_moment(f, p, m));
    }
    return sup;
  };
  double sup1 = sup_over(family.n_points);
  double sup2 = sup_over(2 * family.n_points - 1);
  rep.samples = family.count;
  rep.empirical_constant = sup2;
  rep.refinement_drift = sup2 > 0.0 ? std::abs(sup2 - sup1) / sup2 : 0.0;
  rep.pass = std::isfinite(sup2) && rep.refinement_drift < 0.02;
  return rep;
}

ExponentLedger exponent_ledger(double p, double m) {
  if (!(p >= 2.0)) throw std::invalid_argument("need p >= 2");
  if (!(m > 1.0 && m <= 4.0 / 3.0 + 1e-12))
    throw std::invalid_argument("need 1 < m <= 4/3");
  ExponentLedger led;
  led.p = p;
  led.m = m;
  led.kappa1 = p - 1.0 + 2.0 / (m - 1.0);
  led.nu_statement = p > 2.0 ? 1.0 + (3.0 * m + 1.0) / (p - 2.0) : kInf;
  led.nu_proof = (m + p - 1.0) / (m * p + m + p - 1.0);

  const double k1 = led.kappa1;
  const double mp1 = m + 1.0;
  const double r = (2.0 - m) / (m - 1.0);

  // kappa2 (1/(m+1) - 1) + (1 - kappa2) (m+p-1)/(r (m+1)) = (m+p-1)/(2 k1 (m+1))
  {
    const double A = (1.0 / mp1 - 1.0) - (m + p - 1.0) / (r * mp1);
    const double rhs = (m + p - 1.0) / (2.0 * k1 * mp1) - (m + p - 1.0) / (r * mp1);
    led.kappa2 = rhs / A;
    led.residual_kap2 =
        std::abs(led.kappa2 * (1.0 / mp1 - 1.0) +
                 (1.0 - led.kappa2) * (m + p - 1.0) / (r * mp1) -
                 (m + p - 1.0) / (2.0 * k1 * mp1));
  }

  // kappa3 / r + (k1 - kappa3)/(2 k1) = 1
  {
    const double A = 1.0 / r - 1.0 / (2.0 * k1);
    led.kappa3 = 0.5 / A;
    led.residual_kap3 =
        std::abs(led.kappa3 / r + (k1 - led.kappa3) / (2.0 * k1) - 1.0);
  }

  auto flag = [&](const std::string& what) { led.violations.push_back(what); };
  if (!(led.kappa1 > r)) flag("kappa1 <= (2-m)/(m-1)");
  if (!(r >= 2.0 - 1e-12)) flag("(2-m)/(m-1) < 2");
  if (!(led.kappa2 > 0.0 && led.kappa2 < 1.0)) flag("kappa2 outside (0,1)");
  if (!(led.kappa3 > 0.0 && led.kappa3 < led.kappa1))
    flag("kappa3 outside (0,kappa1)");
  if (!(led.residual_kap2 < 1e-12)) flag("kappa2 equation residual > 1e-12");
  if (!(led.residual_kap3 < 1e-12)) flag("kappa3 equation residual > 1e-12");
  led.consistent = led.violations.empty();
  return led;
}

DecayLemmaReport verify_decay_lemma(double alpha,
                                    const std::function<double(double)>& f,
                                    const std::function<double(double)>& fprime,
                                    double horizon, int n_grid) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("need 0 < alpha <= 2");
  if (!(horizon > 0.0)) throw std::invalid_argument("need a positive horizon");
  DecayLemmaReport rep;
  rep.hypotheses_ok = true;
  const double dt = horizon / double(n_grid - 1);
  double C = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    double t = dt * double(i);
    double v = f(t);
    if (v < 0.0) {
      rep.hypotheses_ok = false;
      rep.hypothesis_violation = "f < 0";
      break;
    }
    double slope = fprime ? fprime(t) : (f(t + 1e-6) - f(std::max(t - 1e-6, 0.0))) /
                                            (t < 1e-6 ? 1e-6 : 2e-6);
    if (slope > std::pow(1.0 + t, -alpha) * (1.0 + 1e-9) + 1e-12) {
      rep.hypotheses_ok = false;
      rep.hypothesis_violation = "f' exceeds (1+t)^{-alpha}";
      break;
    }
    C = std::max(C, v * std::pow(1.0 + t, 0.5 * alpha));
  }
  rep.fitted_C = C;
  rep.pass = rep.hypotheses_ok && std::isfinite(C);
  return rep;
}

GaugeReport g_gauge_check(double N, int n_grid) {
  if (!(N > 0.0)) throw std::invalid_argument("need N > 0");
  GaugeReport rep;
  double worst = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    double r = double(i) / double(n_grid - 1);
    double G = N / 3.0 * r * (4.0 - r);
    double Gp = N / 3.0 * (4.0 - 2.0 * r);
    double Gpp = -2.0 / 3.0 * N;
    worst = std::max({worst, -G, G - N});
    worst = std::max({worst, 2.0 / 3.0 * N - Gp, Gp - 4.0 / 3.0 * N});
    worst = std::max(worst, std::abs(Gpp + 2.0 / 3.0 * N));
    worst = std::max(worst, std::abs(Gpp / Gp) - 1.0);
    // (G''/G')' = -1/(2-r)^2, required <= -1/4 on [0,1].
    double ratio_deriv = -1.0 / ((2.0 - r) * (2.0 - r));
    worst = std::max(worst, ratio_deriv + 0.25);
  }
  rep.max_violation = std::max(worst, 0.0);
  rep.pass = rep.max_violation <= 1e-12 * std::max(1.0, N);
  return rep;
}

}  // namespace pmshock
