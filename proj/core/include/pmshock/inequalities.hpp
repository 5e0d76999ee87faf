#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pmshock {

// Sampled test function with analytic derivative values.
struct SampledFunction {
  std::vector<double> x, w, wx;
  double dx = 0.0;
};

// Deterministic generator families for the functional-inequality verifiers.
// Parameters are drawn from the seed independently of the grid resolution,
// so the same functions can be re-sampled at double resolution.
struct FunctionFamily {
  enum class Generator { gaussian, bump, ramp, random_spline };
  Generator generator = Generator::gaussian;
  int count = 32;
  double half_width = 12.0;
  int n_points = 2001;
  uint64_t seed = 1;

  std::vector<SampledFunction> generate() const { return generate(n_points); }
  std::vector<SampledFunction> generate(int points) const;
};

struct VerifierReport {
  std::string prop;
  double empirical_constant = 0.0;
  long samples = 0;
  double refinement_drift = 0.0;  // relative change under refinement
  bool pass = false;
};

// |a-b|^{mu+1} / ((|a|^{mu-1}a - |b|^{mu-1}b)(a-b)), the pointwise ratio of
// the coercivity inequality; returns 0 for a == b.
double ratio_power_coercivity(double a, double b, double mu);

// sup of the ratio over random pairs; drift compares the sup after n/10
// samples against the full run (nested prefixes of one stream).
VerifierReport verify_prop_ab(long n_samples, double mu, uint64_t seed);

// sup |a^mu - b^mu| / |a-b|^mu over non-negative pairs; sharp constant 1.
VerifierReport verify_prop_pow(long n_samples, double mu, uint64_t seed);

// int |w|^{p-1} w_x^2 / ( ||w||_{(2-m)/(m-1)}^{2-m} int |w|^{p-2}|w_x|^{m+1} ).
double ratio_interp_weighted(const SampledFunction& f, double p, double m);
VerifierReport verify_interp_103a(const FunctionFamily& family, double p, double m);

// ( ||w||_p^p )^nu / int |w|^{p-2} |w_x|^{m+1} with nu = 1 + (3m+1)/(p-2);
// requires ||w||_2 <= 1.
double ratio_interp_moment(const SampledFunction& f, double p, double m);
VerifierReport verify_interp_402a(const FunctionFamily& family, double p, double m);

struct ExponentLedger {
  double p = 0.0, m = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
  double nu_statement = 0.0, nu_proof = 0.0;
  double residual_kap2 = 0.0, residual_kap3 = 0.0;
  bool consistent = false;
  std::vector<std::string> violations;  // reported verbatim, never corrected
};
// Solves the two linear exponent equations and checks the stated ranges.
ExponentLedger exponent_ledger(double p, double m);

struct DecayLemmaReport {
  bool hypotheses_ok = false;
  std::string hypothesis_violation;
  double fitted_C = 0.0;  // smallest C with f <= C (1+t)^{-alpha/2}
  bool pass = false;
};
// f >= 0 with f' <= (1+t)^{-alpha} (checked on a sample grid) decays at
// least like (1+t)^{-alpha/2}; the report fits the constant.
DecayLemmaReport verify_decay_lemma(double alpha,
                                    const std::function<double(double)>& f,
                                    const std::function<double(double)>& fprime,
                                    double horizon, int n_grid = 20001);

struct GaugeReport {
  double max_violation = 0.0;
  bool pass = false;
};
// G(r) = (N/3) r (4 - r) on [0, 1]: 0 <= G <= N, (2/3)N <= G' <= (4/3)N,
// G'' = -(2/3)N, |G''/G'| <= 1, and (G''/G')' <= -1/4.
GaugeReport g_gauge_check(double N, int n_grid = 1001);

}  // namespace pmshock
