#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/bounds.hpp"

namespace metapac {

// Sampling distribution for Monte-Carlo lemma checks. Values are in [0,1] so
// the sub-Gaussian parameter is always 0.5.
struct Dist {
  enum class Kind { Uniform01, Bernoulli, Beta } kind = Kind::Uniform01;
  double a = 0.5;  // Bernoulli p / Beta alpha
  double b = 1.0;  // Beta beta

  double mean() const;
  double draw(class RngStream& rng) const;
  void validate() const;
};

struct TrialConfig {
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  std::int64_t inner = 20;  // per-trial sample count (the lemma's m or n)
  Dist dist;
  double tolerance = 0.01;
  // Exact enumeration instead of sampling; Bernoulli only. Exact verdicts use
  // tolerance 1e-10 and zero statistical slack.
  bool exact = false;

  void validate() const;
};

struct LemmaVerdict {
  std::string lemma;
  double empirical = 0.0;
  double certified = 0.0;
  double mc_sd = 0.0;      // standard error of the empirical mean (0 when exact)
  double slack_sds = 0.0;  // (certified - empirical) / mc_sd headroom
  bool exact = false;
  bool pass = false;
};

enum class SubGaussVariant { Full, Sqrt };

// E[e^{lambda m Delta^2}] <= 1/(1-2 lambda sigma^2) (Full) or its square-root
// form (Sqrt), Delta = E[g] - mean of m iid draws, sigma = 0.5.
LemmaVerdict verify_subgauss_sq(const TrialConfig& cfg, double lambda, SubGaussVariant variant);

// E[e^{n kl(Lhat_n, L)}] <= 2 sqrt(n) for n > 8.
LemmaVerdict verify_maurer(const TrialConfig& cfg, std::int64_t n);

// E[e^{n D_gamma(Lhat_n || L)}] <= 1.
LemmaVerdict verify_dgamma(const TrialConfig& cfg, std::int64_t n, double gamma);

// Donsker-Varadhan on a finite support: E_Q[phi] <= KL(Q||P) + log E_P[e^phi],
// with equality at the Gibbs measure Q* proportional to P e^phi.
struct DonskerResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gibbs_gap = 0.0;  // rhs - lhs when Q is replaced by Q*
};
DonskerResult verify_donsker_varadhan(const std::vector<double>& p, const std::vector<double>& q,
                                      const std::vector<double>& phi);

// Randomized Donsker-Varadhan sweep over `trials` random finite cases of the
// given support size. empirical is the worst deviation seen (inequality
// violation lhs - rhs, or Gibbs equality gap), certified is the 1e-10 gap
// tolerance; pass means every case held.
LemmaVerdict verify_donsker_random(std::int64_t trials, std::uint64_t seed, std::int64_t support);

// Union-of-events lemma: events f_i(X_i) >= a_i each calibrated to probability
// delta_i; the joint sum event has probability at most sum(delta_i).
LemmaVerdict verify_union_sum(const TrialConfig& cfg, const std::vector<double>& per_event_deltas);

// Closed-form certified constants consumed by the bound suite.
// SubGaussSq1/SubGaussSqHalf take (lambda, sigma); Maurer2SqrtN takes n (> 8);
// DGammaOne is the constant 1; SubGaussMgf takes (theta, sigma, l).
LogMomentBound log_moment_constant(LogMomentBound::Lemma lemma, double lambda = 0.0,
                                   double sigma = 0.5, std::int64_t n = 0);

}  // namespace metapac
