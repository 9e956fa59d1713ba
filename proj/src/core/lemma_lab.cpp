#include "core/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/divergence.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"

namespace metapac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Marsaglia-Tsang gamma draw; the alpha < 1 case is boosted by U^(1/alpha).
double draw_gamma(double alpha, RngStream& rng) {
  if (alpha < 1.0) {
    const double u = std::max(rng.uniform(), 1e-300);
    return draw_gamma(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double log_binom(std::int64_t n, std::int64_t j) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(j) + 1.0) -
         std::lgamma(static_cast<double>(n - j) + 1.0);
}

struct McAccumulator {
  double sum = 0.0, sum_sq = 0.0;
  std::int64_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double sd_of_mean() const {
    if (count < 2) return 0.0;
    const double c = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
    return std::sqrt(var / c);
  }
};

LemmaVerdict finish(const std::string& lemma, double empirical, double certified, double mc_sd,
                    bool exact, double tolerance) {
  LemmaVerdict v;
  v.lemma = lemma;
  v.empirical = empirical;
  v.certified = certified;
  v.mc_sd = mc_sd;
  v.exact = exact;
  v.slack_sds = mc_sd > 0.0 ? (certified - empirical) / mc_sd
                            : (empirical < certified ? kInf : 0.0);
  const double tol = exact ? 1e-10 : tolerance;
  v.pass = empirical <= certified * (1.0 + tol) ||
           (!exact && empirical <= certified + 3.0 * mc_sd);
  return v;
}

// Exact expectation of h(j/n) over Binomial(n, p) outcomes.
template <typename H>
double binomial_expectation(std::int64_t n, double p, H&& h) {
  double acc = 0.0;
  for (std::int64_t j = 0; j <= n; ++j) {
    double logw = log_binom(n, j);
    if (j > 0) logw += static_cast<double>(j) * std::log(p);
    if (j < n) logw += static_cast<double>(n - j) * std::log(1.0 - p);
    acc += std::exp(logw) * h(static_cast<double>(j) / static_cast<double>(n));
  }
  return acc;
}

void require_exact_supported(const TrialConfig& cfg) {
  if (cfg.dist.kind != Dist::Kind::Bernoulli)
    throw DomainError("exact enumeration is only available for Bernoulli draws");
}

}  // namespace

double Dist::mean() const {
  switch (kind) {
    case Kind::Uniform01:
      return 0.5;
    case Kind::Bernoulli:
      return a;
    case Kind::Beta:
      return a / (a + b);
  }
  return 0.5;
}

double Dist::draw(RngStream& rng) const {
  switch (kind) {
    case Kind::Uniform01:
      return rng.uniform();
    case Kind::Bernoulli:
      return rng.uniform() < a ? 1.0 : 0.0;
    case Kind::Beta: {
      const double ga = draw_gamma(a, rng);
      const double gb = draw_gamma(b, rng);
      return ga / (ga + gb);
    }
  }
  return 0.0;
}

void Dist::validate() const {
  if (kind == Kind::Bernoulli && !(a >= 0.0 && a <= 1.0))
    throw DomainError("Bernoulli p must lie in [0,1]");
  if (kind == Kind::Beta && !(a > 0.0 && b > 0.0))
    throw DomainError("Beta parameters must be > 0");
}

void TrialConfig::validate() const {
  if (trials < 1) throw DomainError("TrialConfig.trials must be >= 1");
  if (inner < 1) throw DomainError("TrialConfig.inner must be >= 1");
  if (!(tolerance >= 0.0)) throw DomainError("TrialConfig.tolerance must be >= 0");
  dist.validate();
  if (exact) require_exact_supported(*this);
}

LemmaVerdict verify_subgauss_sq(const TrialConfig& cfg, double lambda, SubGaussVariant variant) {
  cfg.validate();
  const double sigma_sq = 0.25;  // losses in [0,1]
  if (!(lambda < 1.0 / (2.0 * sigma_sq)))
    throw DomainError("subgauss lemma requires lambda < 1/(2 sigma^2) = 2");
  const std::string name = variant == SubGaussVariant::Full ? "subgauss-full" : "subgauss-sqrt";
  const double certified = variant == SubGaussVariant::Full
                               ? 1.0 / (1.0 - 2.0 * lambda * sigma_sq)
                               : 1.0 / std::sqrt(1.0 - 2.0 * lambda * sigma_sq);
  const double mu = cfg.dist.mean();
  const double md = static_cast<double>(cfg.inner);

  if (cfg.exact) {
    const double e = binomial_expectation(cfg.inner, cfg.dist.a, [&](double lhat) {
      const double delta = mu - lhat;
      return std::exp(lambda * md * delta * delta);
    });
    return finish(name, e, certified, 0.0, true, cfg.tolerance);
  }

  McAccumulator acc;
  for (std::int64_t t = 0; t < cfg.trials; ++t) {
    RngStream rng(cfg.seed, stream_id({0x5347ULL, static_cast<std::uint64_t>(t)}));
    double s = 0.0;
    for (std::int64_t k = 0; k < cfg.inner; ++k) s += cfg.dist.draw(rng);
    const double delta = mu - s / md;
    acc.add(std::exp(lambda * md * delta * delta));
  }
  return finish(name, acc.mean(), certified, acc.sd_of_mean(), false, cfg.tolerance);
}

LemmaVerdict verify_maurer(const TrialConfig& cfg, std::int64_t n) {
  if (n <= 8) throw DomainError("maurer lemma requires n > 8");
  TrialConfig c = cfg;
  c.inner = n;
  c.validate();
  const double mu = c.dist.mean();
  if (!(mu > 0.0 && mu < 1.0))
    throw DomainError("maurer check needs an interior mean (kl would be infinite)");
  const double nd = static_cast<double>(n);
  const double certified = 2.0 * std::sqrt(nd);

  if (c.exact) {
    const double e = binomial_expectation(n, c.dist.a, [&](double lhat) {
      return std::exp(nd * kl_bernoulli(lhat, mu));
    });
    return finish("maurer", e, certified, 0.0, true, c.tolerance);
  }

  McAccumulator acc;
  for (std::int64_t t = 0; t < c.trials; ++t) {
    RngStream rng(c.seed, stream_id({0x4d52ULL, static_cast<std::uint64_t>(t)}));
    double s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) s += c.dist.draw(rng);
    acc.add(std::exp(nd * kl_bernoulli(s / nd, mu)));
  }
  return finish("maurer", acc.mean(), certified, acc.sd_of_mean(), false, c.tolerance);
}

LemmaVerdict verify_dgamma(const TrialConfig& cfg, std::int64_t n, double gamma) {
  TrialConfig c = cfg;
  c.inner = n;
  c.validate();
  const double mu = c.dist.mean();
  const double nd = static_cast<double>(n);

  if (c.exact) {
    const double e = binomial_expectation(n, c.dist.a, [&](double lhat) {
      return std::exp(nd * d_gamma(lhat, mu, gamma));
    });
    return finish("dgamma", e, 1.0, 0.0, true, c.tolerance);
  }

  McAccumulator acc;
  for (std::int64_t t = 0; t < c.trials; ++t) {
    RngStream rng(c.seed, stream_id({0x4447ULL, static_cast<std::uint64_t>(t)}));
    double s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) s += c.dist.draw(rng);
    acc.add(std::exp(nd * d_gamma(s / nd, mu, gamma)));
  }
  return finish("dgamma", acc.mean(), 1.0, acc.sd_of_mean(), false, c.tolerance);
}

DonskerResult verify_donsker_varadhan(const std::vector<double>& p, const std::vector<double>& q,
                                      const std::vector<double>& phi) {
  if (p.empty() || p.size() != q.size() || p.size() != phi.size())
    throw DomainError("donsker check requires equal-length nonempty p, q, phi");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw DomainError("probabilities must be >= 0");
    if (q[i] > 0.0 && p[i] <= 0.0)
      throw DomainError("absolute continuity violated: Q > 0 where P = 0");
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw DomainError("p and q must each sum to 1");

  const double phi_max = *std::max_element(phi.begin(), phi.end());
  auto log_mgf = [&](const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::exp(phi[i] - phi_max);
    return phi_max + std::log(s);
  };
  auto kl_discrete = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > 0.0) s += a[i] * std::log(a[i] / b[i]);
    return s;
  };

  DonskerResult r;
  r.lhs = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) r.lhs += q[i] * phi[i];
  const double log_z = log_mgf(p);
  r.rhs = kl_discrete(q, p) + log_z;

  // Gibbs measure q*_i = p_i e^{phi_i} / Z attains equality.
  std::vector<double> gibbs(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    gibbs[i] = p[i] * std::exp(phi[i] - log_z);
  double lhs_g = 0.0;
  for (std::size_t i = 0; i < gibbs.size(); ++i) lhs_g += gibbs[i] * phi[i];
  r.gibbs_gap = kl_discrete(gibbs, p) + log_z - lhs_g;
  return r;
}

LemmaVerdict verify_donsker_random(std::int64_t trials, std::uint64_t seed,
                                   std::int64_t support) {
  if (trials < 1 || support < 1) throw DomainError("donsker sweep needs trials, support >= 1");
  double worst = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    RngStream rng(seed, stream_id({0x4456ULL, static_cast<std::uint64_t>(t)}));
    std::vector<double> p(static_cast<std::size_t>(support)),
        q(static_cast<std::size_t>(support)), phi(static_cast<std::size_t>(support));
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = 0.05 + rng.uniform();  // bounded away from zero for absolute continuity
      q[i] = 0.05 + rng.uniform();
      phi[i] = 4.0 * (rng.uniform() - 0.5);
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const DonskerResult r = verify_donsker_varadhan(p, q, phi);
    worst = std::max(worst, r.lhs - r.rhs);
    worst = std::max(worst, std::abs(r.gibbs_gap));
  }
  LemmaVerdict v;
  v.lemma = "donsker";
  v.empirical = worst;
  v.certified = 1e-10;
  v.mc_sd = 0.0;
  v.slack_sds = worst < 1e-10 ? kInf : 0.0;
  v.exact = true;
  v.pass = worst <= 1e-10;
  return v;
}

LemmaVerdict verify_union_sum(const TrialConfig& cfg,
                              const std::vector<double>& per_event_deltas) {
  cfg.validate();
  if (per_event_deltas.empty()) throw DomainError("union-sum check requires at least one event");
  for (double d : per_event_deltas)
    if (!(d >= 0.0 && d < 1.0)) throw DomainError("per-event deltas must lie in [0,1)");

  double a_sum = 0.0, cert = 0.0;
  for (double d : per_event_deltas) {
    a_sum += 1.0 - d;  // P[U >= 1-d] = d for U uniform on [0,1)
    cert += d;
  }

  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < cfg.trials; ++t) {
    RngStream rng(cfg.seed, stream_id({0x5553ULL, static_cast<std::uint64_t>(t)}));
    double s = 0.0;
    for (std::size_t i = 0; i < per_event_deltas.size(); ++i) s += rng.uniform();
    if (s >= a_sum) ++hits;
  }
  const double emp = static_cast<double>(hits) / static_cast<double>(cfg.trials);
  const double mc_sd = std::sqrt(std::max(emp * (1.0 - emp), 0.0) /
                                 static_cast<double>(cfg.trials));
  return finish("union-sum", emp, std::min(cert, 1.0), mc_sd, false, cfg.tolerance);
}

LogMomentBound log_moment_constant(LogMomentBound::Lemma lemma, double lambda, double sigma,
                                   std::int64_t n) {
  LogMomentBound out;
  out.lemma = lemma;
  switch (lemma) {
    case LogMomentBound::Lemma::SubGaussSq1:
    case LogMomentBound::Lemma::SubGaussSqHalf: {
      if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
      const double cap = 1.0 / (2.0 * sigma * sigma);
      if (!(lambda >= 0.0 && lambda < cap))
        throw DomainError("subgauss log-moment requires 0 <= lambda < 1/(2 sigma^2)");
      const double base = 1.0 / (1.0 - 2.0 * lambda * sigma * sigma);
      out.value = lemma == LogMomentBound::Lemma::SubGaussSq1 ? base : std::sqrt(base);
      return out;
    }
    case LogMomentBound::Lemma::Maurer2SqrtN:
      if (n <= 8) throw DomainError("maurer log-moment requires n > 8");
      out.value = 2.0 * std::sqrt(static_cast<double>(n));
      return out;
    case LogMomentBound::Lemma::DGammaOne:
      out.value = 1.0;
      return out;
    case LogMomentBound::Lemma::SubGaussMgf:
      if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
      if (n < 1) throw DomainError("SubGaussMgf needs a sample count n >= 1");
      out.value = std::exp(lambda * lambda * sigma * sigma / (2.0 * static_cast<double>(n)));
      return out;
  }
  throw DomainError("unknown log-moment lemma");
}

}  // namespace metapac
