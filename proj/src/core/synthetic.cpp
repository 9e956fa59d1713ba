#include "core/synthetic.hpp"

#include <cmath>
#include <utility>

#include "core/errors.hpp"

namespace metapac {

namespace {

double phi_pdf(double z) { return std::exp(-0.5 * z * z) * 0.39894228040143267794; }
double phi_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

}  // namespace

double loss_value(LossKind kind, double r) {
  const double r2 = r * r;
  if (kind == LossKind::ClippedSquare) return r2 < 1.0 ? r2 : 1.0;
  return 1.0 - std::exp(-r2);
}

double loss_dresidual(LossKind kind, double r) {
  if (kind == LossKind::ClippedSquare) return r * r < 1.0 ? 2.0 * r : 0.0;
  return 2.0 * r * std::exp(-r * r);
}

double expected_loss_normal_residual(LossKind kind, double nu, double s2) {
  if (!(s2 >= 0.0)) throw DomainError("residual variance must be >= 0");
  if (kind == LossKind::ExpSquare) {
    // E[1 - e^{-r^2}] for r ~ N(nu, s2).
    const double denom = 1.0 + 2.0 * s2;
    return 1.0 - std::exp(-nu * nu / denom) / std::sqrt(denom);
  }
  if (s2 == 0.0) return loss_value(kind, nu);
  // E[min(1, r^2)] = E[r^2; |r| <= 1] + P(|r| > 1) via truncated moments.
  const double s = std::sqrt(s2);
  const double alpha = (-1.0 - nu) / s, beta = (1.0 - nu) / s;
  const double dphi = phi_cdf(beta) - phi_cdf(alpha);
  const double inner = (nu * nu + s2) * dphi + 2.0 * nu * s * (phi_pdf(alpha) - phi_pdf(beta)) +
                       s2 * (alpha * phi_pdf(alpha) - beta * phi_pdf(beta));
  return inner + (1.0 - dphi);
}

void SyntheticEnvSpec::validate() const {
  if (dim < 1) throw DomainError("SyntheticEnvSpec.dim must be >= 1");
  if (!(tau_sq >= 0.0)) throw DomainError("SyntheticEnvSpec.tau_sq must be >= 0");
  if (!(obs_noise >= 0.0)) throw DomainError("SyntheticEnvSpec.obs_noise must be >= 0");
  if (m < 1 || m_test < 0) throw DomainError("SyntheticEnvSpec needs m >= 1 and m_test >= 0");
  if (n < 1 || n_test_tasks < 0)
    throw DomainError("SyntheticEnvSpec needs n >= 1 and n_test_tasks >= 0");
  if (!env_mean.empty() && static_cast<std::int64_t>(env_mean.size()) != dim)
    throw DomainError("SyntheticEnvSpec.env_mean length must equal dim");
}

std::vector<double> SyntheticEnvSpec::resolved_mean() const {
  if (!env_mean.empty()) return env_mean;
  return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
}

SyntheticOracle::SyntheticOracle(SyntheticEnvSpec spec, std::vector<std::vector<double>> task_w,
                                 std::vector<std::vector<double>> test_task_w)
    : spec_(std::move(spec)), task_w_(std::move(task_w)), test_task_w_(std::move(test_task_w)) {}

double SyntheticOracle::population_loss(const std::vector<double>& w,
                                        const std::vector<double>& w_star, LossKind kind) const {
  if (w.size() != w_star.size()) throw DomainError("population_loss dimension mismatch");
  double d2 = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double d = w[k] - w_star[k];
    d2 += d * d;
  }
  return expected_loss_normal_residual(kind, 0.0, d2 + spec_.obs_noise);
}

std::vector<double> SyntheticOracle::draw_task(RngStream& rng) const {
  const auto u = spec_.resolved_mean();
  const double tau = std::sqrt(spec_.tau_sq);
  std::vector<double> w(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) w[k] = u[k] + tau * rng.normal();
  return w;
}

TaskData SyntheticOracle::draw_task_data(const std::vector<double>& w_star, std::int64_t m,
                                         std::int64_t m_test, RngStream& rng) const {
  const double noise_sd = std::sqrt(spec_.obs_noise);
  TaskData t;
  auto fill = [&](std::vector<double>& xs, std::vector<double>& ys, std::int64_t count) {
    for (std::int64_t s = 0; s < count; ++s) {
      double dot = 0.0;
      for (std::size_t k = 0; k < w_star.size(); ++k) {
        const double x = rng.normal();
        xs.push_back(x);
        dot += w_star[k] * x;
      }
      ys.push_back(dot + noise_sd * rng.normal());
    }
  };
  fill(t.x, t.y, m);
  fill(t.x_test, t.y_test, m_test);
  return t;
}

SyntheticResult gen_synthetic(const SyntheticEnvSpec& spec) {
  spec.validate();
  const auto u = spec.resolved_mean();

  std::vector<std::vector<double>> task_w, test_task_w;
  MetaDataset ds;
  ds.dim = spec.dim;
  ds.m = spec.m;
  ds.m_test = spec.m_test;

  SyntheticOracle oracle(spec, {}, {});
  for (std::int64_t i = 0; i < spec.n; ++i) {
    RngStream rng(spec.seed, stream_id({0x544bULL, static_cast<std::uint64_t>(i)}));
    task_w.push_back(oracle.draw_task(rng));
    ds.tasks.push_back(oracle.draw_task_data(task_w.back(), spec.m, spec.m_test, rng));
  }
  for (std::int64_t i = 0; i < spec.n_test_tasks; ++i) {
    RngStream rng(spec.seed, stream_id({0x5454ULL, static_cast<std::uint64_t>(i)}));
    test_task_w.push_back(oracle.draw_task(rng));
    ds.test_tasks.push_back(oracle.draw_task_data(test_task_w.back(), spec.m, spec.m_test, rng));
  }

  ds.provenance = {{"kind", "synthetic"},
                   {"dim", spec.dim},
                   {"env_mean", u},
                   {"tau_sq", spec.tau_sq},
                   {"obs_noise", spec.obs_noise},
                   {"m", spec.m},
                   {"m_test", spec.m_test},
                   {"n", spec.n},
                   {"n_test_tasks", spec.n_test_tasks},
                   {"seed", spec.seed}};
  ds.validate();
  return SyntheticResult{std::move(ds),
                         SyntheticOracle(spec, std::move(task_w), std::move(test_task_w))};
}

}  // namespace metapac
