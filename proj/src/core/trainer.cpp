#include "core/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace metapac {

namespace {

constexpr std::uint64_t kTagInitTask = 0x4954ULL;
constexpr std::uint64_t kTagInitPrior = 0x4950ULL;
constexpr std::uint64_t kTagU = 0x5531ULL;
constexpr std::uint64_t kTagW = 0x5731ULL;
constexpr std::uint64_t kTagAdaptU = 0x4155ULL;
constexpr std::uint64_t kTagAdaptW = 0x4157ULL;
constexpr std::uint64_t kTagEvalW = 0x4557ULL;

double glorot_limit(std::int64_t fan_in, std::int64_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

// mean residual loss of weight vector w on (x, y) pairs plus d(loss)/dw.
double mean_loss_and_grad(const std::vector<double>& w, const std::vector<double>& xs,
                          const std::vector<double>& ys, std::int64_t dim, LossKind kind,
                          std::vector<double>* dw) {
  const std::size_t m = ys.size();
  if (dw) dw->assign(w.size(), 0.0);
  double acc = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    const double* x = &xs[s * static_cast<std::size_t>(dim)];
    double r = -ys[s];
    for (std::int64_t k = 0; k < dim; ++k) r += w[static_cast<std::size_t>(k)] * x[k];
    acc += loss_value(kind, r);
    if (dw) {
      const double g = loss_dresidual(kind, r) / static_cast<double>(m);
      for (std::int64_t k = 0; k < dim; ++k) (*dw)[static_cast<std::size_t>(k)] += g * x[k];
    }
  }
  return acc / static_cast<double>(m);
}

// Closed-form KL(q || p) for diagonal Gaussians along with all four partials.
struct DiagKlGrads {
  double value = 0.0;
  std::vector<double> d_qm, d_ql, d_pm, d_pl;
};

DiagKlGrads kl_diag_with_grads(const DiagGaussian& q, const DiagGaussian& p) {
  const std::size_t d = q.dim();
  DiagKlGrads out;
  out.d_qm.resize(d);
  out.d_ql.resize(d);
  out.d_pm.resize(d);
  out.d_pl.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double dm = q.mean[k] - p.mean[k];
    const double vq = std::exp(q.log_var[k]);
    const double inv_vp = std::exp(-p.log_var[k]);
    out.value += 0.5 * (p.log_var[k] - q.log_var[k] + (vq + dm * dm) * inv_vp - 1.0);
    out.d_qm[k] = dm * inv_vp;
    out.d_ql[k] = 0.5 * (vq * inv_vp - 1.0);
    out.d_pm[k] = -dm * inv_vp;
    out.d_pl[k] = 0.5 * (1.0 - (vq + dm * dm) * inv_vp);
  }
  return out;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr >= 0.0)) throw ConfigError("trainer.lr must be >= 0");
  if (epochs < 0) throw ConfigError("trainer.epochs must be >= 0");
  if (mc_samples_u < 1) throw ConfigError("trainer.mc_samples_u must be >= 1");
  if (mc_samples_w < 1) throw ConfigError("trainer.mc_samples_w must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("trainer.delta must lie in (0,1)");
  if (!(kappa_p_sq > 0.0)) throw ConfigError("trainer.kappa_p_sq must be > 0");
  if (!(kappa_s_sq > 0.0)) throw ConfigError("trainer.kappa_s_sq must be > 0");
  if (mc_eval < 1) throw ConfigError("trainer.mc_eval must be >= 1");
}

DiagGaussian MetaState::prior_at(const std::vector<double>& u) const {
  const std::size_t d = static_cast<std::size_t>(dim());
  DiagGaussian p;
  p.mean.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(d));
  p.log_var.assign(u.begin() + static_cast<std::ptrdiff_t>(d), u.end());
  return p;
}

void MetaState::validate() const {
  if (theta.empty() || theta.size() % 2 != 0)
    throw DomainError("MetaState.theta must have 2*d entries");
  if (!(kappa_s_sq > 0.0 && kappa_p_sq > 0.0))
    throw DomainError("MetaState requires positive kappa_s_sq and kappa_p_sq");
  for (const auto& q : per_task) {
    q.validate();
    if (q.dim() * 2 != theta.size()) throw DomainError("MetaState per-task dim mismatch");
  }
}

MetaState init_state(const TrainConfig& cfg, const MetaDataset& data) {
  cfg.validate();
  data.validate();
  if (data.n() < 2) throw DomainError("meta-training needs n >= 2 tasks");
  const std::int64_t d = data.dim;
  const double limit = glorot_limit(d, 1);

  auto init_gaussian = [&](RngStream& rng) {
    DiagGaussian g;
    g.mean.resize(static_cast<std::size_t>(d));
    g.log_var.resize(static_cast<std::size_t>(d));
    for (auto& v : g.mean) v = limit * (2.0 * rng.uniform() - 1.0);
    for (auto& v : g.log_var) v = -10.0 + 0.1 * rng.normal();
    return g;
  };

  MetaState st;
  st.kappa_s_sq = cfg.kappa_s_sq;
  st.kappa_p_sq = cfg.kappa_p_sq;
  for (std::int64_t i = 0; i < data.n(); ++i) {
    RngStream rng(cfg.seed, stream_id({kTagInitTask, static_cast<std::uint64_t>(i)}));
    st.per_task.push_back(init_gaussian(rng));
  }
  RngStream rng(cfg.seed, stream_id({kTagInitPrior}));
  const DiagGaussian prior = init_gaussian(rng);
  st.theta = prior.mean;
  st.theta.insert(st.theta.end(), prior.log_var.begin(), prior.log_var.end());
  return st;
}

ObjectiveEval objective(const MetaState& state, const MetaDataset& data, const TrainConfig& cfg,
                        std::int64_t epoch) {
  cfg.validate();
  state.validate();
  data.validate();
  const std::int64_t n = data.n(), m = data.m, d = data.dim;
  if (state.per_task.size() != static_cast<std::size_t>(n))
    throw DomainError("state has a per-task posterior count different from the dataset");
  if (state.dim() != d) throw DomainError("state/dataset dimension mismatch");
  const std::uint64_t epoch_key =
      cfg.resample_per_epoch ? static_cast<std::uint64_t>(epoch) : 0ULL;

  ObjectiveEval out;
  out.grads.theta.assign(state.theta.size(), 0.0);
  out.grads.tasks.resize(static_cast<std::size_t>(n));
  for (auto& g : out.grads.tasks) {
    g.mean.assign(static_cast<std::size_t>(d), 0.0);
    g.log_var.assign(static_cast<std::size_t>(d), 0.0);
  }

  // Monte-Carlo train term with reparameterized gradients. The per-task
  // posteriors do not depend on U, so the train term needs no U draws.
  const double w_norm = 1.0 / (static_cast<double>(n) * static_cast<double>(cfg.mc_samples_w));
  std::vector<ReparamGrads> train_grads(static_cast<std::size_t>(n));
  double train_mc = 0.0;
  std::vector<double> eps, upstream;
  for (std::int64_t i = 0; i < n; ++i) {
    auto& tg = train_grads[static_cast<std::size_t>(i)];
    tg.mean.assign(static_cast<std::size_t>(d), 0.0);
    tg.log_var.assign(static_cast<std::size_t>(d), 0.0);
    RngStream rng(cfg.seed, stream_id({kTagW, epoch_key, static_cast<std::uint64_t>(i)}));
    const auto& q = state.per_task[static_cast<std::size_t>(i)];
    const auto& task = data.tasks[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < cfg.mc_samples_w; ++j) {
      const auto w = sample(q, rng, &eps);
      train_mc += w_norm * mean_loss_and_grad(w, task.x, task.y, d, cfg.loss, &upstream);
      const ReparamGrads rg = reparam_grads(q, eps, upstream);
      axpy(w_norm, rg.mean, tg.mean);
      axpy(w_norm, rg.log_var, tg.log_var);
    }
  }
  train_mc = std::clamp(train_mc, 0.0, 1.0);

  // Environment KL, closed form in theta.
  const double log_ratio = std::log(state.kappa_p_sq / state.kappa_s_sq);
  double kl_env = 0.0;
  std::vector<double> d_kl_env_theta(state.theta.size());
  for (std::size_t k = 0; k < state.theta.size(); ++k) {
    const double t = state.theta[k];
    kl_env += 0.5 * (log_ratio + (state.kappa_s_sq + t * t) / state.kappa_p_sq - 1.0);
    d_kl_env_theta[k] = t / state.kappa_p_sq;
  }
  kl_env = std::max(kl_env, 0.0);

  // Per-task KLs averaged over hyper-posterior samples U_s = theta + ks*eps.
  const double sd_s = std::sqrt(state.kappa_s_sq);
  const double u_norm = 1.0 / static_cast<double>(cfg.mc_samples_u);
  std::vector<double> kl_task(static_cast<std::size_t>(n), 0.0);
  std::vector<ReparamGrads> kl_task_grads(static_cast<std::size_t>(n));
  for (auto& g : kl_task_grads) {
    g.mean.assign(static_cast<std::size_t>(d), 0.0);
    g.log_var.assign(static_cast<std::size_t>(d), 0.0);
  }
  // d kl_task[i] / d theta, flattened per task.
  std::vector<std::vector<double>> kl_task_dtheta(
      static_cast<std::size_t>(n), std::vector<double>(state.theta.size(), 0.0));

  RngStream u_rng(cfg.seed, stream_id({kTagU, epoch_key}));
  std::vector<double> u(state.theta.size());
  for (std::int64_t s = 0; s < cfg.mc_samples_u; ++s) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      const bool var_half = k >= static_cast<std::size_t>(d);
      const double noise = (cfg.freeze_prior_vars && var_half) ? 0.0 : sd_s * u_rng.normal();
      u[k] = state.theta[k] + noise;
    }
    const DiagGaussian prior = state.prior_at(u);
    for (std::int64_t i = 0; i < n; ++i) {
      const auto g = kl_diag_with_grads(state.per_task[static_cast<std::size_t>(i)], prior);
      kl_task[static_cast<std::size_t>(i)] += u_norm * g.value;
      auto& kg = kl_task_grads[static_cast<std::size_t>(i)];
      axpy(u_norm, g.d_qm, kg.mean);
      axpy(u_norm, g.d_ql, kg.log_var);
      auto& dt = kl_task_dtheta[static_cast<std::size_t>(i)];
      for (std::int64_t k = 0; k < d; ++k) {
        dt[static_cast<std::size_t>(k)] += u_norm * g.d_pm[static_cast<std::size_t>(k)];
        dt[static_cast<std::size_t>(k + d)] += u_norm * g.d_pl[static_cast<std::size_t>(k)];
      }
    }
  }

  BoundInputs in;
  in.n = n;
  in.m = m;
  in.delta = cfg.delta;
  in.train_loss = train_mc;
  in.kl_env = kl_env;
  in.kl_task = kl_task;
  BoundPartials partials;
  const BoundReport rep = eval_bound(cfg.bound, in, cfg.bound_hypers, &partials);

  out.value = rep.value;
  out.train_mc = train_mc;
  out.kl_env = kl_env;
  double kl_sum = 0.0;
  for (double k : kl_task) kl_sum += k;
  out.kl_task_mean = kl_sum / static_cast<double>(n);

  // Chain rule through the bound's scalar inputs.
  axpy(partials.d_kl_env, d_kl_env_theta, out.grads.theta);
  for (std::int64_t i = 0; i < n; ++i) {
    const double dk = partials.d_kl_task[static_cast<std::size_t>(i)];
    auto& g = out.grads.tasks[static_cast<std::size_t>(i)];
    axpy(partials.d_train, train_grads[static_cast<std::size_t>(i)].mean, g.mean);
    axpy(partials.d_train, train_grads[static_cast<std::size_t>(i)].log_var, g.log_var);
    axpy(dk, kl_task_grads[static_cast<std::size_t>(i)].mean, g.mean);
    axpy(dk, kl_task_grads[static_cast<std::size_t>(i)].log_var, g.log_var);
    axpy(dk, kl_task_dtheta[static_cast<std::size_t>(i)], out.grads.theta);
  }
  if (cfg.freeze_prior_vars)
    for (std::size_t k = static_cast<std::size_t>(d); k < out.grads.theta.size(); ++k)
      out.grads.theta[k] = 0.0;
  return out;
}

std::pair<MetaState, TrainHistory> train(const TrainConfig& cfg, const MetaDataset& data) {
  MetaState state = init_state(cfg, data);
  TrainHistory history;
  history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    ObjectiveEval ev = objective(state, data, cfg, epoch);
    if (!std::isfinite(ev.value))
      throw NumericError("training objective became non-finite", epoch);
    axpy(-cfg.lr, ev.grads.theta, state.theta);
    for (std::size_t i = 0; i < state.per_task.size(); ++i) {
      axpy(-cfg.lr, ev.grads.tasks[i].mean, state.per_task[i].mean);
      axpy(-cfg.lr, ev.grads.tasks[i].log_var, state.per_task[i].log_var);
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    history.push_back({ev.value, ev.train_mc, ev.kl_env, ev.kl_task_mean, ms});
  }
  return {std::move(state), std::move(history)};
}

DiagGaussian fit_posterior(const DiagGaussian& prior, const TaskData& task, std::int64_t dim,
                           const TrainConfig& cfg, std::uint64_t stream_key) {
  const std::int64_t m = static_cast<std::int64_t>(task.y.size());
  if (m < 2) throw DomainError("single-task adaptation requires m >= 2");
  const double md = static_cast<double>(m);
  const double log_term = std::log(md / cfg.delta);
  const double scale = 2.0 * (md - 1.0);
  const std::int64_t epochs = cfg.adapt_epochs >= 0 ? cfg.adapt_epochs : cfg.epochs;
  const double w_norm = 1.0 / static_cast<double>(cfg.mc_samples_w);

  DiagGaussian q = prior;
  std::vector<double> eps, upstream;
  for (std::int64_t epoch = 0; epoch < epochs; ++epoch) {
    const std::uint64_t epoch_key =
        cfg.resample_per_epoch ? static_cast<std::uint64_t>(epoch) : 0ULL;
    RngStream rng(cfg.seed, stream_id({kTagAdaptW, stream_key, epoch_key}));
    ReparamGrads tg;
    tg.mean.assign(static_cast<std::size_t>(dim), 0.0);
    tg.log_var.assign(static_cast<std::size_t>(dim), 0.0);
    for (std::int64_t j = 0; j < cfg.mc_samples_w; ++j) {
      const auto w = sample(q, rng, &eps);
      mean_loss_and_grad(w, task.x, task.y, dim, cfg.loss, &upstream);
      const ReparamGrads rg = reparam_grads(q, eps, upstream);
      axpy(w_norm, rg.mean, tg.mean);
      axpy(w_norm, rg.log_var, tg.log_var);
    }
    const auto kl = kl_diag_with_grads(q, prior);
    const double d_kl = 1.0 / (2.0 * std::sqrt(scale * (kl.value + log_term)));
    for (std::size_t k = 0; k < q.mean.size(); ++k) {
      q.mean[k] -= cfg.lr * (tg.mean[k] + d_kl * kl.d_qm[k]);
      q.log_var[k] -= cfg.lr * (tg.log_var[k] + d_kl * kl.d_ql[k]);
    }
  }
  return q;
}

AdaptResult adapt_and_eval(const MetaState& state, const TaskData& task, std::int64_t dim,
                           const TrainConfig& cfg, std::uint64_t task_id) {
  state.validate();
  if (task.y_test.empty()) throw DomainError("adapt_and_eval needs a nonempty test split");
  const std::int64_t m = static_cast<std::int64_t>(task.y.size());
  if (m < 2) throw DomainError("adapt_and_eval requires m >= 2");

  // One hyper-posterior draw sets the prior.
  RngStream u_rng(cfg.seed, stream_id({kTagAdaptU, task_id}));
  const double sd_s = std::sqrt(state.kappa_s_sq);
  std::vector<double> u(state.theta.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const bool var_half = k >= u.size() / 2;
    const double noise = (cfg.freeze_prior_vars && var_half) ? 0.0 : sd_s * u_rng.normal();
    u[k] = state.theta[k] + noise;
  }
  const DiagGaussian prior = state.prior_at(u);
  const DiagGaussian q = fit_posterior(prior, task, dim, cfg, task_id);

  // Report with fresh evaluation draws.
  RngStream rng(cfg.seed, stream_id({kTagEvalW, task_id}));
  double test_loss = 0.0, train_final = 0.0;
  for (std::int64_t j = 0; j < cfg.mc_eval; ++j) {
    const auto w = sample(q, rng);
    test_loss += mean_loss_and_grad(w, task.x_test, task.y_test, dim, cfg.loss, nullptr);
    train_final += mean_loss_and_grad(w, task.x, task.y, dim, cfg.loss, nullptr);
  }
  test_loss /= static_cast<double>(cfg.mc_eval);
  train_final /= static_cast<double>(cfg.mc_eval);

  AdaptResult out;
  out.posterior = q;
  out.test_loss = test_loss;
  out.certified_bound = bound_single_task_mcallester(
      m, cfg.delta, kl_diag(q, prior), std::clamp(train_final, 0.0, 1.0));
  return out;
}

double exact_gaussian_train_loss(const DiagGaussian& q, const TaskData& task, std::int64_t dim,
                                 LossKind kind) {
  q.validate();
  const std::size_t m = task.y.size();
  double acc = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    const double* x = &task.x[s * static_cast<std::size_t>(dim)];
    double nu = -task.y[s], s2 = 0.0;
    for (std::int64_t k = 0; k < dim; ++k) {
      nu += q.mean[static_cast<std::size_t>(k)] * x[k];
      s2 += std::exp(q.log_var[static_cast<std::size_t>(k)]) * x[k] * x[k];
    }
    acc += expected_loss_normal_residual(kind, nu, s2);
  }
  return acc / static_cast<double>(m);
}

double expected_kl_task(const DiagGaussian& q, const std::vector<double>& theta,
                        double kappa_s_sq, bool sample_prior_vars) {
  q.validate();
  if (theta.size() != 2 * q.dim()) throw DomainError("expected_kl_task dimension mismatch");
  const std::size_t d = q.dim();
  // E[log-var half] = theta_l; E[e^{-pl}] is a lognormal moment; the mean
  // half contributes its ks^2 variance to the quadratic term.
  const double lognormal = sample_prior_vars ? std::exp(kappa_s_sq / 2.0) : 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double tm = theta[k], tl = theta[d + k];
    const double dm = q.mean[k] - tm;
    const double vq = std::exp(q.log_var[k]);
    acc += 0.5 * (tl - q.log_var[k] +
                  (vq + dm * dm + kappa_s_sq) * std::exp(-tl) * lognormal - 1.0);
  }
  return acc;
}

}  // namespace metapac
