#include "core/coverage.hpp"

#include <cmath>
#include <future>
#include <thread>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace metapac {

namespace {

constexpr std::uint64_t kTagTrial = 0x4356ULL;
constexpr std::uint64_t kTagRiskU = 0x5255ULL;
constexpr std::uint64_t kTagRiskTask = 0x5254ULL;
constexpr std::uint64_t kTagRiskW = 0x5257ULL;

struct TrialOutcome {
  double bound_value = 0.0;
  double true_risk = 0.0;
  double risk_sd = 0.0;
  bool violation = false;
};

TrialOutcome run_trial(const CoverageConfig& cfg, std::int64_t trial) {
  // Fresh meta-sample from the environment.
  SyntheticEnvSpec env = cfg.env;
  env.n_test_tasks = 0;
  env.m_test = 0;
  env.seed = stream_id({cfg.seed, kTagTrial, static_cast<std::uint64_t>(trial)});
  SyntheticResult gen = gen_synthetic(env);

  TrainConfig fit = cfg.fit;
  fit.delta = cfg.delta;
  fit.seed = stream_id({cfg.seed, kTagTrial, static_cast<std::uint64_t>(trial), 1ULL});
  auto [state, history] = train(fit, gen.dataset);

  // Bound from exact train loss and closed-form KLs (no MC noise on the
  // certified side).
  BoundInputs in;
  in.n = gen.dataset.n();
  in.m = gen.dataset.m;
  in.delta = cfg.delta;
  double train_exact = 0.0;
  for (std::int64_t i = 0; i < in.n; ++i)
    train_exact += exact_gaussian_train_loss(state.per_task[static_cast<std::size_t>(i)],
                                             gen.dataset.tasks[static_cast<std::size_t>(i)],
                                             gen.dataset.dim, fit.loss);
  in.train_loss = std::min(train_exact / static_cast<double>(in.n), 1.0);
  double kl_env = 0.0;
  const double log_ratio = std::log(state.kappa_p_sq / state.kappa_s_sq);
  for (double t : state.theta)
    kl_env += 0.5 * (log_ratio + (state.kappa_s_sq + t * t) / state.kappa_p_sq - 1.0);
  in.kl_env = std::max(kl_env, 0.0);
  for (std::int64_t i = 0; i < in.n; ++i)
    in.kl_task.push_back(expected_kl_task(state.per_task[static_cast<std::size_t>(i)],
                                          state.theta, state.kappa_s_sq,
                                          !fit.freeze_prior_vars));

  TrialOutcome out;
  out.bound_value = cfg.bound_override ? cfg.bound_override(in)
                                       : eval_bound(cfg.bound, in, cfg.bound_hypers).value;

  // True meta-risk: fresh tasks and data, base learner from each sampled U,
  // analytic population loss per posterior draw.
  const double sd_s = std::sqrt(state.kappa_s_sq);
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(cfg.risk_u_samples * cfg.risk_tasks));
  for (std::int64_t s = 0; s < cfg.risk_u_samples; ++s) {
    RngStream u_rng(cfg.seed, stream_id({kTagRiskU, static_cast<std::uint64_t>(trial),
                                         static_cast<std::uint64_t>(s)}));
    std::vector<double> u(state.theta.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const bool var_half = k >= u.size() / 2;
      const double noise =
          (fit.freeze_prior_vars && var_half) ? 0.0 : sd_s * u_rng.normal();
      u[k] = state.theta[k] + noise;
    }
    const DiagGaussian prior = state.prior_at(u);
    for (std::int64_t t = 0; t < cfg.risk_tasks; ++t) {
      RngStream task_rng(cfg.seed, stream_id({kTagRiskTask, static_cast<std::uint64_t>(trial),
                                              static_cast<std::uint64_t>(s),
                                              static_cast<std::uint64_t>(t)}));
      const auto w_star = gen.oracle.draw_task(task_rng);
      const TaskData fresh = gen.oracle.draw_task_data(w_star, env.m, 0, task_rng);
      TrainConfig base = fit;
      base.seed = stream_id({cfg.seed, kTagRiskTask, static_cast<std::uint64_t>(trial), 2ULL});
      const DiagGaussian q = fit_posterior(
          prior, fresh, env.dim, base,
          stream_id({static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t)}));
      RngStream w_rng(cfg.seed, stream_id({kTagRiskW, static_cast<std::uint64_t>(trial),
                                           static_cast<std::uint64_t>(s),
                                           static_cast<std::uint64_t>(t)}));
      double cell = 0.0;
      for (std::int64_t j = 0; j < cfg.risk_w_samples; ++j) {
        const auto w = sample(q, w_rng);
        cell += gen.oracle.population_loss(w, w_star, fit.loss);
      }
      cells.push_back(cell / static_cast<double>(cfg.risk_w_samples));
    }
  }

  double mean = 0.0;
  for (double c : cells) mean += c;
  mean /= static_cast<double>(cells.size());
  double var = 0.0;
  for (double c : cells) var += (c - mean) * (c - mean);
  var = cells.size() > 1 ? var / static_cast<double>(cells.size() - 1) : 0.0;
  out.true_risk = mean;
  out.risk_sd = std::sqrt(var / static_cast<double>(cells.size()));
  out.violation = out.true_risk > out.bound_value + 3.0 * out.risk_sd;
  return out;
}

}  // namespace

CoverageReport run_coverage(const CoverageConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("coverage requires trials >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw DomainError("coverage delta must be in (0,1)");
  if (cfg.risk_u_samples < 1 || cfg.risk_tasks < 1 || cfg.risk_w_samples < 1)
    throw DomainError("coverage risk sample counts must be >= 1");
  cfg.env.validate();
  if (!cfg.bound_override) bound_hyper_axes(cfg.bound);  // validates the name

  const std::size_t n_threads = cfg.threads > 0
                                    ? static_cast<std::size_t>(cfg.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));

  // Trials are independent with disjoint streams; results land in a vector
  // indexed by trial so the reduction order is fixed.
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < n_threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w]() {
      for (std::int64_t t = static_cast<std::int64_t>(w); t < cfg.trials;
           t += static_cast<std::int64_t>(n_threads))
        outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, t);
    }));
  }
  for (auto& f : workers) f.get();

  CoverageReport rep;
  rep.bound = cfg.bound;
  rep.trials = cfg.trials;
  rep.delta = cfg.delta;
  double sum_bound = 0.0, sum_risk = 0.0;
  for (const auto& o : outcomes) {
    if (o.violation) ++rep.violations;
    sum_bound += o.bound_value;
    sum_risk += o.true_risk;
  }
  rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(cfg.trials);
  rep.mc_slack = 3.0 * std::sqrt(cfg.delta * (1.0 - cfg.delta) / static_cast<double>(cfg.trials));
  rep.pass = rep.violation_rate <= cfg.delta + rep.mc_slack;
  rep.mean_bound = sum_bound / static_cast<double>(cfg.trials);
  rep.mean_true_risk = sum_risk / static_cast<double>(cfg.trials);
  return rep;
}

}  // namespace metapac
