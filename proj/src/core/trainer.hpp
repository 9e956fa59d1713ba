#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/bounds.hpp"
#include "core/dataset.hpp"
#include "core/gaussian.hpp"
#include "core/synthetic.hpp"

namespace metapac {

struct TrainConfig {
  std::string bound = "new-classic";
  std::map<std::string, double> bound_hypers;
  double lr = 1e-3;
  std::int64_t epochs = 200;
  std::int64_t mc_samples_u = 3;
  std::int64_t mc_samples_w = 5;
  double delta = 0.1;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::ExpSquare;
  double kappa_p_sq = 100.0;
  double kappa_s_sq = 0.001;
  // Hold prior log-variances fixed: the second half of theta is neither
  // perturbed by hyper-posterior sampling nor updated by gradients.
  bool freeze_prior_vars = false;
  // Fresh Monte-Carlo draws every epoch (keyed by (seed, epoch)); when false
  // every epoch reuses the epoch-0 draws, making lr=0 histories exactly flat.
  bool resample_per_epoch = true;
  std::int64_t adapt_epochs = -1;  // meta-test adaptation budget, -1 = epochs
  std::int64_t mc_eval = 32;       // posterior draws when reporting test losses

  void validate() const;
};

// Hyper-posterior mean theta over the flattened hyperparameter
// (prior means then prior log-variances, 2d entries) plus the per-task
// posteriors. kappa_s_sq / kappa_p_sq are fixed, not learned.
struct MetaState {
  std::vector<double> theta;
  double kappa_s_sq = 0.001;
  double kappa_p_sq = 100.0;
  std::vector<DiagGaussian> per_task;

  std::int64_t dim() const { return static_cast<std::int64_t>(theta.size()) / 2; }
  DiagGaussian prior_at(const std::vector<double>& u) const;
  void validate() const;
};

struct EpochRecord {
  double objective = 0.0;
  double train_mc = 0.0;
  double kl_env = 0.0;
  double kl_task_mean = 0.0;
  double wall_ms = 0.0;
};
using TrainHistory = std::vector<EpochRecord>;

struct MetaGrads {
  std::vector<double> theta;
  std::vector<ReparamGrads> tasks;
};

struct ObjectiveEval {
  double value = 0.0;
  double train_mc = 0.0;
  double kl_env = 0.0;
  double kl_task_mean = 0.0;
  MetaGrads grads;
};

// Glorot-uniform means, N(-10, 0.01) log-variances, theta = flattened initial
// hyperparameter. Requires n >= 2 tasks.
MetaState init_state(const TrainConfig& cfg, const MetaDataset& data);

// Monte-Carlo bound objective and its gradients. Draws are a pure function of
// (cfg.seed, epoch) so repeated calls at the same epoch are identical.
ObjectiveEval objective(const MetaState& state, const MetaDataset& data, const TrainConfig& cfg,
                        std::int64_t epoch);

// Plain full-batch SGD on (theta, per-task posteriors); the history records
// each epoch's pre-step objective.
std::pair<MetaState, TrainHistory> train(const TrainConfig& cfg, const MetaDataset& data);

// Base learner: starting from the prior, minimize the single-task McAllester
// objective (MC train estimate + sqrt complexity) by SGD. Requires m >= 2.
DiagGaussian fit_posterior(const DiagGaussian& prior, const TaskData& task, std::int64_t dim,
                           const TrainConfig& cfg, std::uint64_t stream_key);

struct AdaptResult {
  double test_loss = 0.0;
  double certified_bound = 0.0;
  DiagGaussian posterior;
};

// Meta-test protocol: sample U from the hyper-posterior once (seeded by
// task_id), set the prior from U, fit a fresh posterior, report the MC
// expected test loss and the certified single-task bound.
AdaptResult adapt_and_eval(const MetaState& state, const TaskData& task, std::int64_t dim,
                           const TrainConfig& cfg, std::uint64_t task_id);

// Exact E_{W~q}[mean_k l(W, z_k)] over a task's training samples (per-sample
// residuals are scalar Gaussians).
double exact_gaussian_train_loss(const DiagGaussian& q, const TaskData& task, std::int64_t dim,
                                 LossKind kind);

// Exact E_{U~N(theta, ks^2 I)}[KL(q || P(.|U))] for the diagonal prior whose
// means/log-variances are the two halves of U (lognormal moment in closed
// form). sample_prior_vars=false drops the ks^2 perturbation of the log-var
// half, matching freeze_prior_vars.
double expected_kl_task(const DiagGaussian& q, const std::vector<double>& theta,
                        double kappa_s_sq, bool sample_prior_vars = true);

}  // namespace metapac
