#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "core/bounds.hpp"
#include "core/synthetic.hpp"
#include "core/trainer.hpp"

namespace metapac {

// Coverage experiment: R independent meta-sample draws from a fixed synthetic
// environment; each draw is meta-trained on a short budget, the selected
// bound is evaluated with exact (closed-form) train/KL terms, and the true
// meta-risk is estimated with the analytic per-weight population loss, Monte
// Carlo only over fresh tasks, hyper-posterior draws, and posterior draws.
struct CoverageConfig {
  std::string bound = "new-classic";
  std::map<std::string, double> bound_hypers;
  std::int64_t trials = 500;
  double delta = 0.1;
  SyntheticEnvSpec env;  // per-trial meta-sample shape; env.seed is re-derived per trial
  TrainConfig fit;       // short-budget meta-training and base-learner settings
  std::int64_t risk_u_samples = 2;
  std::int64_t risk_tasks = 20;
  std::int64_t risk_w_samples = 8;
  std::uint64_t seed = 0;
  std::int64_t threads = 0;  // 0 = hardware concurrency

  // Test-harness hook: when set, replaces the bound evaluator (used to sanity
  // check the violation counting path). Not reachable from the CLI.
  std::function<double(const BoundInputs&)> bound_override;
};

struct CoverageReport {
  std::string bound;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  double violation_rate = 0.0;
  double delta = 0.0;
  double mc_slack = 0.0;  // 3 sqrt(delta (1-delta) / trials)
  bool pass = false;
  double mean_bound = 0.0;
  double mean_true_risk = 0.0;
};

CoverageReport run_coverage(const CoverageConfig& cfg);

}  // namespace metapac
