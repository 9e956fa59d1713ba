#pragma once

#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace metapac {

// Bounded losses for the linear predictor yhat = w.x:
//   ClippedSquare: min(1, (yhat - y)^2), subgradient 0 in the clipped region.
//   ExpSquare:     1 - exp(-(yhat - y)^2), smooth.
enum class LossKind { ClippedSquare, ExpSquare };

double loss_value(LossKind kind, double residual);
double loss_dresidual(LossKind kind, double residual);

// Expected loss of the residual distribution N(nu, s2) in closed form.
// ExpSquare uses the Gaussian moment-generating integral; ClippedSquare uses
// normal-cdf partial moments.
double expected_loss_normal_residual(LossKind kind, double nu, double s2);

// Linear-regression task environment: task i draws w*_i = u* + N(0, tau2 I);
// samples have x ~ N(0, I) and y = w*_i . x + N(0, obs_noise).
struct SyntheticEnvSpec {
  std::int64_t dim = 2;
  std::vector<double> env_mean;  // u*; zero-filled to dim when empty
  double tau_sq = 0.25;          // task parameter noise (variance)
  double obs_noise = 0.01;       // observation noise (variance)
  std::int64_t m = 50;
  std::int64_t n = 5;
  std::int64_t n_test_tasks = 20;
  std::int64_t m_test = 50;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<double> resolved_mean() const;
};

// Analytic handle: knows the true task vectors behind a generated dataset and
// can draw fresh tasks/data from the same environment.
class SyntheticOracle {
 public:
  SyntheticOracle(SyntheticEnvSpec spec, std::vector<std::vector<double>> task_w,
                  std::vector<std::vector<double>> test_task_w);

  const SyntheticEnvSpec& spec() const { return spec_; }
  const std::vector<double>& task_w(std::size_t i) const { return task_w_.at(i); }
  const std::vector<double>& test_task_w(std::size_t i) const { return test_task_w_.at(i); }

  // Exact population loss E_z[l(w, z)] for a fixed weight vector on the task
  // with true vector w_star: the residual is N(0, ||w - w*||^2 + obs_noise).
  double population_loss(const std::vector<double>& w, const std::vector<double>& w_star,
                         LossKind kind) const;

  // Fresh draws from the environment (for coverage experiments).
  std::vector<double> draw_task(RngStream& rng) const;
  TaskData draw_task_data(const std::vector<double>& w_star, std::int64_t m, std::int64_t m_test,
                          RngStream& rng) const;

 private:
  SyntheticEnvSpec spec_;
  std::vector<std::vector<double>> task_w_;
  std::vector<std::vector<double>> test_task_w_;
};

struct SyntheticResult {
  MetaDataset dataset;
  SyntheticOracle oracle;
};

SyntheticResult gen_synthetic(const SyntheticEnvSpec& spec);

}  // namespace metapac
