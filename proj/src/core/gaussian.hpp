#pragma once

#include <cstddef>
#include <vector>

#include "core/rng.hpp"

namespace metapac {

// Factorized Gaussian over a weight vector, parameterized by per-coordinate
// mean and log-variance (unconstrained, gradient-descent friendly).
struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> log_var;

  std::size_t dim() const { return mean.size(); }
  void validate() const;  // equal dims >= 1, finite log_var
};

// Isotropic Gaussian N(mean, var * I).
struct IsotropicGaussian {
  std::vector<double> mean;
  double var = 1.0;

  std::size_t dim() const { return mean.size(); }
  void validate() const;  // var > 0
};

// Two readings of the closed-form KLs. StandardGaussian is the usual Gaussian
// KL (nonnegative, a true divergence, the default everywhere). PaperVerbatim
// evaluates the printed closed forms exactly as given, which differ from the
// standard KL (no dimension factor in the isotropic case; a logged quadratic
// term in the diagonal case) and can go negative.
enum class KlMode { StandardGaussian, PaperVerbatim };

// KL(Q || P) for isotropic Gaussians over the hyperparameter space.
// PaperVerbatim requires P.mean = 0 and evaluates
//   (||theta||^2 + k_s^2) / (2 k_p^2) + log(k_p^2 / k_s^2) - 1/2.
double kl_hyper(const IsotropicGaussian& q, const IsotropicGaussian& p,
                KlMode mode = KlMode::StandardGaussian);

// KL(Q || P) for diagonal Gaussians over the weight space. PaperVerbatim:
//   (1/2) sum_k [ log(s_p^2/s_q^2) + log((s_q^2 + (mu_q-mu_p)^2) / s_p^2) ].
double kl_diag(const DiagGaussian& q, const DiagGaussian& p,
               KlMode mode = KlMode::StandardGaussian);

// Reparameterized draw mean + sigma .* eps. When eps_out is non-null the
// standard-normal draws are recorded for gradient computation.
std::vector<double> sample(const DiagGaussian& g, RngStream& rng,
                           std::vector<double>* eps_out = nullptr);
std::vector<double> sample(const IsotropicGaussian& g, RngStream& rng,
                           std::vector<double>* eps_out = nullptr);

struct ReparamGrads {
  std::vector<double> mean;
  std::vector<double> log_var;
};

// Pull an upstream gradient dL/dw at w = mean + sigma .* eps back onto the
// distribution parameters: dL/dmean = upstream, dL/dlogvar_k =
// upstream_k * eps_k * sigma_k / 2 (since dw/dlogvar = eps * sigma / 2).
ReparamGrads reparam_grads(const DiagGaussian& g, const std::vector<double>& eps,
                           const std::vector<double>& upstream);

}  // namespace metapac
