#include "core/gaussian.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace metapac {

void DiagGaussian::validate() const {
  if (mean.empty() || mean.size() != log_var.size())
    throw DomainError("DiagGaussian requires equal mean/log_var dims >= 1");
  for (double lv : log_var)
    if (!std::isfinite(lv)) throw DomainError("DiagGaussian log_var must be finite");
}

void IsotropicGaussian::validate() const {
  if (mean.empty()) throw DomainError("IsotropicGaussian requires dim >= 1");
  if (!(var > 0.0)) throw DomainError("IsotropicGaussian requires var > 0");
}

double kl_hyper(const IsotropicGaussian& q, const IsotropicGaussian& p, KlMode mode) {
  q.validate();
  p.validate();
  if (q.dim() != p.dim())
    throw DomainError("kl_hyper dimension mismatch: " + std::to_string(q.dim()) + " vs " +
                      std::to_string(p.dim()));
  if (mode == KlMode::PaperVerbatim) {
    for (double pm : p.mean)
      if (pm != 0.0) throw DomainError("PaperVerbatim kl_hyper requires a zero-mean hyper-prior");
    double theta_sq = 0.0;
    for (double t : q.mean) theta_sq += t * t;
    return (theta_sq + q.var) / (2.0 * p.var) + std::log(p.var / q.var) - 0.5;
  }
  // Sum of 1-D Gaussian KLs.
  const double log_ratio = std::log(p.var / q.var);
  double acc = 0.0;
  for (std::size_t k = 0; k < q.dim(); ++k) {
    const double dm = q.mean[k] - p.mean[k];
    acc += 0.5 * (log_ratio + (q.var + dm * dm) / p.var - 1.0);
  }
  return acc < 0.0 ? 0.0 : acc;
}

double kl_diag(const DiagGaussian& q, const DiagGaussian& p, KlMode mode) {
  q.validate();
  p.validate();
  if (q.dim() != p.dim())
    throw DomainError("kl_diag dimension mismatch: " + std::to_string(q.dim()) + " vs " +
                      std::to_string(p.dim()));
  double acc = 0.0;
  for (std::size_t k = 0; k < q.dim(); ++k) {
    const double dm = q.mean[k] - p.mean[k];
    const double vq = std::exp(q.log_var[k]);
    const double vp = std::exp(p.log_var[k]);
    if (mode == KlMode::PaperVerbatim) {
      acc += 0.5 * (std::log(vp / vq) + std::log((vq + dm * dm) / vp));
    } else {
      acc += 0.5 * (p.log_var[k] - q.log_var[k] + (vq + dm * dm) / vp - 1.0);
    }
  }
  if (mode == KlMode::StandardGaussian && acc < 0.0) return 0.0;
  return acc;
}

std::vector<double> sample(const DiagGaussian& g, RngStream& rng, std::vector<double>* eps_out) {
  g.validate();
  std::vector<double> w(g.dim());
  if (eps_out) eps_out->resize(g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const double eps = rng.normal();
    if (eps_out) (*eps_out)[k] = eps;
    w[k] = g.mean[k] + std::exp(0.5 * g.log_var[k]) * eps;
  }
  return w;
}

std::vector<double> sample(const IsotropicGaussian& g, RngStream& rng,
                           std::vector<double>* eps_out) {
  g.validate();
  const double sd = std::sqrt(g.var);
  std::vector<double> u(g.dim());
  if (eps_out) eps_out->resize(g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const double eps = rng.normal();
    if (eps_out) (*eps_out)[k] = eps;
    u[k] = g.mean[k] + sd * eps;
  }
  return u;
}

ReparamGrads reparam_grads(const DiagGaussian& g, const std::vector<double>& eps,
                           const std::vector<double>& upstream) {
  g.validate();
  if (eps.size() != g.dim() || upstream.size() != g.dim())
    throw DomainError("reparam_grads dimension mismatch");
  ReparamGrads out;
  out.mean = upstream;
  out.log_var.resize(g.dim());
  for (std::size_t k = 0; k < g.dim(); ++k)
    out.log_var[k] = upstream[k] * eps[k] * std::exp(0.5 * g.log_var[k]) * 0.5;
  return out;
}

}  // namespace metapac
