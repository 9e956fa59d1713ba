#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "core/errors.hpp"
#include "core/gaussian.hpp"
#include "core/rng.hpp"

using namespace metapac;

namespace {

DiagGaussian random_diag(RngStream& rng, std::size_t d) {
  DiagGaussian g;
  for (std::size_t k = 0; k < d; ++k) {
    g.mean.push_back(4.0 * (rng.uniform() - 0.5));
    g.log_var.push_back(3.0 * (rng.uniform() - 0.5));
  }
  return g;
}

// Independent re-derivation of the printed formulas, assembled term by term
// in a different order/arrangement than the implementation.
double hyper_verbatim_oracle(const IsotropicGaussian& q, double p_var) {
  double theta_sq = 0.0;
  for (double t : q.mean) theta_sq += t * t;
  return theta_sq / (2.0 * p_var) + q.var / (2.0 * p_var) - 0.5 +
         (std::log(p_var) - std::log(q.var));
}

double diag_verbatim_oracle(const DiagGaussian& q, const DiagGaussian& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < q.dim(); ++k) {
    const double vq = std::exp(q.log_var[k]), vp = std::exp(p.log_var[k]);
    const double dm = q.mean[k] - p.mean[k];
    acc += 0.5 * (std::log(vp) - std::log(vq));
    acc += 0.5 * (std::log(vq + dm * dm) - std::log(vp));
  }
  return acc;
}

}  // namespace

TEST_CASE("kl_hyper spot values") {
  IsotropicGaussian p{{0.0, 0.0, 0.0}, 2.5};
  IsotropicGaussian q = p;
  CHECK(kl_hyper(q, p, KlMode::PaperVerbatim) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(kl_hyper(q, p, KlMode::StandardGaussian) == doctest::Approx(0.0).epsilon(1e-15));

  // ||theta||^2 = 2 k_p^2 with equal variances: (3 k_p^2)/(2 k_p^2) - 1/2 = 1
  IsotropicGaussian q2{{std::sqrt(2.0 * 2.5), 0.0, 0.0}, 2.5};
  CHECK(kl_hyper(q2, p, KlMode::PaperVerbatim) == doctest::Approx(1.0).epsilon(1e-12));

  IsotropicGaussian p_shift{{1.0, 0.0, 0.0}, 2.5};
  CHECK_THROWS_AS(kl_hyper(q, p_shift, KlMode::PaperVerbatim), DomainError);
  IsotropicGaussian p_small{{0.0, 0.0}, 2.5};
  CHECK_THROWS_AS(kl_hyper(q, p_small, KlMode::StandardGaussian), DomainError);
}

TEST_CASE("kl_diag spot values") {
  DiagGaussian q{{1.0}, {0.0}};
  DiagGaussian p{{0.0}, {0.0}};
  CHECK(kl_diag(q, p, KlMode::StandardGaussian) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kl_diag(p, p, KlMode::StandardGaussian) == 0.0);
  CHECK(kl_diag(p, p, KlMode::PaperVerbatim) == doctest::Approx(0.0).epsilon(1e-15));
  DiagGaussian bad{{0.0, 1.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(kl_diag(q, bad), DomainError);
}

TEST_CASE("standard KLs are nonnegative and zero iff equal") {
  RngStream rng(23, 1);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    DiagGaussian q = random_diag(rng, d), p = random_diag(rng, d);
    const double kl = kl_diag(q, p, KlMode::StandardGaussian);
    CHECK(kl >= 0.0);
    CHECK(kl_diag(q, q, KlMode::StandardGaussian) <= 1e-12);

    IsotropicGaussian qi{q.mean, 0.1 + rng.uniform()};
    IsotropicGaussian pi{p.mean, 0.1 + rng.uniform()};
    CHECK(kl_hyper(qi, pi, KlMode::StandardGaussian) >= 0.0);
    CHECK(kl_hyper(qi, qi, KlMode::StandardGaussian) <= 1e-12);
  }
}

TEST_CASE("kl_diag is additive over coordinates") {
  RngStream rng(29, 2);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform() * 5);
    DiagGaussian q = random_diag(rng, d), p = random_diag(rng, d);
    double parts = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      DiagGaussian q1{{q.mean[k]}, {q.log_var[k]}};
      DiagGaussian p1{{p.mean[k]}, {p.log_var[k]}};
      parts += kl_diag(q1, p1, KlMode::StandardGaussian);
    }
    CHECK(kl_diag(q, p, KlMode::StandardGaussian) == doctest::Approx(parts).epsilon(1e-12));
  }
}

TEST_CASE("paper-verbatim formulas match an independent re-derivation") {
  RngStream rng(31, 3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    DiagGaussian q = random_diag(rng, d), p = random_diag(rng, d);
    CHECK(kl_diag(q, p, KlMode::PaperVerbatim) ==
          doctest::Approx(diag_verbatim_oracle(q, p)).epsilon(1e-12));

    IsotropicGaussian qi{q.mean, 0.1 + 2.0 * rng.uniform()};
    IsotropicGaussian pi{std::vector<double>(d, 0.0), 0.1 + 2.0 * rng.uniform()};
    CHECK(kl_hyper(qi, pi, KlMode::PaperVerbatim) ==
          doctest::Approx(hyper_verbatim_oracle(qi, pi.var)).epsilon(1e-12));
  }
}

TEST_CASE("sampling is reproducible per stream position") {
  DiagGaussian g{{0.5, -0.25}, {-2.0, 0.5}};
  RngStream a(42, 9), b(42, 9);
  std::vector<double> ea, eb;
  const auto wa = sample(g, a, &ea);
  const auto wb = sample(g, b, &eb);
  CHECK(wa == wb);
  CHECK(ea == eb);
  // recorded eps reconstructs the draw
  for (std::size_t k = 0; k < g.dim(); ++k)
    CHECK(wa[k] == doctest::Approx(g.mean[k] + std::exp(0.5 * g.log_var[k]) * ea[k]));
}

TEST_CASE("sample mean concentrates at the distribution mean (CLT oracle)") {
  const double mu = 0.7, sd = 0.9;
  DiagGaussian g{{mu}, {2.0 * std::log(sd)}};
  RngStream rng(1234, 11);
  const int N = 1000000;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) acc += sample(g, rng)[0];
  CHECK(std::abs(acc / N - mu) <= 4.0 * sd / 1000.0);
}

TEST_CASE("reparam_grads edge cases and finite-difference oracle") {
  DiagGaussian g{{0.3, -1.0, 0.2}, {-1.0, 0.4, -0.2}};
  std::vector<double> zero_eps(3, 0.0), upstream{1.0, -2.0, 0.5};
  const auto at_mean = reparam_grads(g, zero_eps, upstream);
  CHECK(at_mean.mean == upstream);
  for (double v : at_mean.log_var) CHECK(v == 0.0);

  std::vector<double> eps{0.7, -0.3, 1.2}, zero_up(3, 0.0);
  const auto no_up = reparam_grads(g, eps, zero_up);
  for (double v : no_up.mean) CHECK(v == 0.0);
  for (double v : no_up.log_var) CHECK(v == 0.0);

  // Smooth scalar loss f(w) = sum sin(w_k); check d f / d log_var by central
  // differences through w(logvar) = mean + exp(logvar/2) eps.
  RngStream rng(37, 4);
  for (int rep = 0; rep < 200; ++rep) {
    DiagGaussian h = g;
    for (auto& v : h.mean) v = rng.uniform();
    for (auto& v : h.log_var) v = rng.uniform() - 0.5;
    std::vector<double> e{rng.normal(), rng.normal(), rng.normal()};
    std::vector<double> w(3), up(3);
    for (int k = 0; k < 3; ++k) {
      w[k] = h.mean[k] + std::exp(0.5 * h.log_var[k]) * e[k];
      up[k] = std::cos(w[k]);
    }
    const auto an = reparam_grads(h, e, up);
    const double step = 1e-5;
    for (int k = 0; k < 3; ++k) {
      auto f = [&](double lv) {
        return std::sin(h.mean[k] + std::exp(0.5 * lv) * e[k]);
      };
      const double fd = (f(h.log_var[k] + step) - f(h.log_var[k] - step)) / (2.0 * step);
      CHECK(an.log_var[k] == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}
