#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace metapac {

// Everything a meta-generalization bound consumes. kl_env is D(Q||P) at the
// environment level; kl_task[i] is E_Q[D(Q_i||P(.|U))] for observed task i.
// sigma is the sub-Gaussian parameter of the loss (0.5 for losses in [0,1]).
struct BoundInputs {
  std::int64_t n = 0;  // observed tasks
  std::int64_t m = 0;  // samples per task
  double delta = 0.1;
  double train_loss = 0.0;
  double kl_env = 0.0;
  std::vector<double> kl_task;
  double sigma = 0.5;

  void validate() const;
  static BoundInputs uniform(std::int64_t n, std::int64_t m, double delta, double train_loss,
                             double kl_env, double kl_task_each);
};

// Named bound value with an additive term breakdown: value equals the sum of
// terms (up to round-off), so reports can be audited.
struct BoundReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> terms;
  std::map<std::string, double> hyperparams;

  double term(const std::string& label) const;
};

// Partial derivatives of a bound value with respect to its scalar inputs,
// used to backpropagate through bound objectives.
struct BoundPartials {
  double d_train = 0.0;
  double d_kl_env = 0.0;
  std::vector<double> d_kl_task;
};

// ---------------------------------------------------------------------------
// Generic corollary machinery: a per-level convex function F(a,b) <= c is
// turned into a <= T(b, c). All rows of interest use an affine transform
// a <= k*b + Ginv(c) except the quadratic-kl relaxation
// a <= (sqrt(b + c') + sqrt(c'))^2 with c' = c/(2*q_scale).
// ---------------------------------------------------------------------------

struct TransformSpec {
  enum class Kind { Affine, QuadraticKl } kind = Kind::Affine;
  enum class GInv { SqrtDiv, LinearDiv } ginv = GInv::SqrtDiv;
  double k = 1.0;        // coefficient on b (Affine)
  double g_scale = 1.0;  // Ginv(c) = sqrt(c/g_scale) or c/g_scale
  double q_scale = 1.0;  // QuadraticKl budget divisor (the per-level m)

  static TransformSpec affine_sqrt(double k, double g_scale);
  static TransformSpec affine_linear(double k, double g_scale);
  static TransformSpec quadratic_kl(double q_scale);
};

// Which convex function the level uses; descriptive plus domain checks.
struct ConvexSpec {
  enum class Kind { Quadratic, Linear, ScaledKl, ScaledDGamma } kind = Kind::Quadratic;
  double coef = 1.0;   // Quadratic coefficient / ScaledKl / ScaledDGamma scale
  double gamma = 0.0;  // ScaledDGamma only; inversion needs -1/gamma > 0.5
  TransformSpec transform;

  void validate() const;
};

// Closed-form certified constant bounding a per-level log-moment term.
struct LogMomentBound {
  enum class Lemma {
    SubGaussSq1,    // E e^{lam * l * Delta^2} <= 1/(1 - 2 lam sigma^2)
    SubGaussSqHalf, // ... <= 1/sqrt(1 - 2 lam sigma^2)
    Maurer2SqrtN,   // E e^{n kl(Lhat, L)} <= 2 sqrt(n), n > 8
    DGammaOne,      // E e^{n D_gamma(Lhat || L)} <= 1
    SubGaussMgf,    // E e^{theta Delta} <= e^{theta^2 sigma^2 / (2 l)}
  };
  double value = 1.0;
  Lemma lemma = Lemma::DGammaOne;
};

// Evaluates the corollary composition
//   value = T_env( (1/n) sum_i T_task(train, B_task_i), B_env )
// with B_env = (kl_env + log(2 lm_env / delta)) / theta_env and
// B_task_i = (kl_env + kl_task_i + log(2 n lm_task / delta)) / theta_tsk,
// which for affine transforms equals
//   k_e k_t train + Ginv_e(B_env) + (k_e/n) sum_i Ginv_t(B_task_i).
BoundReport generic_corollary_bound(const BoundInputs& in, const ConvexSpec& f_task,
                                    const ConvexSpec& f_env, double theta_tsk, double theta_env,
                                    const LogMomentBound& lm_task, const LogMomentBound& lm_env);

// ---------------------------------------------------------------------------
// Specialized evaluators. Each returns a loss bound (value >= train term) with
// an additive term breakdown; gap-style bounds report the gap as its own term.
// ---------------------------------------------------------------------------

BoundReport bound_mlap(const BoundInputs& in, BoundPartials* partials = nullptr);

enum class PacohForm {
  AsPrinted,            // unaveraged sum over task KLs, constants as printed
  AsPrintedNormalized,  // same but task-KL sum divided by n
  Corollary,            // exact corollary composition with sub-Gaussian MGF log-moments
};
BoundReport bound_pacoh(const BoundInputs& in, double lambda, double beta,
                        PacohForm form = PacohForm::AsPrinted, BoundPartials* partials = nullptr);

BoundReport bound_lambda_liu(const BoundInputs& in, double lambda,
                             BoundPartials* partials = nullptr);

enum class MysVariant { Classic, Quadratic, Lambda };
BoundReport bound_mys(const BoundInputs& in, MysVariant variant, double lambda = 1.0,
                      BoundPartials* partials = nullptr);

BoundReport bound_fast_rate(const BoundInputs& in, double lambda_e, double lambda_t,
                            BoundPartials* partials = nullptr);

BoundReport bound_new_classic(const BoundInputs& in, BoundPartials* partials = nullptr);

BoundReport bound_sqrt_k(const BoundInputs& in, std::int64_t k, BoundPartials* partials = nullptr);

BoundReport bound_st_markov(const BoundInputs& in, BoundPartials* partials = nullptr);

// Single-task McAllester bound train + sqrt((kl + log(m/delta)) / (2(m-1))).
double bound_single_task_mcallester(std::int64_t m, double delta, double kl, double train);

// ---------------------------------------------------------------------------
// Dispatch and hyperparameter search.
// ---------------------------------------------------------------------------

// Canonical evaluator names: mlap, pacoh, lambda-liu, mys-classic,
// mys-quadratic, mys-lambda, fast-rate, new-classic, sqrt-k, st-markov.
const std::vector<std::string>& bound_names();

// Hyperparameter axes an evaluator expects (empty for parameter-free bounds):
// pacoh: lambda, beta; lambda-liu/mys-lambda: lambda; fast-rate: lambda_e,
// lambda_t; sqrt-k: k.
std::vector<std::string> bound_hyper_axes(const std::string& name);

BoundReport eval_bound(const std::string& name, const BoundInputs& in,
                       const std::map<std::string, double>& hypers,
                       BoundPartials* partials = nullptr);

struct GridAxis {
  std::string name;
  std::vector<double> points;
};

// Exhaustive grid minimization. Invalid points (domain errors) are skipped;
// ties break toward the lexicographically smallest hyperparameter tuple in
// axis order. Throws DomainError when every point is invalid.
std::pair<std::map<std::string, double>, BoundReport> optimize_hyperparams(
    const std::string& name, const BoundInputs& in, const std::vector<GridAxis>& grid);

// Default log-spaced grid (25 points per axis) for an evaluator's axes.
std::vector<GridAxis> default_grid(const std::string& name, const BoundInputs& in);

}  // namespace metapac
