#include "core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace metapac {

namespace {

double ln(double x) { return std::log(x); }

// d/dx sqrt((x + rest)/scale) = 1 / (2 sqrt(scale (x + rest)))
double d_sqrt_ratio(double numerator, double scale) {
  return 1.0 / (2.0 * std::sqrt(scale * numerator));
}

double sum(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

void BoundInputs::validate() const {
  require(n >= 1, "BoundInputs.n must be >= 1");
  require(m >= 1, "BoundInputs.m must be >= 1");
  require(delta > 0.0 && delta < 1.0, "BoundInputs.delta must lie in (0,1)");
  require(train_loss >= 0.0 && train_loss <= 1.0, "BoundInputs.train_loss must lie in [0,1]");
  require(kl_env >= 0.0, "BoundInputs.kl_env must be >= 0");
  require(static_cast<std::int64_t>(kl_task.size()) == n,
          "BoundInputs.kl_task length must equal n");
  for (double k : kl_task) require(k >= 0.0, "BoundInputs.kl_task entries must be >= 0");
  require(sigma > 0.0, "BoundInputs.sigma must be > 0");
}

BoundInputs BoundInputs::uniform(std::int64_t n, std::int64_t m, double delta, double train_loss,
                                 double kl_env, double kl_task_each) {
  BoundInputs in;
  in.n = n;
  in.m = m;
  in.delta = delta;
  in.train_loss = train_loss;
  in.kl_env = kl_env;
  in.kl_task.assign(static_cast<std::size_t>(n), kl_task_each);
  return in;
}

double BoundReport::term(const std::string& label) const {
  for (const auto& [name, value] : terms)
    if (name == label) return value;
  throw DomainError("BoundReport has no term '" + label + "'");
}

// ---------------------------------------------------------------------------
// Generic corollary machinery
// ---------------------------------------------------------------------------

TransformSpec TransformSpec::affine_sqrt(double k, double g_scale) {
  TransformSpec t;
  t.kind = Kind::Affine;
  t.ginv = GInv::SqrtDiv;
  t.k = k;
  t.g_scale = g_scale;
  return t;
}

TransformSpec TransformSpec::affine_linear(double k, double g_scale) {
  TransformSpec t;
  t.kind = Kind::Affine;
  t.ginv = GInv::LinearDiv;
  t.k = k;
  t.g_scale = g_scale;
  return t;
}

TransformSpec TransformSpec::quadratic_kl(double q_scale) {
  TransformSpec t;
  t.kind = Kind::QuadraticKl;
  t.q_scale = q_scale;
  return t;
}

void ConvexSpec::validate() const {
  require(coef > 0.0, "ConvexSpec.coef must be > 0");
  if (kind == Kind::ScaledDGamma)
    require(gamma < 0.0 && -1.0 / gamma > 0.5,
            "ScaledDGamma inversion requires lambda = -1/gamma > 0.5");
  if (transform.kind == TransformSpec::Kind::Affine) {
    require(transform.k > 0.0, "TransformSpec.k must be > 0");
    require(transform.g_scale > 0.0, "TransformSpec.g_scale must be > 0");
  } else {
    require(transform.q_scale > 0.0, "TransformSpec.q_scale must be > 0");
  }
}

namespace {

double apply_transform(const TransformSpec& t, double b, double c) {
  if (t.kind == TransformSpec::Kind::Affine) {
    const double ginv =
        t.ginv == TransformSpec::GInv::SqrtDiv ? std::sqrt(c / t.g_scale) : c / t.g_scale;
    return t.k * b + ginv;
  }
  const double cp = c / (2.0 * t.q_scale);
  const double root = std::sqrt(b + cp) + std::sqrt(cp);
  return root * root;
}

}  // namespace

BoundReport generic_corollary_bound(const BoundInputs& in, const ConvexSpec& f_task,
                                    const ConvexSpec& f_env, double theta_tsk, double theta_env,
                                    const LogMomentBound& lm_task, const LogMomentBound& lm_env) {
  in.validate();
  f_task.validate();
  f_env.validate();
  require(theta_tsk > 0.0 && theta_env > 0.0, "theta_tsk and theta_env must be > 0");
  require(lm_task.value > 0.0 && lm_env.value > 0.0, "log-moment constants must be > 0");
  require(f_env.transform.kind == TransformSpec::Kind::Affine,
          "environment-level transform must be affine");

  const double n = static_cast<double>(in.n);
  const double b_env = (in.kl_env + ln(2.0 * lm_env.value / in.delta)) / theta_env;
  const double log_task = ln(2.0 * n * lm_task.value / in.delta);

  double task_val = 0.0;
  for (double kt : in.kl_task) {
    const double b_task = (in.kl_env + kt + log_task) / theta_tsk;
    task_val += apply_transform(f_task.transform, in.train_loss, b_task);
  }
  task_val /= n;

  BoundReport rep;
  rep.name = "generic";
  const double k_e = f_env.transform.k;
  const double env_term = apply_transform(f_env.transform, 0.0, b_env);
  if (f_task.transform.kind == TransformSpec::Kind::Affine) {
    const double train_term = k_e * f_task.transform.k * in.train_loss;
    const double task_term = k_e * (task_val - f_task.transform.k * in.train_loss);
    rep.terms = {{"train_term", train_term}, {"task_term", task_term}, {"env_term", env_term}};
    rep.value = train_term + task_term + env_term;
  } else {
    const double task_level = k_e * task_val;
    rep.terms = {{"task_level", task_level}, {"env_term", env_term}};
    rep.value = task_level + env_term;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Specialized evaluators
// ---------------------------------------------------------------------------

namespace {

void init_partials(BoundPartials* p, std::int64_t n) {
  if (!p) return;
  p->d_train = 0.0;
  p->d_kl_env = 0.0;
  p->d_kl_task.assign(static_cast<std::size_t>(n), 0.0);
}

}  // namespace

BoundReport bound_mlap(const BoundInputs& in, BoundPartials* partials) {
  in.validate();
  require(in.n >= 2 && in.m >= 2, "mlap requires n >= 2 and m >= 2");
  init_partials(partials, in.n);
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double env_scale = 2.0 * (n - 1.0), task_scale = 2.0 * (m - 1.0);
  const double env_num = in.kl_env + ln(2.0 * n / in.delta);
  const double env_gap = std::sqrt(env_num / env_scale);
  const double log_task = ln(2.0 * n * m / in.delta);

  double task_gap = 0.0;
  for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
    const double num = in.kl_env + in.kl_task[i] + log_task;
    task_gap += std::sqrt(num / task_scale);
    if (partials) {
      const double d = d_sqrt_ratio(num, task_scale) / n;
      partials->d_kl_task[i] = d;
      partials->d_kl_env += d;
    }
  }
  task_gap /= n;

  if (partials) {
    partials->d_train = 1.0;
    partials->d_kl_env += d_sqrt_ratio(env_num, env_scale);
  }

  BoundReport rep;
  rep.name = "mlap";
  rep.terms = {{"train", in.train_loss}, {"env_gap", env_gap}, {"task_gap", task_gap}};
  rep.value = in.train_loss + env_gap + task_gap;
  return rep;
}

BoundReport bound_pacoh(const BoundInputs& in, double lambda, double beta, PacohForm form,
                        BoundPartials* partials) {
  in.validate();
  require(lambda > 0.0 && beta > 0.0, "pacoh requires lambda > 0 and beta > 0");
  init_partials(partials, in.n);
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double kl_sum = sum(in.kl_task);

  BoundReport rep;
  rep.name = "pacoh";
  rep.hyperparams = {{"lambda", lambda}, {"beta", beta}};

  if (form == PacohForm::Corollary) {
    const double s2 = in.sigma * in.sigma;
    const double mgf = lambda * s2 / (2.0 * n) + beta * s2 / (2.0 * m);
    const double confidence = ln(2.0 / in.delta) / lambda + ln(2.0 * n / in.delta) / beta;
    const double task_kl = kl_sum / (beta * n);
    const double env_kl = (1.0 / beta + 1.0 / lambda) * in.kl_env;
    rep.terms = {{"train", in.train_loss},
                 {"mgf", mgf},
                 {"confidence", confidence},
                 {"task_kl", task_kl},
                 {"env_kl", env_kl}};
    rep.value = in.train_loss + mgf + confidence + task_kl + env_kl;
    if (partials) {
      partials->d_train = 1.0;
      partials->d_kl_env = 1.0 / beta + 1.0 / lambda;
      std::fill(partials->d_kl_task.begin(), partials->d_kl_task.end(), 1.0 / (beta * n));
    }
    return rep;
  }

  const bool normalized = form == PacohForm::AsPrintedNormalized;
  const double mgf = lambda / (8.0 * n) + lambda / (8.0 * m);
  const double confidence = -ln(in.delta) / std::sqrt(n);
  const double task_kl = normalized ? kl_sum / (beta * n) : kl_sum / beta;
  const double env_kl = (1.0 / beta + 1.0 / lambda) * in.kl_env;
  rep.terms = {{"train", in.train_loss},
               {"mgf", mgf},
               {"confidence", confidence},
               {"task_kl", task_kl},
               {"env_kl", env_kl}};
  rep.value = in.train_loss + mgf + confidence + task_kl + env_kl;
  if (partials) {
    partials->d_train = 1.0;
    partials->d_kl_env = 1.0 / beta + 1.0 / lambda;
    const double d = normalized ? 1.0 / (beta * n) : 1.0 / beta;
    std::fill(partials->d_kl_task.begin(), partials->d_kl_task.end(), d);
  }
  return rep;
}

BoundReport bound_lambda_liu(const BoundInputs& in, double lambda, BoundPartials* partials) {
  in.validate();
  require(lambda > 0.0 && lambda < 2.0, "lambda-liu requires lambda in (0,2)");
  require(in.n >= 2, "lambda-liu requires n >= 2");
  init_partials(partials, in.n);
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double k_t = 1.0 / (1.0 - 0.5 * lambda);
  const double env_scale = 2.0 * (n - 1.0);
  const double env_num = in.kl_env + ln(2.0 * n / in.delta);
  const double env_gap = std::sqrt(env_num / env_scale);
  const double log_task = ln(4.0 * n * std::sqrt(m) / in.delta);
  const double task_scale = m * lambda * (1.0 - 0.5 * lambda);

  double task_term = 0.0;
  for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
    task_term += (in.kl_env + in.kl_task[i] + log_task) / task_scale;
    if (partials) {
      partials->d_kl_task[i] = 1.0 / (n * task_scale);
      partials->d_kl_env += 1.0 / (n * task_scale);
    }
  }
  task_term /= n;

  if (partials) {
    partials->d_train = k_t;
    partials->d_kl_env += d_sqrt_ratio(env_num, env_scale);
  }

  BoundReport rep;
  rep.name = "lambda-liu";
  rep.hyperparams = {{"lambda", lambda}};
  const double train_scaled = k_t * in.train_loss;
  rep.terms = {{"train_scaled", train_scaled}, {"env_gap", env_gap}, {"task_term", task_term}};
  rep.value = train_scaled + env_gap + task_term;
  return rep;
}

BoundReport bound_mys(const BoundInputs& in, MysVariant variant, double lambda,
                      BoundPartials* partials) {
  in.validate();
  if (variant == MysVariant::Lambda)
    require(lambda > 0.0 && lambda < 2.0, "mys-lambda requires lambda in (0,2)");
  init_partials(partials, in.n);
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  // Maurer log-moment constants 2 sqrt(m) / 2 sqrt(n) with the delta/2 and
  // delta/(2n) budget split folded in.
  const double env_num = in.kl_env + ln(4.0 * std::sqrt(n) / in.delta);
  const double env_scale = 2.0 * n;
  const double env_gap = std::sqrt(env_num / env_scale);
  const double log_task = ln(4.0 * n * std::sqrt(m) / in.delta);

  BoundReport rep;
  rep.hyperparams = variant == MysVariant::Lambda
                        ? std::map<std::string, double>{{"lambda", lambda}}
                        : std::map<std::string, double>{};

  if (variant == MysVariant::Classic) {
    rep.name = "mys-classic";
    const double task_scale = 2.0 * m;
    double task_gap = 0.0;
    for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
      const double num = in.kl_env + in.kl_task[i] + log_task;
      task_gap += std::sqrt(num / task_scale);
      if (partials) {
        const double d = d_sqrt_ratio(num, task_scale) / n;
        partials->d_kl_task[i] = d;
        partials->d_kl_env += d;
      }
    }
    task_gap /= n;
    if (partials) {
      partials->d_train = 1.0;
      partials->d_kl_env += d_sqrt_ratio(env_num, env_scale);
    }
    rep.terms = {{"train", in.train_loss}, {"env_gap", env_gap}, {"task_gap", task_gap}};
    rep.value = in.train_loss + env_gap + task_gap;
    return rep;
  }

  if (variant == MysVariant::Quadratic) {
    rep.name = "mys-quadratic";
    // From m*kl <= B the per-task budget is c = B/m and the population term
    // obeys b <= (sqrt(train + c/2) + sqrt(c/2))^2.
    double task_level = 0.0;
    for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
      const double half_c = (in.kl_env + in.kl_task[i] + log_task) / (2.0 * m);
      const double ra = std::sqrt(in.train_loss + half_c), rb = std::sqrt(half_c);
      task_level += (ra + rb) * (ra + rb);
      if (partials) {
        partials->d_train += (ra + rb) / (ra * n);
        const double d_half_c = (ra + rb) * (1.0 / ra + 1.0 / rb) / n;
        partials->d_kl_task[i] = d_half_c / (2.0 * m);
        partials->d_kl_env += d_half_c / (2.0 * m);
      }
    }
    task_level /= n;
    if (partials) partials->d_kl_env += d_sqrt_ratio(env_num, env_scale);
    rep.terms = {{"task_level", task_level}, {"env_gap", env_gap}};
    rep.value = task_level + env_gap;
    return rep;
  }

  rep.name = "mys-lambda";
  const double k_t = 1.0 / (1.0 - 0.5 * lambda);
  const double task_scale = m * lambda * (1.0 - 0.5 * lambda);
  double task_term = 0.0;
  for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
    task_term += (in.kl_env + in.kl_task[i] + log_task) / task_scale;
    if (partials) {
      partials->d_kl_task[i] = 1.0 / (n * task_scale);
      partials->d_kl_env += 1.0 / (n * task_scale);
    }
  }
  task_term /= n;
  if (partials) {
    partials->d_train = k_t;
    partials->d_kl_env += d_sqrt_ratio(env_num, env_scale);
  }
  const double train_scaled = k_t * in.train_loss;
  rep.terms = {{"train_scaled", train_scaled}, {"env_gap", env_gap}, {"task_term", task_term}};
  rep.value = train_scaled + env_gap + task_term;
  return rep;
}

BoundReport bound_fast_rate(const BoundInputs& in, double lambda_e, double lambda_t,
                            BoundPartials* partials) {
  in.validate();
  require(lambda_e > 0.5 && lambda_t > 0.5, "fast-rate requires lambda_e, lambda_t > 0.5");
  init_partials(partials, in.n);
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double c_e = 1.0 / (1.0 - 1.0 / (2.0 * lambda_e));
  const double c_t = 1.0 / (1.0 - 1.0 / (2.0 * lambda_t));
  const double train_scaled = c_e * c_t * in.train_loss;
  const double env_term = c_e * lambda_e * (in.kl_env + ln(2.0 / in.delta)) / n;
  const double log_task = ln(2.0 * n / in.delta);

  double task_term = 0.0;
  for (std::size_t i = 0; i < in.kl_task.size(); ++i) {
    task_term += (in.kl_env + in.kl_task[i] + log_task) / m;
    if (partials) partials->d_kl_task[i] = c_e * c_t * lambda_t / (n * m);
  }
  task_term *= c_e * c_t * lambda_t / n;

  if (partials) {
    partials->d_train = c_e * c_t;
    partials->d_kl_env = c_e * lambda_e / n + c_e * c_t * lambda_t / m;
  }

  BoundReport rep;
  rep.name = "fast-rate";
  rep.hyperparams = {{"lambda_e", lambda_e}, {"lambda_t", lambda_t}};
  rep.terms = {{"train_scaled", train_scaled}, {"env_term", env_term}, {"task_term", task_term}};
  rep.value = train_scaled + env_term + task_term;
  return rep;
}

namespace {

// Shared single-square assembly: value = train + factor * sqrt(S) with
// S = kl_env_coef * kl_env + mean(kl_task) + log_term.
BoundReport single_square(const char* name, const BoundInputs& in, double factor,
                          double kl_env_coef, double log_term, BoundPartials* partials) {
  const double n = static_cast<double>(in.n);
  const double S = kl_env_coef * in.kl_env + sum(in.kl_task) / n + log_term;
  const double gap = factor * std::sqrt(S);
  if (partials) {
    init_partials(partials, in.n);
    partials->d_train = 1.0;
    const double d_S = factor / (2.0 * std::sqrt(S));
    partials->d_kl_env = d_S * kl_env_coef;
    std::fill(partials->d_kl_task.begin(), partials->d_kl_task.end(), d_S / n);
  }
  BoundReport rep;
  rep.name = name;
  rep.terms = {{"train", in.train_loss}, {"gap", gap}};
  rep.value = in.train_loss + gap;
  return rep;
}

}  // namespace

BoundReport bound_new_classic(const BoundInputs& in, BoundPartials* partials) {
  in.validate();
  require(in.n >= 2 && in.m >= 2, "new-classic requires n >= 2 and m >= 2");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double factor = std::sqrt(((n - 1.0) + 2.0 * (m - 1.0)) / (2.0 * (n - 1.0) * (m - 1.0)));
  const double log_term = ln(m * std::sqrt(n) / in.delta);
  return single_square("new-classic", in, factor, 2.0, log_term, partials);
}

BoundReport bound_sqrt_k(const BoundInputs& in, std::int64_t k, BoundPartials* partials) {
  in.validate();
  require(k >= 1, "sqrt-k requires k >= 1");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double kd = static_cast<double>(k);
  const double a = n - std::pow(n, 1.0 / (2.0 * kd));
  const double b = m - std::pow(m, 1.0 / (2.0 * kd));
  require(a > 0.0 && b > 0.0, "sqrt-k requires n - n^(1/2k) > 0 and m - m^(1/2k) > 0");
  const double factor = std::sqrt((a + 2.0 * b) / (2.0 * a * b));
  const double exponent = 0.5 - 1.0 / (4.0 * kd);
  const double log_term = exponent * ln(std::sqrt(n) * m) - ln(in.delta);
  BoundReport rep = single_square("sqrt-k", in, factor, 2.0, log_term, partials);
  rep.hyperparams = {{"k", kd}};
  return rep;
}

BoundReport bound_st_markov(const BoundInputs& in, BoundPartials* partials) {
  in.validate();
  require(in.n >= 2, "st-markov requires n >= 2");
  const double n = static_cast<double>(in.n), m = static_cast<double>(in.m);
  const double factor = std::sqrt((0.5 * n + m) / (0.5 * n * m));
  const double log_term = ln(2.0 * std::sqrt(2.0) / in.delta);
  return single_square("st-markov", in, factor, 1.0, log_term, partials);
}

double bound_single_task_mcallester(std::int64_t m, double delta, double kl, double train) {
  require(m >= 2, "single-task bound requires m >= 2");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(kl >= 0.0, "kl must be >= 0");
  require(train >= 0.0 && train <= 1.0, "train must lie in [0,1]");
  const double md = static_cast<double>(m);
  return train + std::sqrt((kl + ln(md / delta)) / (2.0 * (md - 1.0)));
}

// ---------------------------------------------------------------------------
// Dispatch and hyperparameter search
// ---------------------------------------------------------------------------

const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {
      "fast-rate", "lambda-liu", "mlap",     "mys-classic", "mys-lambda",
      "mys-quadratic", "new-classic", "pacoh", "sqrt-k",      "st-markov"};
  return names;
}

std::vector<std::string> bound_hyper_axes(const std::string& name) {
  if (name == "pacoh") return {"lambda", "beta"};
  if (name == "lambda-liu" || name == "mys-lambda") return {"lambda"};
  if (name == "fast-rate") return {"lambda_e", "lambda_t"};
  if (name == "sqrt-k") return {"k"};
  if (std::find(bound_names().begin(), bound_names().end(), name) != bound_names().end())
    return {};
  throw DomainError("unknown bound '" + name + "'");
}

namespace {

double hyper_or(const std::map<std::string, double>& hypers, const std::string& key,
                double fallback) {
  auto it = hypers.find(key);
  return it == hypers.end() ? fallback : it->second;
}

}  // namespace

BoundReport eval_bound(const std::string& name, const BoundInputs& in,
                       const std::map<std::string, double>& hypers, BoundPartials* partials) {
  if (name == "mlap") return bound_mlap(in, partials);
  if (name == "pacoh")
    return bound_pacoh(in, hyper_or(hypers, "lambda", 1.0), hyper_or(hypers, "beta", 1.0),
                       PacohForm::AsPrinted, partials);
  if (name == "lambda-liu") return bound_lambda_liu(in, hyper_or(hypers, "lambda", 1.0), partials);
  if (name == "mys-classic") return bound_mys(in, MysVariant::Classic, 1.0, partials);
  if (name == "mys-quadratic") return bound_mys(in, MysVariant::Quadratic, 1.0, partials);
  if (name == "mys-lambda")
    return bound_mys(in, MysVariant::Lambda, hyper_or(hypers, "lambda", 1.0), partials);
  if (name == "fast-rate")
    return bound_fast_rate(in, hyper_or(hypers, "lambda_e", 1.0),
                           hyper_or(hypers, "lambda_t", 1.0), partials);
  if (name == "new-classic") return bound_new_classic(in, partials);
  if (name == "sqrt-k")
    return bound_sqrt_k(in, static_cast<std::int64_t>(hyper_or(hypers, "k", 1.0)), partials);
  if (name == "st-markov") return bound_st_markov(in, partials);
  throw DomainError("unknown bound '" + name + "'");
}

std::pair<std::map<std::string, double>, BoundReport> optimize_hyperparams(
    const std::string& name, const BoundInputs& in, const std::vector<GridAxis>& grid) {
  const auto axes = bound_hyper_axes(name);
  if (grid.empty() || axes.empty()) {
    // Parameter-free bound or no search requested: singleton evaluation.
    std::map<std::string, double> hypers;
    for (const auto& axis : grid)
      if (!axis.points.empty()) hypers[axis.name] = axis.points.front();
    return {hypers, eval_bound(name, in, hypers)};
  }
  for (const auto& axis : grid) {
    require(!axis.points.empty(), "grid axis '" + axis.name + "' is empty");
    require(std::find(axes.begin(), axes.end(), axis.name) != axes.end(),
            "bound '" + name + "' has no hyperparameter '" + axis.name + "'");
  }

  std::vector<std::size_t> idx(grid.size(), 0);
  bool have_best = false;
  std::map<std::string, double> best_hypers;
  BoundReport best;
  while (true) {
    std::map<std::string, double> hypers;
    for (std::size_t a = 0; a < grid.size(); ++a) hypers[grid[a].name] = grid[a].points[idx[a]];
    try {
      BoundReport rep = eval_bound(name, in, hypers);
      // Lexicographic iteration order plus strict improvement gives the
      // smallest tuple on ties.
      if (!have_best || rep.value < best.value) {
        have_best = true;
        best = std::move(rep);
        best_hypers = std::move(hypers);
      }
    } catch (const DomainError&) {
      // invalid grid point, skip
    }
    std::size_t a = grid.size();
    while (a > 0) {
      --a;
      if (++idx[a] < grid[a].points.size()) break;
      idx[a] = 0;
      if (a == 0) {
        if (!have_best) throw DomainError("every grid point was invalid for '" + name + "'");
        return {best_hypers, best};
      }
    }
  }
}

std::vector<GridAxis> default_grid(const std::string& name, const BoundInputs&) {
  auto logspace = [](double lo, double hi, int k) {
    std::vector<double> pts(static_cast<std::size_t>(k));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < k; ++i)
      pts[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (k - 1));
    return pts;
  };
  if (name == "pacoh") {
    auto pts = logspace(0.1, 100.0, 25);
    return {{"lambda", pts}, {"beta", pts}};
  }
  if (name == "lambda-liu" || name == "mys-lambda") return {{"lambda", logspace(0.02, 1.98, 25)}};
  if (name == "fast-rate") {
    auto pts = logspace(0.51, 50.0, 25);
    return {{"lambda_e", pts}, {"lambda_t", pts}};
  }
  if (name == "sqrt-k") {
    std::vector<double> pts;
    for (int k = 1; k <= 25; ++k) pts.push_back(static_cast<double>(k));
    return {{"k", pts}};
  }
  bound_hyper_axes(name);  // validates the name
  return {};
}

}  // namespace metapac
