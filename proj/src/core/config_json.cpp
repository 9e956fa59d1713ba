#include "core/config_json.hpp"

#include <fstream>
#include <set>

#include "core/errors.hpp"

namespace metapac {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(prefix + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown field " + prefix + "." + it.key());
}

template <typename T>
T field_or(const json& j, const std::string& prefix, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(prefix + "." + key + " has the wrong type");
  }
}

}  // namespace

TrainConfig train_config_from_json(const json& j, const std::string& prefix) {
  check_keys(j, prefix,
             {"bound", "bound_hypers", "lr", "epochs", "mc_samples_u", "mc_samples_w", "delta",
              "seed", "loss", "kappa_p_sq", "kappa_s_sq", "freeze_prior_vars",
              "resample_per_epoch", "adapt_epochs", "mc_eval"});
  TrainConfig cfg;
  cfg.bound = field_or<std::string>(j, prefix, "bound", cfg.bound);
  if (j.contains("bound_hypers")) {
    if (!j.at("bound_hypers").is_object())
      throw ConfigError(prefix + ".bound_hypers must be an object of numbers");
    for (auto it = j.at("bound_hypers").begin(); it != j.at("bound_hypers").end(); ++it) {
      if (!it.value().is_number())
        throw ConfigError(prefix + ".bound_hypers." + it.key() + " must be a number");
      cfg.bound_hypers[it.key()] = it.value().get<double>();
    }
  }
  cfg.lr = field_or<double>(j, prefix, "lr", cfg.lr);
  cfg.epochs = field_or<std::int64_t>(j, prefix, "epochs", cfg.epochs);
  cfg.mc_samples_u = field_or<std::int64_t>(j, prefix, "mc_samples_u", cfg.mc_samples_u);
  cfg.mc_samples_w = field_or<std::int64_t>(j, prefix, "mc_samples_w", cfg.mc_samples_w);
  cfg.delta = field_or<double>(j, prefix, "delta", cfg.delta);
  cfg.seed = field_or<std::uint64_t>(j, prefix, "seed", cfg.seed);
  const std::string loss = field_or<std::string>(j, prefix, "loss", "exp-square");
  if (loss == "exp-square")
    cfg.loss = LossKind::ExpSquare;
  else if (loss == "clipped-square")
    cfg.loss = LossKind::ClippedSquare;
  else
    throw ConfigError(prefix + ".loss must be 'exp-square' or 'clipped-square'");
  cfg.kappa_p_sq = field_or<double>(j, prefix, "kappa_p_sq", cfg.kappa_p_sq);
  cfg.kappa_s_sq = field_or<double>(j, prefix, "kappa_s_sq", cfg.kappa_s_sq);
  cfg.freeze_prior_vars = field_or<bool>(j, prefix, "freeze_prior_vars", cfg.freeze_prior_vars);
  cfg.resample_per_epoch =
      field_or<bool>(j, prefix, "resample_per_epoch", cfg.resample_per_epoch);
  cfg.adapt_epochs = field_or<std::int64_t>(j, prefix, "adapt_epochs", cfg.adapt_epochs);
  cfg.mc_eval = field_or<std::int64_t>(j, prefix, "mc_eval", cfg.mc_eval);
  cfg.validate();
  return cfg;
}

json train_config_to_json(const TrainConfig& cfg) {
  return json{{"bound", cfg.bound},
              {"bound_hypers", cfg.bound_hypers},
              {"lr", cfg.lr},
              {"epochs", cfg.epochs},
              {"mc_samples_u", cfg.mc_samples_u},
              {"mc_samples_w", cfg.mc_samples_w},
              {"delta", cfg.delta},
              {"seed", cfg.seed},
              {"loss", cfg.loss == LossKind::ExpSquare ? "exp-square" : "clipped-square"},
              {"kappa_p_sq", cfg.kappa_p_sq},
              {"kappa_s_sq", cfg.kappa_s_sq},
              {"freeze_prior_vars", cfg.freeze_prior_vars},
              {"resample_per_epoch", cfg.resample_per_epoch},
              {"adapt_epochs", cfg.adapt_epochs},
              {"mc_eval", cfg.mc_eval}};
}

SyntheticEnvSpec synth_spec_from_json(const json& j, const std::string& prefix) {
  check_keys(j, prefix,
             {"dim", "env_mean", "tau_sq", "obs_noise", "m", "n", "n_test_tasks", "m_test",
              "seed"});
  SyntheticEnvSpec spec;
  spec.dim = field_or<std::int64_t>(j, prefix, "dim", spec.dim);
  if (j.contains("env_mean")) {
    try {
      spec.env_mean = j.at("env_mean").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError(prefix + ".env_mean must be an array of numbers");
    }
  }
  spec.tau_sq = field_or<double>(j, prefix, "tau_sq", spec.tau_sq);
  spec.obs_noise = field_or<double>(j, prefix, "obs_noise", spec.obs_noise);
  spec.m = field_or<std::int64_t>(j, prefix, "m", spec.m);
  spec.n = field_or<std::int64_t>(j, prefix, "n", spec.n);
  spec.n_test_tasks = field_or<std::int64_t>(j, prefix, "n_test_tasks", spec.n_test_tasks);
  spec.m_test = field_or<std::int64_t>(j, prefix, "m_test", spec.m_test);
  spec.seed = field_or<std::uint64_t>(j, prefix, "seed", spec.seed);
  spec.validate();
  return spec;
}

json synth_spec_to_json(const SyntheticEnvSpec& spec) {
  return json{{"dim", spec.dim},         {"env_mean", spec.resolved_mean()},
              {"tau_sq", spec.tau_sq},   {"obs_noise", spec.obs_noise},
              {"m", spec.m},             {"n", spec.n},
              {"n_test_tasks", spec.n_test_tasks}, {"m_test", spec.m_test},
              {"seed", spec.seed}};
}

CoverageConfig coverage_config_from_json(const json& j, const std::string& prefix) {
  check_keys(j, prefix,
             {"bound", "bound_hypers", "trials", "delta", "env", "fit", "risk_u_samples",
              "risk_tasks", "risk_w_samples", "seed", "threads"});
  CoverageConfig cfg;
  cfg.bound = field_or<std::string>(j, prefix, "bound", cfg.bound);
  if (j.contains("bound_hypers"))
    for (auto it = j.at("bound_hypers").begin(); it != j.at("bound_hypers").end(); ++it)
      cfg.bound_hypers[it.key()] = it.value().get<double>();
  cfg.trials = field_or<std::int64_t>(j, prefix, "trials", cfg.trials);
  cfg.delta = field_or<double>(j, prefix, "delta", cfg.delta);
  if (j.contains("env")) cfg.env = synth_spec_from_json(j.at("env"), prefix + ".env");
  if (j.contains("fit")) cfg.fit = train_config_from_json(j.at("fit"), prefix + ".fit");
  cfg.risk_u_samples = field_or<std::int64_t>(j, prefix, "risk_u_samples", cfg.risk_u_samples);
  cfg.risk_tasks = field_or<std::int64_t>(j, prefix, "risk_tasks", cfg.risk_tasks);
  cfg.risk_w_samples = field_or<std::int64_t>(j, prefix, "risk_w_samples", cfg.risk_w_samples);
  cfg.seed = field_or<std::uint64_t>(j, prefix, "seed", cfg.seed);
  cfg.threads = field_or<std::int64_t>(j, prefix, "threads", cfg.threads);
  return cfg;
}

void save_state(const MetaState& state, const std::string& path) {
  state.validate();
  json tasks = json::array();
  for (const auto& q : state.per_task)
    tasks.push_back(json{{"mean", q.mean}, {"log_var", q.log_var}});
  const json doc = {{"version", 1},
                    {"theta", state.theta},
                    {"kappa_s_sq", state.kappa_s_sq},
                    {"kappa_p_sq", state.kappa_p_sq},
                    {"per_task", tasks}};
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << "\n";
}

MetaState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open state file '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw FormatError("state file is not valid JSON");
  if (!doc.contains("version") || doc["version"].get<int>() != 1)
    throw FormatError("unsupported state schema version");
  MetaState st;
  st.theta = doc.at("theta").get<std::vector<double>>();
  st.kappa_s_sq = doc.at("kappa_s_sq").get<double>();
  st.kappa_p_sq = doc.at("kappa_p_sq").get<double>();
  for (const auto& t : doc.at("per_task")) {
    DiagGaussian q;
    q.mean = t.at("mean").get<std::vector<double>>();
    q.log_var = t.at("log_var").get<std::vector<double>>();
    st.per_task.push_back(std::move(q));
  }
  st.validate();
  return st;
}

}  // namespace metapac
