#pragma once

#include <string>

#include "json.hpp"

#include "core/coverage.hpp"
#include "core/synthetic.hpp"
#include "core/trainer.hpp"

namespace metapac {

// Strict parsers: unknown keys and type mismatches raise ConfigError naming
// the offending field path (e.g. "trainer.lr").

TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& prefix = "trainer");
nlohmann::json train_config_to_json(const TrainConfig& cfg);

SyntheticEnvSpec synth_spec_from_json(const nlohmann::json& j,
                                      const std::string& prefix = "dataset.synthetic");
nlohmann::json synth_spec_to_json(const SyntheticEnvSpec& spec);

CoverageConfig coverage_config_from_json(const nlohmann::json& j,
                                         const std::string& prefix = "coverage");

// Meta-state serialization (JSON document with theta, kappas, posteriors).
void save_state(const MetaState& state, const std::string& path);
MetaState load_state(const std::string& path);

}  // namespace metapac
