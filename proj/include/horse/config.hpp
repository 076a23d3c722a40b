// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "horse/scene.hpp"

namespace horse {

/// Weights of the scored constraints in ranked matching. Labels are
/// mandatory and carry no weight.
struct ScoringWeights {
  double attribute = 1.0;
  double edge = 1.0;

  friend bool operator==(const ScoringWeights&, const ScoringWeights&) = default;
};

struct EngineConfig {
  RelationConfig relations;
  SalienceWeights salience;
  double min_confidence = 0.5;
  double alpha = 1.0;         // Laplace smoothing of relation priors
  double theta = 0.05;        // probability below which a triple is anomalous
  std::size_t uniqueness_k = 3;
  ScoringWeights scoring;
  std::string vocab_path;     // empty: built-in vocabulary
  std::string index_dir;
  std::string listen_address = "127.0.0.1";
  int port = 8080;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

nlohmann::json to_json(const RelationConfig& c);
nlohmann::json to_json(const EngineConfig& c);

/// Fields absent from `j` keep their defaults. Unknown keys and wrongly
/// typed values raise Error(config_error).
RelationConfig relation_config_from_json(const nlohmann::json& j);
EngineConfig engine_config_from_json(const nlohmann::json& j);
EngineConfig load_engine_config(const std::filesystem::path& path);

/// Throws Error(config_error) when a threshold leaves its documented range.
void validate(const EngineConfig& c);

/// The parts of an engine config that shape an index, stored in its manifest.
nlohmann::json index_snapshot(const EngineConfig& c);

/// Human-readable differences between a stored snapshot and the current one
/// ("relations.tau_v: index 0.05, config 0.1").
std::vector<std::string> snapshot_differences(const nlohmann::json& stored,
                                              const nlohmann::json& current);

}  // namespace horse
