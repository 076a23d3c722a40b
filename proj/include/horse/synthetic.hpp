// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horse/scene.hpp"

namespace horse {

struct GeneratorSpec {
  std::size_t n_scenes = 100;
  std::uint64_t seed = 7;
  // Labels placed standing on the ground band.
  std::vector<std::string> label_pool = {"car", "person", "tree", "house", "dog", "bicycle"};
  double anomaly_rate = 0.01;
  double table_rate = 0.4;  // fraction of scenes with a table and a tabletop item
};

/// Reads a generator spec from JSON; absent fields keep their defaults.
GeneratorSpec parse_generator_spec(std::string_view json_text);

struct SyntheticScene {
  SceneGraph graph;
  std::optional<std::string> violation;  // set on injected anomalies, e.g. "car above sky"
};

/// Deterministic templated street scenes: a sky band at the top, a ground
/// band at the bottom, pool objects standing on the ground in disjoint
/// horizontal slots and optionally a table carrying a small item.
///
/// Exactly round(n_scenes * anomaly_rate) scenes, chosen by the seed, have one
/// pool object lifted into the sky band. Throws Error(config_error) on an
/// empty pool, n_scenes == 0 or a rate outside [0,1].
std::vector<SyntheticScene> generate_synthetic(const GeneratorSpec& spec,
                                               const RelationConfig& relations = {},
                                               const SalienceWeights& salience = {});

/// Annotation document for the scenes, each image carrying its "violation"
/// (null when clean).
std::string export_synthetic(const std::vector<SyntheticScene>& scenes);

}  // namespace horse
