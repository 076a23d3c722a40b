// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "horse/config.hpp"
#include "horse/index.hpp"
#include "horse/ingest.hpp"
#include "horse/matcher.hpp"
#include "horse/priors.hpp"
#include "horse/vocabulary.hpp"

namespace horse {

struct IngestSummary {
  IndexStats stats;
  LoadReport report;
};

/// Loads every annotation file, fits priors and writes the index to `out`.
/// Errors from a file carry its name in the message.
IngestSummary ingest_files(const std::vector<std::filesystem::path>& annotation_files,
                           const std::filesystem::path& out, const EngineConfig& config,
                           std::int64_t built_at = 0);

Vocabulary load_vocabulary(const EngineConfig& config);

/// Read-only view over an opened index. Every query answer is produced as
/// JSON here so that the command line and the HTTP API agree byte for byte.
class Engine {
 public:
  /// Without `config_path` the configuration stored in the index is used;
  /// otherwise differences from the stored snapshot become warnings.
  static Engine open(const std::filesystem::path& index_dir,
                     const std::optional<std::filesystem::path>& config_path = std::nullopt);
  Engine(Index index, EngineConfig config);

  nlohmann::json search(std::string_view text, std::size_t k, MatchMode mode) const;
  nlohmann::json explain(std::string_view image_id, std::string_view text) const;
  nlohmann::json anomalies(std::size_t k) const;
  nlohmann::json image(std::string_view image_id) const;
  nlohmann::json stats() const;
  nlohmann::json priors(std::string_view subject, std::string_view object) const;
  nlohmann::json priors_dump() const;

  /// Local file behind the image's image_uri, if it exists. Relative paths
  /// and file:// URIs are resolved against `root`.
  std::optional<std::filesystem::path> image_file(std::string_view image_id,
                                                  const std::filesystem::path& root) const;

  QueryGraph parse(std::string_view text) const;

  const Index& index() const noexcept { return index_; }
  const EngineConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  const SceneGraph& require(std::string_view image_id) const;

  Index index_;
  EngineConfig config_;
  Vocabulary vocab_;
  std::vector<TypicalityReport> ranking_;
  std::vector<std::string> warnings_;
};

}  // namespace horse
