// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "horse/priors.hpp"
#include "horse/scene.hpp"

namespace horse {

/// Index vocabulary entry. Canonical string forms:
///   label:<label>
///   attr:<label>:color:<color>   attr:<label>:shape:<shape>
///   rel:<subject label>:<predicate>:<object label>
struct Term {
  enum class Kind : std::uint8_t { label, attribute, relation };

  Kind kind = Kind::label;
  std::string label;         // subject label for relations
  std::string attribute;     // "color" or "shape"
  std::string value;         // attribute value
  Predicate predicate = Predicate::above;
  std::string object_label;

  static Term for_label(std::string label);
  static Term for_color(std::string label, std::string color);
  static Term for_shape(std::string label, std::string shape);
  static Term for_relation(std::string subject, Predicate p, std::string object);

  std::string str() const;
  static std::optional<Term> parse(std::string_view text);

  friend bool operator==(const Term&, const Term&) = default;
};

struct Posting {
  std::string image_id;
  std::vector<int> object_ids;  // strictly increasing; subject ids for relation terms

  friend bool operator==(const Posting&, const Posting&) = default;
};

inline constexpr std::uint32_t kIndexFormatVersion = 1;

struct IndexStats {
  std::size_t images = 0;
  std::size_t objects = 0;
  std::size_t triples = 0;
  std::size_t terms = 0;
  std::size_t postings = 0;
};

/// Immutable inverted index over a scene-graph corpus plus its document
/// store and relation priors. Safe for concurrent readers.
class Index {
 public:
  /// Throws Error(empty_corpus) for no graphs, Error(duplicate_image) for
  /// repeated image ids.
  static Index build(std::vector<SceneGraph> graphs, RelationPriors priors,
                     nlohmann::json config_snapshot = nlohmann::json::object());

  /// Writes manifest.json and the terms/postings/docs/priors segments. Each
  /// file is written beside its final name and renamed into place, the
  /// manifest last. Throws Error(index_io) naming the failing path.
  void save(const std::filesystem::path& dir) const;

  /// Throws Error(index_io) when files are missing, Error(version_mismatch)
  /// on a foreign format version and Error(index_corrupt) naming the segment
  /// whose checksum or encoding is wrong.
  static Index open(const std::filesystem::path& dir);

  std::vector<Posting> lookup(const Term& term) const;
  std::vector<Posting> lookup(std::string_view term) const;

  /// Dictionary terms starting with `prefix`, in sorted order.
  std::vector<std::string> terms_with_prefix(std::string_view prefix) const;
  std::size_t term_count() const noexcept { return dictionary_.size(); }

  /// Image ids present in every list; the empty family yields every image.
  std::vector<std::string> intersect(std::span<const std::vector<Posting>> lists) const;

  const std::vector<SceneGraph>& documents() const noexcept { return docs_; }
  const SceneGraph* find(std::string_view image_id) const;
  std::vector<std::string> image_ids() const;

  const RelationPriors& priors() const noexcept { return priors_; }
  const nlohmann::json& config_snapshot() const noexcept { return config_; }
  IndexStats stats() const;

  friend bool operator==(const Index&, const Index&) = default;

 private:
  struct Entry {
    std::uint32_t doc = 0;
    std::vector<int> object_ids;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Posting> materialize(const std::vector<Entry>& entries) const;

  std::vector<SceneGraph> docs_;  // sorted by image_id
  std::map<std::string, std::vector<Entry>, std::less<>> dictionary_;
  RelationPriors priors_;
  nlohmann::json config_;
};

/// build followed by save.
Index build_index(std::vector<SceneGraph> graphs, RelationPriors priors,
                  const std::filesystem::path& dir,
                  nlohmann::json config_snapshot = nlohmann::json::object());

/// Sorted intersection of sorted id lists; the empty family yields `universe`.
std::vector<std::string> intersect_sorted(std::span<const std::vector<std::string>> lists,
                                          std::span<const std::string> universe);

/// Terms a graph contributes to the index, each with its realizing object ids.
std::map<std::string, std::vector<int>> graph_terms(const SceneGraph& graph);

}  // namespace horse
