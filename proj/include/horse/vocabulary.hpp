// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace horse {

/// Canonical nouns, colors and shapes shared by ingestion and query parsing.
///
/// Labels are lowercased, whitespace runs become '_', synonyms are resolved
/// and regular English plurals are reduced to the singular. Canonicalization
/// is idempotent: canon_label(canon_label(x)) == canon_label(x).
class Vocabulary {
 public:
  /// Built-in synonyms (automobile -> car, people -> person, ...) and the
  /// canonical color and shape sets.
  static Vocabulary defaults();

  /// Defaults extended with a JSON object mapping surface nouns to canonical
  /// nouns. Throws Error(parse_error) on malformed input or synonym cycles.
  static Vocabulary from_json(std::string_view text);
  static Vocabulary from_file(const std::filesystem::path& path);

  void add_synonym(std::string_view surface, std::string_view canonical);

  std::string canon_label(std::string_view surface) const;

  /// Canonical color name, or nullopt when the word is not a known color.
  std::optional<std::string> canon_color(std::string_view word) const;
  std::optional<std::string> canon_shape(std::string_view word) const;

  bool is_color(std::string_view word) const { return canon_color(word).has_value(); }
  bool is_shape(std::string_view word) const { return canon_shape(word).has_value(); }

  const std::map<std::string, std::string, std::less<>>& label_synonyms() const {
    return label_synonyms_;
  }

  static const std::set<std::string, std::less<>>& canonical_colors();
  static const std::set<std::string, std::less<>>& canonical_shapes();

 private:
  void resolve_chains();

  std::map<std::string, std::string, std::less<>> label_synonyms_;
  std::set<std::string, std::less<>> canonical_targets_;
  std::map<std::string, std::string, std::less<>> color_synonyms_;
  std::map<std::string, std::string, std::less<>> shape_synonyms_;
};

/// Plural-to-singular reduction for regular English nouns. Idempotent.
std::string singularize(std::string_view word);

}  // namespace horse
