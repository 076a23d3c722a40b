// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/vocabulary.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "horse/error.hpp"

namespace horse {

namespace {

std::string normalize_word(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back('_');
    pending_space = false;
    // ':' separates fields of index terms
    out.push_back(c == ':' ? '_' : static_cast<char>(std::tolower(u)));
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string singularize(std::string_view word) {
  std::string w(word);
  if (w.size() > 4 && ends_with(w, "ies")) {
    return w.substr(0, w.size() - 3) + "y";
  }
  for (std::string_view suffix : {"sses", "xes", "ches", "shes"}) {
    if (w.size() > suffix.size() + 1 && ends_with(w, suffix)) {
      return w.substr(0, w.size() - 2);
    }
  }
  if (w.size() > 3 && w.back() == 's') {
    const char prev = w[w.size() - 2];
    if (prev != 's' && prev != 'u' && prev != 'i') return w.substr(0, w.size() - 1);
  }
  return w;
}

const std::set<std::string, std::less<>>& Vocabulary::canonical_colors() {
  static const std::set<std::string, std::less<>> colors = {
      "red",   "orange", "yellow", "green", "blue", "purple",
      "pink",  "brown",  "black",  "white", "gray", "beige",
  };
  return colors;
}

const std::set<std::string, std::less<>>& Vocabulary::canonical_shapes() {
  static const std::set<std::string, std::less<>> shapes = {
      "round", "square", "rectangular", "triangular", "oval",
  };
  return shapes;
}

Vocabulary Vocabulary::defaults() {
  Vocabulary v;
  const std::pair<const char*, const char*> labels[] = {
      {"automobile", "car"},   {"auto", "car"},          {"people", "person"},
      {"human", "person"},     {"men", "man"},           {"women", "woman"},
      {"children", "child"},   {"kid", "child"},         {"puppy", "dog"},
      {"kitten", "cat"},       {"bike", "bicycle"},      {"motorbike", "motorcycle"},
      {"sofa", "couch"},       {"tv", "television"},     {"buses", "bus"},
      {"mice", "mouse"},       {"geese", "goose"},       {"feet", "foot"},
      {"teeth", "tooth"},      {"leaves", "leaf"},       {"knives", "knife"},
      {"shelves", "shelf"},    {"dining table", "table"}, {"desk", "table"},
  };
  for (const auto& [surface, canonical] : labels) v.add_synonym(surface, canonical);

  v.color_synonyms_ = {
      {"grey", "gray"},   {"silver", "gray"},  {"violet", "purple"}, {"magenta", "pink"},
      {"tan", "beige"},   {"cream", "beige"},  {"gold", "yellow"},   {"navy", "blue"},
      {"maroon", "red"},  {"crimson", "red"},  {"cyan", "blue"},     {"lime", "green"},
  };
  v.shape_synonyms_ = {
      {"circular", "round"},      {"circle", "round"},       {"spherical", "round"},
      {"rectangle", "rectangular"}, {"triangle", "triangular"}, {"elliptical", "oval"},
      {"ellipse", "oval"},        {"oblong", "oval"},
  };
  v.resolve_chains();
  return v;
}

Vocabulary Vocabulary::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("vocabulary: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) {
    throw Error(Errc::parse_error, "vocabulary: expected a JSON object of synonyms");
  }
  Vocabulary v = defaults();
  for (const auto& [surface, canonical] : doc.items()) {
    if (!canonical.is_string()) {
      throw Error(Errc::parse_error, "vocabulary: value for '" + surface + "' is not a string");
    }
    v.add_synonym(surface, canonical.get<std::string>());
  }
  v.resolve_chains();
  return v;
}

Vocabulary Vocabulary::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "vocabulary: cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void Vocabulary::add_synonym(std::string_view surface, std::string_view canonical) {
  std::string key = normalize_word(surface);
  std::string target = normalize_word(canonical);
  if (key.empty() || target.empty()) {
    throw Error(Errc::parse_error, "vocabulary: empty synonym entry");
  }
  if (key == target) return;
  label_synonyms_[key] = target;
}

void Vocabulary::resolve_chains() {
  canonical_targets_.clear();
  for (auto& [key, target] : label_synonyms_) {
    std::string current = target;
    std::size_t steps = 0;
    for (auto it = label_synonyms_.find(current); it != label_synonyms_.end();
         it = label_synonyms_.find(current)) {
      current = it->second;
      if (++steps > label_synonyms_.size()) {
        throw Error(Errc::parse_error, "vocabulary: synonym cycle through '" + key + "'");
      }
    }
    target = current;
    canonical_targets_.insert(current);
  }
}

std::string Vocabulary::canon_label(std::string_view surface) const {
  const std::string word = normalize_word(surface);
  if (auto it = label_synonyms_.find(word); it != label_synonyms_.end()) return it->second;
  if (canonical_targets_.contains(word)) return word;
  std::string single = singularize(word);
  if (auto it = label_synonyms_.find(single); it != label_synonyms_.end()) return it->second;
  return single;
}

std::optional<std::string> Vocabulary::canon_color(std::string_view word) const {
  const std::string w = normalize_word(word);
  if (canonical_colors().contains(w)) return w;
  if (auto it = color_synonyms_.find(w); it != color_synonyms_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> Vocabulary::canon_shape(std::string_view word) const {
  const std::string w = normalize_word(word);
  if (canonical_shapes().contains(w)) return w;
  if (auto it = shape_synonyms_.find(w); it != shape_synonyms_.end()) return it->second;
  return std::nullopt;
}

}  // namespace horse
