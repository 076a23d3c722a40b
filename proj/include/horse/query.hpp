// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horse/scene.hpp"
#include "horse/vocabulary.hpp"

namespace horse {

enum class SizeWord { big, small };

std::string_view to_string(SizeWord s) noexcept;

struct QueryNode {
  int node_id = 0;
  std::string label;
  std::optional<std::string> color;
  std::optional<std::string> shape;
  std::optional<SizeWord> size;

  /// Number of stated attribute constraints (color, shape, size).
  int attribute_count() const noexcept;

  friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

struct QueryEdge {
  int from_node = 0;
  Predicate predicate = Predicate::above;
  int to_node = 0;

  friend bool operator==(const QueryEdge&, const QueryEdge&) = default;
};

struct QueryGraph {
  std::vector<QueryNode> nodes;  // node_id == position
  std::vector<QueryEdge> edges;
  std::string raw_text;

  const QueryNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
};

/// Parses a controlled-English query (case-insensitive):
///
///   query       := boilerplate? clause ( ("," | "and") clause )*
///   boilerplate := "find images with" | "find images where" | "show me"
///                | "images with" | "images where"
///   clause      := np ( filler? relphrase np )?
///   filler      := "is" | "that is" | "which is"
///   np          := ("a" | "an" | "the")? adj* noun
///   adj         := color | shape | "big" | "large" | "small" | "tiny"
///   relphrase   := "above" | "over" | "below" | "under" | "on top of" | "on"
///                | "to the left of" | "left of" | "to the right of" | "right of"
///                | "in front of" | "behind" | "inside" | "in" | "containing"
///                | "next to" | "near" | "bigger than" | "smaller than"
///
/// Multiword relation phrases match longest first. Noun phrases with the same
/// label and attributes denote the same node. Unknown nouns are accepted;
/// an unknown word in adjective position is an error.
///
/// Errors: empty_query for blank text; query_parse with the character offset
/// of the offending token (or the end of text for a dangling relation).
QueryGraph parse_query(std::string_view text, const Vocabulary& vocab);

/// Canonical text: one clause per edge followed by bare clauses for nodes
/// without edges, joined by " and ". parse_query(unparse(g)) is equivalent
/// to g.
std::string unparse(const QueryGraph& graph);

/// Canonical phrase for a predicate ("left of", "in front of", ...).
std::string_view relation_phrase(Predicate p) noexcept;

/// "big red round ball"
std::string describe(const QueryNode& node);

/// Same node descriptions and edges, ignoring node numbering, edge order and
/// raw text.
bool equivalent(const QueryGraph& a, const QueryGraph& b);

}  // namespace horse
