// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "horse/config.hpp"
#include "horse/index.hpp"
#include "horse/query.hpp"
#include "horse/scene.hpp"

namespace horse {

enum class MatchMode { strict, ranked };

std::string_view to_string(MatchMode m) noexcept;
std::optional<MatchMode> parse_match_mode(std::string_view s) noexcept;

inline constexpr std::size_t kMaxQueryNodes = 8;

/// Geometric facts behind one relation rule evaluated on a bound pair.
struct Evidence {
  std::string rule;  // the inequality, with the pair's values filled in
  std::vector<std::pair<std::string, double>> quantities;
  bool holds = false;
  std::optional<RelationTriple> triple;  // realizing triple in the scene, when satisfied
  std::string detail;                    // non-geometric evidence (colors, ranks, ...)
};

enum class ConstraintKind { label, color, shape, size, edge };

std::string_view to_string(ConstraintKind k) noexcept;

struct ConstraintOutcome {
  ConstraintKind kind = ConstraintKind::label;
  std::string text;        // "ball.color=red", "on(ball,table)"
  std::vector<int> nodes;  // query node ids involved
  std::optional<Evidence> evidence;  // filled by explain
};

struct MatchResult {
  std::string image_id;
  double score = 0.0;
  double mean_salience = 0.0;
  // Indexed by query node id; nullopt only for nodes explain could not bind.
  std::vector<std::optional<int>> binding;
  std::vector<ConstraintOutcome> satisfied;
  std::vector<ConstraintOutcome> violated;
};

/// Index candidates for a query: images holding every node label. When
/// `use_relation_terms` is set, strict-mode candidates are further narrowed
/// by the relation terms of the query edges.
std::vector<std::string> candidates(const Index& index, const QueryGraph& q,
                                    MatchMode mode = MatchMode::ranked,
                                    bool use_relation_terms = false);

/// Best injective, label-consistent binding of the query into the scene.
///
/// Score is the weighted fraction of satisfied attribute and edge
/// constraints (1 when the query states none). Strict mode only returns
/// bindings satisfying everything. Ties go to the higher mean salience of
/// the bound objects (summed in node order), then to the lexicographically
/// smallest object-id vector. Throws Error(query_too_large) above
/// kMaxQueryNodes nodes.
std::optional<MatchResult> bind(const SceneGraph& graph, const QueryGraph& q, MatchMode mode,
                                const ScoringWeights& weights = {});

struct SearchOptions {
  std::size_t k = 20;
  MatchMode mode = MatchMode::ranked;
  ScoringWeights weights;
  bool use_relation_terms = false;
};

struct SearchStats {
  std::size_t corpus = 0;
  std::size_t candidates = 0;
  std::size_t verified = 0;  // bind calls
};

/// Generate-and-verify: binds every candidate and returns the top k ordered
/// by score desc, mean salience desc, image id asc.
std::vector<MatchResult> search(const Index& index, const QueryGraph& q,
                                const SearchOptions& options = {}, SearchStats* stats = nullptr);

/// Same ordering and semantics as search, verifying every graph.
std::vector<MatchResult> search_linear(std::span<const SceneGraph> graphs, const QueryGraph& q,
                                       const SearchOptions& options = {});

/// Ranked binding of one image with per-constraint evidence. Nodes whose
/// label has no available object stay unbound with all their constraints
/// violated. Throws Error(not_found) for an unknown image and
/// Error(empty_query) for a query without nodes.
MatchResult explain(const Index& index, std::string_view image_id, const QueryGraph& q,
                    const ScoringWeights& weights = {});
MatchResult explain(const SceneGraph& graph, const QueryGraph& q, const RelationConfig& cfg,
                    const ScoringWeights& weights = {});

/// Evaluates the rule for `p` on the ordered pair (a, b).
Evidence relation_evidence(const SceneObject& a, const SceneObject& b, Predicate p,
                           const RelationConfig& cfg);

}  // namespace horse
