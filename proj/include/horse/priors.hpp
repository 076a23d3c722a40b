// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "horse/scene.hpp"

namespace horse {

using LabelPair = std::pair<std::string, std::string>;
using LabelTriple = std::tuple<std::string, Predicate, std::string>;

/// Corpus statistics of relations between labels.
///
/// Each predicate is modelled as an independent Bernoulli event per ordered
/// pair of co-occurring objects, so probabilities for one label pair need not
/// sum to one.
struct RelationPriors {
  std::map<LabelTriple, std::uint64_t> counts;
  std::map<LabelPair, std::uint64_t> pair_totals;
  double alpha = 1.0;
  std::size_t predicate_count = kPredicateCount;

  std::uint64_t count(const std::string& subject, Predicate p, const std::string& object) const;
  std::uint64_t pair_total(const std::string& subject, const std::string& object) const;

  friend bool operator==(const RelationPriors&, const RelationPriors&) = default;
};

/// Throws Error(empty_corpus) when `graphs` is empty.
RelationPriors fit(std::span<const SceneGraph> graphs, double alpha = 1.0);

/// Laplace-smoothed estimate (count + alpha) / (pair_total + 2 alpha).
double probability(const RelationPriors& priors, const std::string& subject, Predicate p,
                   const std::string& object);

double surprisal_bits(double probability);

struct ScoredTriple {
  RelationTriple triple;
  std::string subject_label;
  std::string object_label;
  double probability = 0.0;
  double surprisal = 0.0;
};

struct TypicalityReport {
  std::string image_id;
  std::vector<ScoredTriple> triple_surprisals;  // most surprising first
  double uniqueness = 0.0;
  std::vector<ScoredTriple> anomalous_triples;  // probability < theta
};

struct TypicalityOptions {
  double theta = 0.05;
  std::size_t top_k = 3;
};

/// Scores every relation fact of the graph once: of a triple and its stored
/// inverse, only the form with the smaller (subject label, predicate name) is
/// kept. Uniqueness is the mean of the top_k surprisals.
TypicalityReport score_image(const RelationPriors& priors, const SceneGraph& graph,
                             const TypicalityOptions& options = {});

/// Reports for all graphs, ordered by uniqueness descending then image id.
std::vector<TypicalityReport> rank_by_uniqueness(const RelationPriors& priors,
                                                 std::span<const SceneGraph> graphs,
                                                 const TypicalityOptions& options = {});

}  // namespace horse
