// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/priors.hpp"

#include <algorithm>
#include <cmath>

#include "horse/error.hpp"

namespace horse {

namespace {

// Of a triple and its stored inverse, score the one whose (subject label,
// predicate name) is smaller; symmetric ties fall back to object ids.
bool is_scored_form(const RelationTriple& t, const std::string& subject_label,
                    const std::string& object_label) {
  const auto inv = inverse(t.predicate);
  if (!inv) return true;
  const auto self = std::make_pair(std::string_view(subject_label), to_string(t.predicate));
  const auto other = std::make_pair(std::string_view(object_label), to_string(*inv));
  if (self != other) return self < other;
  return t.subject_id < t.object_id;
}

}  // namespace

std::uint64_t RelationPriors::count(const std::string& subject, Predicate p,
                                    const std::string& object) const {
  auto it = counts.find(LabelTriple{subject, p, object});
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t RelationPriors::pair_total(const std::string& subject,
                                         const std::string& object) const {
  auto it = pair_totals.find(LabelPair{subject, object});
  return it == pair_totals.end() ? 0 : it->second;
}

RelationPriors fit(std::span<const SceneGraph> graphs, double alpha) {
  if (graphs.empty()) throw Error(Errc::empty_corpus, "cannot fit priors on an empty corpus");
  RelationPriors priors;
  priors.alpha = alpha;
  for (const SceneGraph& g : graphs) {
    for (const SceneObject& a : g.objects) {
      for (const SceneObject& b : g.objects) {
        if (a.id != b.id) ++priors.pair_totals[{a.label, b.label}];
      }
    }
    for (const RelationTriple& t : g.relations) {
      const SceneObject* s = g.find_object(t.subject_id);
      const SceneObject* o = g.find_object(t.object_id);
      if (s && o) ++priors.counts[{s->label, t.predicate, o->label}];
    }
  }
  return priors;
}

double probability(const RelationPriors& priors, const std::string& subject, Predicate p,
                   const std::string& object) {
  const auto count = static_cast<double>(priors.count(subject, p, object));
  const auto total = static_cast<double>(priors.pair_total(subject, object));
  return (count + priors.alpha) / (total + 2.0 * priors.alpha);
}

double surprisal_bits(double probability) { return -std::log2(probability); }

TypicalityReport score_image(const RelationPriors& priors, const SceneGraph& graph,
                             const TypicalityOptions& options) {
  TypicalityReport report;
  report.image_id = graph.image_id;
  for (const RelationTriple& t : graph.relations) {
    const SceneObject* s = graph.find_object(t.subject_id);
    const SceneObject* o = graph.find_object(t.object_id);
    if (!s || !o || !is_scored_form(t, s->label, o->label)) continue;
    ScoredTriple scored{t, s->label, o->label, 0.0, 0.0};
    scored.probability = probability(priors, s->label, t.predicate, o->label);
    scored.surprisal = surprisal_bits(scored.probability);
    report.triple_surprisals.push_back(std::move(scored));
  }
  std::stable_sort(report.triple_surprisals.begin(), report.triple_surprisals.end(),
                   [](const ScoredTriple& a, const ScoredTriple& b) {
                     if (a.surprisal != b.surprisal) return a.surprisal > b.surprisal;
                     return a.triple < b.triple;
                   });

  const std::size_t k = std::min(options.top_k, report.triple_surprisals.size());
  if (k > 0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += report.triple_surprisals[i].surprisal;
    report.uniqueness = sum / static_cast<double>(k);
  }
  for (const ScoredTriple& s : report.triple_surprisals) {
    if (s.probability < options.theta) report.anomalous_triples.push_back(s);
  }
  return report;
}

std::vector<TypicalityReport> rank_by_uniqueness(const RelationPriors& priors,
                                                 std::span<const SceneGraph> graphs,
                                                 const TypicalityOptions& options) {
  std::vector<TypicalityReport> reports;
  reports.reserve(graphs.size());
  for (const SceneGraph& g : graphs) reports.push_back(score_image(priors, g, options));
  std::sort(reports.begin(), reports.end(), [](const TypicalityReport& a, const TypicalityReport& b) {
    if (a.uniqueness != b.uniqueness) return a.uniqueness > b.uniqueness;
    return a.image_id < b.image_id;
  });
  return reports;
}

}  // namespace horse
