// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/json_io.hpp"

namespace horse::json_io {

using nlohmann::json;

namespace {

template <typename T>
json optional_value(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json triple(const RelationTriple& t) {
  return {{"subject", t.subject_id}, {"predicate", to_string(t.predicate)}, {"object", t.object_id}};
}

json object(const SceneObject& o) {
  return {
      {"id", o.id},
      {"label", o.label},
      {"bbox", {o.bbox.x_min, o.bbox.y_min, o.bbox.x_max, o.bbox.y_max}},
      {"depth", optional_value(o.depth)},
      {"colors", o.colors},
      {"shape", optional_value(o.shape)},
      {"confidence", o.confidence},
      {"attributes", o.attributes},
      {"area", o.area},
      {"size_rank", o.size_rank},
      {"salience", o.salience},
  };
}

json scene(const SceneGraph& g) {
  json objects = json::array();
  for (const auto& o : g.objects) objects.push_back(object(o));
  json relations = json::array();
  for (const auto& t : g.relations) relations.push_back(triple(t));
  return {
      {"image_id", g.image_id},
      {"image_uri", optional_value(g.image_uri)},
      {"built_at", g.built_at},
      {"objects", std::move(objects)},
      {"relations", std::move(relations)},
  };
}

json query(const QueryGraph& q) {
  json nodes = json::array();
  for (const auto& n : q.nodes) {
    nodes.push_back({
        {"node_id", n.node_id},
        {"label", n.label},
        {"color", optional_value(n.color)},
        {"shape", optional_value(n.shape)},
        {"size", n.size ? json(to_string(*n.size)) : json(nullptr)},
    });
  }
  json edges = json::array();
  for (const auto& e : q.edges) {
    edges.push_back({{"from", e.from_node}, {"predicate", to_string(e.predicate)}, {"to", e.to_node}});
  }
  return {
      {"raw_text", q.raw_text},
      {"canonical", unparse(q)},
      {"nodes", std::move(nodes)},
      {"edges", std::move(edges)},
  };
}

json evidence(const Evidence& e) {
  json quantities = json::array();
  for (const auto& [name, value] : e.quantities) quantities.push_back({{"name", name}, {"value", value}});
  json out = {{"holds", e.holds}, {"rule", e.rule}, {"quantities", std::move(quantities)}, {"detail", e.detail}};
  out["triple"] = e.triple ? triple(*e.triple) : json(nullptr);
  return out;
}

json outcome(const ConstraintOutcome& c) {
  json out = {{"kind", to_string(c.kind)}, {"text", c.text}, {"nodes", c.nodes}};
  if (c.evidence) out["evidence"] = evidence(*c.evidence);
  return out;
}

json match(const MatchResult& r, const QueryGraph& q) {
  json binding = json::array();
  for (std::size_t v = 0; v < r.binding.size(); ++v) {
    binding.push_back({
        {"node_id", static_cast<int>(v)},
        {"label", v < q.nodes.size() ? q.nodes[v].label : std::string()},
        {"object_id", optional_value(r.binding[v])},
    });
  }
  json satisfied = json::array();
  for (const auto& c : r.satisfied) satisfied.push_back(outcome(c));
  json violated = json::array();
  for (const auto& c : r.violated) violated.push_back(outcome(c));
  return {
      {"image_id", r.image_id},
      {"score", r.score},
      {"mean_salience", r.mean_salience},
      {"binding", std::move(binding)},
      {"satisfied", std::move(satisfied)},
      {"violated", std::move(violated)},
  };
}

std::string triple_text(const ScoredTriple& t) {
  return t.subject_label + " " + std::string(to_string(t.triple.predicate)) + " " + t.object_label;
}

json scored_triple(const ScoredTriple& t) {
  return {
      {"subject", t.triple.subject_id},
      {"predicate", to_string(t.triple.predicate)},
      {"object", t.triple.object_id},
      {"subject_label", t.subject_label},
      {"object_label", t.object_label},
      {"text", triple_text(t)},
      {"probability", t.probability},
      {"surprisal", t.surprisal},
  };
}

json typicality(const TypicalityReport& r) {
  json triples = json::array();
  for (const auto& t : r.triple_surprisals) triples.push_back(scored_triple(t));
  json anomalous = json::array();
  for (const auto& t : r.anomalous_triples) anomalous.push_back(scored_triple(t));
  return {
      {"image_id", r.image_id},
      {"uniqueness", r.uniqueness},
      {"triple_surprisals", std::move(triples)},
      {"anomalous_triples", std::move(anomalous)},
  };
}

json stats(const IndexStats& s) {
  return {
      {"images", s.images},
      {"objects", s.objects},
      {"triples", s.triples},
      {"terms", s.terms},
      {"postings", s.postings},
      {"format_version", kIndexFormatVersion},
  };
}

json pair_priors(const RelationPriors& priors, const std::string& subject, const std::string& object) {
  json probabilities = json::object();
  json counts = json::object();
  for (Predicate p : kAllPredicates) {
    const std::string name(to_string(p));
    probabilities[name] = probability(priors, subject, p, object);
    counts[name] = priors.count(subject, p, object);
  }
  return {
      {"subject", subject},
      {"object", object},
      {"pair_total", priors.pair_total(subject, object)},
      {"alpha", priors.alpha},
      {"counts", std::move(counts)},
      {"probabilities", std::move(probabilities)},
  };
}

json error(const Error& e) {
  json out = error(std::string(to_string(e.code())), e.what());
  if (e.position()) out["position"] = *e.position();
  return out;
}

json error(const std::string& code, const std::string& message) {
  return {{"error", code}, {"message", message}};
}

}  // namespace horse::json_io
