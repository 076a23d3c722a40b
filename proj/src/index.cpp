// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/index.hpp"

#include <algorithm>
#include <set>

#include "horse/error.hpp"

namespace horse {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Term Term::for_label(std::string label) {
  Term t;
  t.kind = Kind::label;
  t.label = std::move(label);
  return t;
}

Term Term::for_color(std::string label, std::string color) {
  Term t;
  t.kind = Kind::attribute;
  t.label = std::move(label);
  t.attribute = "color";
  t.value = std::move(color);
  return t;
}

Term Term::for_shape(std::string label, std::string shape) {
  Term t = for_color(std::move(label), std::move(shape));
  t.attribute = "shape";
  return t;
}

Term Term::for_relation(std::string subject, Predicate p, std::string object) {
  Term t;
  t.kind = Kind::relation;
  t.label = std::move(subject);
  t.predicate = p;
  t.object_label = std::move(object);
  return t;
}

std::string Term::str() const {
  switch (kind) {
    case Kind::label: return "label:" + label;
    case Kind::attribute: return "attr:" + label + ":" + attribute + ":" + value;
    case Kind::relation:
      return "rel:" + label + ":" + std::string(to_string(predicate)) + ":" + object_label;
  }
  return {};
}

std::optional<Term> Term::parse(std::string_view text) {
  const auto parts = split(text, ':');
  for (auto p : parts) {
    if (p.empty()) return std::nullopt;
  }
  if (parts.size() == 2 && parts[0] == "label") return for_label(std::string(parts[1]));
  if (parts.size() == 4 && parts[0] == "attr") {
    if (parts[2] == "color") return for_color(std::string(parts[1]), std::string(parts[3]));
    if (parts[2] == "shape") return for_shape(std::string(parts[1]), std::string(parts[3]));
    return std::nullopt;
  }
  if (parts.size() == 4 && parts[0] == "rel") {
    auto p = parse_predicate(parts[2]);
    if (!p) return std::nullopt;
    return for_relation(std::string(parts[1]), *p, std::string(parts[3]));
  }
  return std::nullopt;
}

std::map<std::string, std::vector<int>> graph_terms(const SceneGraph& graph) {
  std::map<std::string, std::vector<int>> terms;
  for (const SceneObject& o : graph.objects) {
    terms[Term::for_label(o.label).str()].push_back(o.id);
    for (const std::string& c : o.colors) terms[Term::for_color(o.label, c).str()].push_back(o.id);
    if (o.shape) terms[Term::for_shape(o.label, *o.shape).str()].push_back(o.id);
  }
  for (const RelationTriple& t : graph.relations) {
    const SceneObject* s = graph.find_object(t.subject_id);
    const SceneObject* o = graph.find_object(t.object_id);
    if (!s || !o) continue;
    terms[Term::for_relation(s->label, t.predicate, o->label).str()].push_back(s->id);
  }
  for (auto& [term, ids] : terms) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return terms;
}

Index Index::build(std::vector<SceneGraph> graphs, RelationPriors priors,
                   nlohmann::json config_snapshot) {
  if (graphs.empty()) throw Error(Errc::empty_corpus, "cannot build an index over zero images");
  std::sort(graphs.begin(), graphs.end(),
            [](const SceneGraph& a, const SceneGraph& b) { return a.image_id < b.image_id; });
  for (std::size_t i = 1; i < graphs.size(); ++i) {
    if (graphs[i].image_id == graphs[i - 1].image_id) {
      throw Error(Errc::duplicate_image, "duplicate image_id '" + graphs[i].image_id + "'");
    }
  }

  Index index;
  index.docs_ = std::move(graphs);
  index.priors_ = std::move(priors);
  index.config_ = std::move(config_snapshot);
  for (std::uint32_t doc = 0; doc < index.docs_.size(); ++doc) {
    for (auto& [term, ids] : graph_terms(index.docs_[doc])) {
      index.dictionary_[term].push_back(Entry{doc, std::move(ids)});
    }
  }
  return index;
}

std::vector<Posting> Index::materialize(const std::vector<Entry>& entries) const {
  std::vector<Posting> out;
  out.reserve(entries.size());
  for (const Entry& e : entries) out.push_back({docs_[e.doc].image_id, e.object_ids});
  return out;
}

std::vector<Posting> Index::lookup(const Term& term) const { return lookup(term.str()); }

std::vector<Posting> Index::lookup(std::string_view term) const {
  auto it = dictionary_.find(term);
  if (it == dictionary_.end()) return {};
  return materialize(it->second);
}

std::vector<std::string> Index::terms_with_prefix(std::string_view prefix) const {
  std::vector<std::string> out;
  for (auto it = dictionary_.lower_bound(prefix);
       it != dictionary_.end() && std::string_view(it->first).substr(0, prefix.size()) == prefix;
       ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::vector<std::string> Index::intersect(std::span<const std::vector<Posting>> lists) const {
  std::vector<std::vector<std::string>> ids;
  ids.reserve(lists.size());
  for (const auto& list : lists) {
    std::vector<std::string> v;
    v.reserve(list.size());
    for (const Posting& p : list) v.push_back(p.image_id);
    ids.push_back(std::move(v));
  }
  const auto universe = image_ids();
  return intersect_sorted(ids, universe);
}

const SceneGraph* Index::find(std::string_view image_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), image_id,
                             [](const SceneGraph& g, std::string_view id) { return g.image_id < id; });
  return it != docs_.end() && it->image_id == image_id ? &*it : nullptr;
}

std::vector<std::string> Index::image_ids() const {
  std::vector<std::string> ids;
  ids.reserve(docs_.size());
  for (const SceneGraph& g : docs_) ids.push_back(g.image_id);
  return ids;
}

IndexStats Index::stats() const {
  IndexStats s;
  s.images = docs_.size();
  for (const SceneGraph& g : docs_) {
    s.objects += g.objects.size();
    s.triples += g.relations.size();
  }
  s.terms = dictionary_.size();
  for (const auto& [term, entries] : dictionary_) s.postings += entries.size();
  return s;
}

Index build_index(std::vector<SceneGraph> graphs, RelationPriors priors,
                  const std::filesystem::path& dir, nlohmann::json config_snapshot) {
  Index index = Index::build(std::move(graphs), std::move(priors), std::move(config_snapshot));
  index.save(dir);
  return index;
}

std::vector<std::string> intersect_sorted(std::span<const std::vector<std::string>> lists,
                                          std::span<const std::string> universe) {
  if (lists.empty()) return {universe.begin(), universe.end()};
  // Start from the shortest list.
  std::vector<std::size_t> order(lists.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lists[a].size() < lists[b].size(); });

  std::vector<std::string> acc = lists[order[0]];
  for (std::size_t k = 1; k < order.size() && !acc.empty(); ++k) {
    const auto& next = lists[order[k]];
    std::vector<std::string> merged;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::back_inserter(merged));
    acc = std::move(merged);
  }
  return acc;
}

}  // namespace horse
