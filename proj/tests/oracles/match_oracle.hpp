// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "horse/query.hpp"
#include "horse/scene.hpp"
#include "horse/vocabulary.hpp"

namespace oracle {

struct Ranked {
  std::string image_id;
  int satisfied = 0;
  int total = 0;
  double score = 0.0;
  double mean_salience = 0.0;
  std::vector<int> object_ids;  // by node id
};

// Enumerates every injective label-consistent assignment in node order with
// no pruning and keeps the best one.
inline std::optional<Ranked> brute_force_bind(const horse::SceneGraph& g, const horse::QueryGraph& q,
                                              bool strict) {
  const std::size_t n = q.nodes.size();
  const std::size_t m = g.objects.size();
  const auto third = static_cast<std::size_t>(std::ceil(static_cast<double>(m) / 3.0));

  auto has_fact = [&](int s, horse::Predicate p, int o) {
    for (const auto& r : g.relations) {
      if (r.subject_id == s && r.predicate == p && r.object_id == o) return true;
      if (r.subject_id == o && r.object_id == s && horse::inverse(p) == r.predicate) return true;
    }
    return false;
  };

  int total = 0;
  for (const auto& node : q.nodes) total += node.attribute_count();
  total += static_cast<int>(q.edges.size());

  std::optional<Ranked> best;
  std::vector<int> pick(n, -1);
  std::vector<bool> taken(m, false);

  auto evaluate = [&]() {
    int sat = 0;
    double sal = 0.0;
    std::vector<int> ids(n);
    for (std::size_t v = 0; v < n; ++v) {
      const horse::SceneObject& o = g.objects[static_cast<std::size_t>(pick[v])];
      const horse::QueryNode& node = q.nodes[v];
      ids[v] = o.id;
      sal += o.salience;
      if (node.color && std::find(o.colors.begin(), o.colors.end(), *node.color) != o.colors.end()) ++sat;
      if (node.shape && o.shape && *o.shape == *node.shape) ++sat;
      if (node.size) {
        const auto r = static_cast<std::size_t>(o.size_rank);
        const bool ok = *node.size == horse::SizeWord::big ? r <= third : r + third > m;
        if (ok) ++sat;
      }
    }
    for (const auto& e : q.edges) {
      if (has_fact(ids[static_cast<std::size_t>(e.from_node)], e.predicate,
                   ids[static_cast<std::size_t>(e.to_node)])) {
        ++sat;
      }
    }
    if (strict && sat != total) return;
    Ranked r{g.image_id, sat, total, total == 0 ? 1.0 : static_cast<double>(sat) / total,
             sal / static_cast<double>(n), ids};
    bool better = !best;
    if (!better) {
      if (r.satisfied != best->satisfied) {
        better = r.satisfied > best->satisfied;
      } else if (r.mean_salience != best->mean_salience) {
        better = r.mean_salience > best->mean_salience;
      } else {
        better = r.object_ids < best->object_ids;
      }
    }
    if (better) best = r;
  };

  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == n) {
      evaluate();
      return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (taken[i] || g.objects[i].label != q.nodes[v].label) continue;
      taken[i] = true;
      pick[v] = static_cast<int>(i);
      self(self, v + 1);
      taken[i] = false;
    }
  };
  rec(rec, 0);
  return best;
}

inline std::vector<Ranked> brute_force_search(const std::vector<horse::SceneGraph>& corpus,
                                              const horse::QueryGraph& q, bool strict, std::size_t k) {
  std::vector<Ranked> out;
  for (const auto& g : corpus) {
    if (auto r = brute_force_bind(g, q, strict)) out.push_back(*r);
  }
  std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.mean_salience != b.mean_salience) return a.mean_salience > b.mean_salience;
    return a.image_id < b.image_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

// Random connected-or-bare queries with pairwise distinct node descriptions.
inline horse::QueryGraph random_query(std::mt19937_64& rng, const std::vector<std::string>& labels,
                                      std::size_t max_nodes = 4) {
  std::uniform_int_distribution<std::size_t> nodes(1, max_nodes);
  std::uniform_int_distribution<std::size_t> label(0, labels.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> colors = {"black", "blue", "brown", "gray"};
  const std::vector<std::string> shapes = {"oval", "rectangular", "round", "square", "triangular"};
  std::uniform_int_distribution<std::size_t> color(0, colors.size() - 1);
  std::uniform_int_distribution<std::size_t> shape(0, shapes.size() - 1);
  std::uniform_int_distribution<std::size_t> pred(0, horse::kPredicateCount - 1);

  horse::QueryGraph q;
  const std::size_t n = nodes(rng);
  while (q.nodes.size() < n) {
    horse::QueryNode node;
    node.node_id = static_cast<int>(q.nodes.size());
    node.label = labels[label(rng)];
    if (unit(rng) < 0.35) node.color = colors[color(rng)];
    if (unit(rng) < 0.2) node.shape = shapes[shape(rng)];
    if (unit(rng) < 0.2) node.size = unit(rng) < 0.5 ? horse::SizeWord::big : horse::SizeWord::small;
    const bool duplicate = std::any_of(q.nodes.begin(), q.nodes.end(), [&](const horse::QueryNode& o) {
      return o.label == node.label && o.color == node.color && o.shape == node.shape && o.size == node.size;
    });
    if (!duplicate) q.nodes.push_back(node);
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (unit(rng) < 0.85) {
      std::uniform_int_distribution<std::size_t> prev(0, v - 1);
      const int u = static_cast<int>(prev(rng));
      horse::QueryEdge e{static_cast<int>(v), horse::kAllPredicates[pred(rng)], u};
      if (unit(rng) < 0.5) std::swap(e.from_node, e.to_node);
      q.edges.push_back(e);
    }
  }
  if (n >= 3 && unit(rng) < 0.3) {
    horse::QueryEdge e{0, horse::kAllPredicates[pred(rng)], static_cast<int>(n - 1)};
    if (std::find(q.edges.begin(), q.edges.end(), e) == q.edges.end()) q.edges.push_back(e);
  }
  q.raw_text = horse::unparse(q);
  return q;
}

}  // namespace oracle
