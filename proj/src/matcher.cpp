// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "horse/error.hpp"

namespace horse {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::string list(const std::vector<std::string>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::size_t third(std::size_t n) { return (n + 2) / 3; }

bool size_satisfied(SizeWord want, const SceneObject& o, std::size_t n_objects) {
  const auto rank = static_cast<std::size_t>(o.size_rank);
  const std::size_t cut = third(n_objects);
  return want == SizeWord::big ? rank <= cut : rank > n_objects - cut;
}

bool edge_holds(const SceneGraph& g, int subject, Predicate p, int object) {
  if (g.has_relation({subject, p, object})) return true;
  const auto inv = inverse(p);
  return inv && g.has_relation({object, *inv, subject});
}

std::string edge_text(const QueryGraph& q, const QueryEdge& e) {
  return std::string(to_string(e.predicate)) + "(" + q.node(e.from_node).label + "," +
         q.node(e.to_node).label + ")";
}

// Depth-first enumeration of injective label-consistent bindings, keeping the
// best by (bound nodes, satisfied weight, mean salience, object ids).
class BindingSearch {
 public:
  BindingSearch(const SceneGraph& g, const QueryGraph& q, MatchMode mode,
                const ScoringWeights& w, bool allow_unbound)
      : g_(g), q_(q), mode_(mode), w_(w), allow_unbound_(allow_unbound) {
    const std::size_t n = q.nodes.size();
    const std::size_t m = g.objects.size();
    candidates_.resize(n);
    attr_gain_.assign(n, std::vector<double>(m, 0.0));
    attr_full_.assign(n, std::vector<bool>(m, false));
    attr_total_.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      const QueryNode& node = q.nodes[v];
      attr_total_[v] = w.attribute * node.attribute_count();
      for (std::size_t i = 0; i < m; ++i) {
        const SceneObject& o = g.objects[i];
        if (o.label != node.label) continue;
        candidates_[v].push_back(static_cast<int>(i));
        int ok = 0;
        if (node.color && o.has_color(*node.color)) ++ok;
        if (node.shape && o.shape == node.shape) ++ok;
        if (node.size && size_satisfied(*node.size, o, m)) ++ok;
        attr_gain_[v][i] = w.attribute * ok;
        attr_full_[v][i] = ok == node.attribute_count();
      }
      if (allow_unbound) candidates_[v].push_back(-1);
    }

    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return candidates_[a].size() < candidates_[b].size();
    });
    std::vector<std::size_t> depth_of(n);
    for (std::size_t d = 0; d < n; ++d) depth_of[order_[d]] = d;
    completes_.resize(n);
    for (std::size_t e = 0; e < q.edges.size(); ++e) {
      const auto a = static_cast<std::size_t>(q.edges[e].from_node);
      const auto b = static_cast<std::size_t>(q.edges[e].to_node);
      completes_[std::max(depth_of[a], depth_of[b])].push_back(e);
    }
    // Upper bound of the weight still obtainable from depth d onward.
    remaining_.assign(n + 1, 0.0);
    for (std::size_t d = n; d-- > 0;) {
      remaining_[d] = remaining_[d + 1] + attr_total_[order_[d]] +
                      w.edge * static_cast<double>(completes_[d].size());
    }
    total_ = remaining_.empty() ? 0.0 : remaining_[0];

    assign_.assign(n, -1);
    used_.assign(m, false);
  }

  bool run() {
    dfs(0, 0.0, 0);
    return found_;
  }

  MatchResult result() const {
    MatchResult r;
    r.image_id = g_.image_id;
    r.score = total_ > 0.0 ? best_sat_ / total_ : 1.0;
    r.mean_salience = best_salience_;
    r.binding.resize(q_.nodes.size());
    for (std::size_t v = 0; v < q_.nodes.size(); ++v) {
      if (best_[v] >= 0) r.binding[v] = g_.objects[static_cast<std::size_t>(best_[v])].id;
    }
    return r;
  }

  const std::vector<int>& best_indices() const { return best_; }

 private:
  void dfs(std::size_t depth, double sat, std::size_t bound) {
    const std::size_t n = q_.nodes.size();
    if (depth == n) {
      consider(sat, bound);
      return;
    }
    const std::size_t v = order_[depth];
    for (int c : candidates_[v]) {
      if (c >= 0 && used_[static_cast<std::size_t>(c)]) continue;
      double gain = c >= 0 ? attr_gain_[v][static_cast<std::size_t>(c)] : 0.0;
      if (mode_ == MatchMode::strict && c >= 0 && !attr_full_[v][static_cast<std::size_t>(c)]) continue;
      assign_[v] = c;
      bool edges_ok = true;
      for (std::size_t e : completes_[depth]) {
        const QueryEdge& edge = q_.edges[e];
        const int a = assign_[static_cast<std::size_t>(edge.from_node)];
        const int b = assign_[static_cast<std::size_t>(edge.to_node)];
        const bool holds = a >= 0 && b >= 0 &&
                           edge_holds(g_, g_.objects[static_cast<std::size_t>(a)].id, edge.predicate,
                                      g_.objects[static_cast<std::size_t>(b)].id);
        if (holds) {
          gain += w_.edge;
        } else {
          edges_ok = false;
        }
      }
      const bool pruned =
          (mode_ == MatchMode::strict && !edges_ok) ||
          (!allow_unbound_ && found_ && sat + gain + remaining_[depth + 1] < best_sat_);
      if (!pruned) {
        if (c >= 0) used_[static_cast<std::size_t>(c)] = true;
        dfs(depth + 1, sat + gain, bound + (c >= 0 ? 1 : 0));
        if (c >= 0) used_[static_cast<std::size_t>(c)] = false;
      }
      assign_[v] = -1;
    }
  }

  void consider(double sat, std::size_t bound) {
    double salience_sum = 0.0;
    std::vector<int> ids(assign_.size(), -1);
    for (std::size_t v = 0; v < assign_.size(); ++v) {
      if (assign_[v] < 0) continue;
      const SceneObject& o = g_.objects[static_cast<std::size_t>(assign_[v])];
      salience_sum += o.salience;
      ids[v] = o.id;
    }
    const double salience = bound > 0 ? salience_sum / static_cast<double>(bound) : 0.0;

    bool better = !found_;
    if (!better) {
      if (bound != best_bound_) {
        better = bound > best_bound_;
      } else if (sat != best_sat_) {
        better = sat > best_sat_;
      } else if (salience != best_salience_) {
        better = salience > best_salience_;
      } else {
        better = ids < best_ids_;
      }
    }
    if (!better) return;
    found_ = true;
    best_bound_ = bound;
    best_sat_ = sat;
    best_salience_ = salience;
    best_ids_ = std::move(ids);
    best_ = assign_;
  }

  const SceneGraph& g_;
  const QueryGraph& q_;
  MatchMode mode_;
  ScoringWeights w_;
  bool allow_unbound_;

  std::vector<std::vector<int>> candidates_;  // object indices per node
  std::vector<std::vector<double>> attr_gain_;
  std::vector<std::vector<bool>> attr_full_;
  std::vector<double> attr_total_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> completes_;  // edges closed at each depth
  std::vector<double> remaining_;
  double total_ = 0.0;

  std::vector<int> assign_;
  std::vector<bool> used_;

  bool found_ = false;
  std::size_t best_bound_ = 0;
  double best_sat_ = 0.0;
  double best_salience_ = 0.0;
  std::vector<int> best_ids_;
  std::vector<int> best_;
};

void check_size(const QueryGraph& q) {
  if (q.nodes.size() > kMaxQueryNodes) {
    throw Error(Errc::query_too_large, "query has " + std::to_string(q.nodes.size()) +
                                           " nodes; at most " + std::to_string(kMaxQueryNodes) +
                                           " are supported");
  }
}

// Fills satisfied/violated for a binding given as object indices (-1 = unbound).
void classify(const SceneGraph& g, const QueryGraph& q, const std::vector<int>& assign,
              const RelationConfig* cfg, MatchResult& r) {
  const std::size_t m = g.objects.size();
  auto object = [&](int node) -> const SceneObject* {
    const int idx = assign[static_cast<std::size_t>(node)];
    return idx >= 0 ? &g.objects[static_cast<std::size_t>(idx)] : nullptr;
  };
  auto put = [&r](bool ok, ConstraintOutcome c) {
    (ok ? r.satisfied : r.violated).push_back(std::move(c));
  };

  for (const QueryNode& node : q.nodes) {
    const SceneObject* o = object(node.node_id);
    ConstraintOutcome label{ConstraintKind::label, node.label, {node.node_id}, std::nullopt};
    if (cfg) {
      Evidence ev;
      ev.holds = o != nullptr;
      ev.detail = o ? "bound to object " + std::to_string(o->id)
                    : "no available object labeled '" + node.label + "' in image";
      label.evidence = std::move(ev);
    }
    put(o != nullptr, std::move(label));

    auto attribute = [&](ConstraintKind kind, const std::string& name, const std::string& value,
                         bool holds, std::string detail,
                         std::vector<std::pair<std::string, double>> quantities = {}) {
      ConstraintOutcome c{kind, node.label + "." + name + "=" + value, {node.node_id}, std::nullopt};
      if (cfg) {
        Evidence ev;
        ev.holds = holds;
        ev.detail = o ? std::move(detail) : "node unbound";
        ev.quantities = std::move(quantities);
        c.evidence = std::move(ev);
      }
      put(holds, std::move(c));
    };
    if (node.color) {
      const bool ok = o && o->has_color(*node.color);
      attribute(ConstraintKind::color, "color", *node.color, ok,
                o ? "object colors: " + list(o->colors) : "");
    }
    if (node.shape) {
      const bool ok = o && o->shape == node.shape;
      attribute(ConstraintKind::shape, "shape", *node.shape, ok,
                o ? "object shape: " + o->shape.value_or("none") : "");
    }
    if (node.size) {
      const bool ok = o && size_satisfied(*node.size, *o, m);
      std::string detail;
      std::vector<std::pair<std::string, double>> quantities;
      if (o) {
        const std::size_t cut = third(m);
        detail = "size_rank " + std::to_string(o->size_rank) + " of " + std::to_string(m) +
                 (*node.size == SizeWord::big
                      ? "; big requires rank <= " + std::to_string(cut)
                      : "; small requires rank > " + std::to_string(m - cut));
        quantities = {{"size_rank", o->size_rank}, {"objects", static_cast<double>(m)},
                      {"third", static_cast<double>(cut)}};
      }
      attribute(ConstraintKind::size, "size", std::string(to_string(*node.size)), ok,
                std::move(detail), std::move(quantities));
    }
  }

  for (const QueryEdge& e : q.edges) {
    const SceneObject* a = object(e.from_node);
    const SceneObject* b = object(e.to_node);
    const bool ok = a && b && edge_holds(g, a->id, e.predicate, b->id);
    ConstraintOutcome c{ConstraintKind::edge, edge_text(q, e), {e.from_node, e.to_node}, std::nullopt};
    if (cfg) {
      Evidence ev;
      if (a && b) {
        ev = relation_evidence(*a, *b, e.predicate, *cfg);
        if (g.has_relation({a->id, e.predicate, b->id})) {
          ev.triple = RelationTriple{a->id, e.predicate, b->id};
        } else if (auto inv = inverse(e.predicate); inv && g.has_relation({b->id, *inv, a->id})) {
          ev.triple = RelationTriple{b->id, *inv, a->id};
        }
        ev.holds = ok;
      } else {
        ev.detail = "endpoint unbound";
      }
      c.evidence = std::move(ev);
    }
    put(ok, std::move(c));
  }
}

std::optional<MatchResult> bind_impl(const SceneGraph& graph, const QueryGraph& q, MatchMode mode,
                                     const ScoringWeights& weights) {
  BindingSearch search(graph, q, mode, weights, false);
  if (!search.run()) return std::nullopt;
  MatchResult r = search.result();
  classify(graph, q, search.best_indices(), nullptr, r);
  return r;
}

void rank(std::vector<MatchResult>& results, std::size_t k) {
  std::sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.mean_salience != b.mean_salience) return a.mean_salience > b.mean_salience;
    return a.image_id < b.image_id;
  });
  if (results.size() > k) results.resize(k);
}

}  // namespace

std::string_view to_string(MatchMode m) noexcept { return m == MatchMode::strict ? "strict" : "ranked"; }

std::optional<MatchMode> parse_match_mode(std::string_view s) noexcept {
  if (s == "strict") return MatchMode::strict;
  if (s == "ranked") return MatchMode::ranked;
  return std::nullopt;
}

std::string_view to_string(ConstraintKind k) noexcept {
  switch (k) {
    case ConstraintKind::label: return "label";
    case ConstraintKind::color: return "color";
    case ConstraintKind::shape: return "shape";
    case ConstraintKind::size: return "size";
    case ConstraintKind::edge: return "edge";
  }
  return "";
}

std::vector<std::string> candidates(const Index& index, const QueryGraph& q, MatchMode mode,
                                    bool use_relation_terms) {
  std::vector<std::vector<Posting>> lists;
  std::vector<std::string> seen;
  for (const QueryNode& n : q.nodes) {
    if (std::find(seen.begin(), seen.end(), n.label) != seen.end()) continue;
    seen.push_back(n.label);
    lists.push_back(index.lookup(Term::for_label(n.label)));
  }
  if (use_relation_terms && mode == MatchMode::strict) {
    for (const QueryEdge& e : q.edges) {
      lists.push_back(index.lookup(
          Term::for_relation(q.node(e.from_node).label, e.predicate, q.node(e.to_node).label)));
    }
  }
  return index.intersect(lists);
}

std::optional<MatchResult> bind(const SceneGraph& graph, const QueryGraph& q, MatchMode mode,
                                const ScoringWeights& weights) {
  check_size(q);
  return bind_impl(graph, q, mode, weights);
}

std::vector<MatchResult> search(const Index& index, const QueryGraph& q,
                                const SearchOptions& options, SearchStats* stats) {
  check_size(q);
  const auto ids = candidates(index, q, options.mode, options.use_relation_terms);
  std::vector<MatchResult> results;
  for (const std::string& id : ids) {
    const SceneGraph* g = index.find(id);
    if (!g) continue;
    if (auto r = bind_impl(*g, q, options.mode, options.weights)) results.push_back(std::move(*r));
  }
  if (stats) {
    stats->corpus = index.documents().size();
    stats->candidates = ids.size();
    stats->verified = ids.size();
  }
  rank(results, options.k);
  return results;
}

std::vector<MatchResult> search_linear(std::span<const SceneGraph> graphs, const QueryGraph& q,
                                       const SearchOptions& options) {
  check_size(q);
  std::vector<MatchResult> results;
  for (const SceneGraph& g : graphs) {
    if (auto r = bind_impl(g, q, options.mode, options.weights)) results.push_back(std::move(*r));
  }
  rank(results, options.k);
  return results;
}

MatchResult explain(const SceneGraph& graph, const QueryGraph& q, const RelationConfig& cfg,
                    const ScoringWeights& weights) {
  if (q.nodes.empty()) throw Error(Errc::empty_query, "empty query");
  check_size(q);
  BindingSearch search(graph, q, MatchMode::ranked, weights, true);
  search.run();
  MatchResult r = search.result();
  classify(graph, q, search.best_indices(), &cfg, r);
  return r;
}

MatchResult explain(const Index& index, std::string_view image_id, const QueryGraph& q,
                    const ScoringWeights& weights) {
  const SceneGraph* g = index.find(image_id);
  if (!g) throw Error(Errc::not_found, "unknown image '" + std::string(image_id) + "'");
  RelationConfig cfg;
  if (const auto& snap = index.config_snapshot(); snap.contains("relations")) {
    cfg = relation_config_from_json(snap["relations"]);
  }
  return explain(*g, q, cfg, weights);
}

Evidence relation_evidence(const SceneObject& a, const SceneObject& b, Predicate p,
                           const RelationConfig& cfg) {
  const std::string A = a.label;
  const std::string B = b.label;
  const BBox& ab = a.bbox;
  const BBox& bb = b.bbox;
  Evidence ev;

  auto mirrored = [&](Predicate forward) {
    Evidence e = relation_evidence(b, a, forward, cfg);
    e.rule = std::string(to_string(p)) + "(" + A + "," + B + ") <=> " + std::string(to_string(forward)) +
             "(" + B + "," + A + "): " + e.rule;
    return e;
  };

  switch (p) {
    case Predicate::above: {
      const double overlap = x_overlap(ab, bb);
      ev.holds = rule_less(ab.center_y(), bb.center_y() - cfg.tau_v) &&
                 (!cfg.above_requires_overlap || rule_less(0.0, overlap));
      ev.quantities = {{"y_center(" + A + ")", ab.center_y()},
                       {"y_center(" + B + ")", bb.center_y()},
                       {"tau_v", cfg.tau_v},
                       {"x_overlap", overlap}};
      ev.rule = "y_center(" + A + ") = " + num(ab.center_y()) + " < y_center(" + B + ") - tau_v = " +
                num(bb.center_y()) + " - " + num(cfg.tau_v) +
                (cfg.above_requires_overlap ? " and x_overlap = " + num(overlap) + " > 0" : "");
      break;
    }
    case Predicate::below: return mirrored(Predicate::above);
    case Predicate::left_of: {
      ev.holds = rule_less(ab.center_x(), bb.center_x() - cfg.tau_h);
      ev.quantities = {{"x_center(" + A + ")", ab.center_x()},
                       {"x_center(" + B + ")", bb.center_x()},
                       {"tau_h", cfg.tau_h}};
      ev.rule = "x_center(" + A + ") = " + num(ab.center_x()) + " < x_center(" + B + ") - tau_h = " +
                num(bb.center_x()) + " - " + num(cfg.tau_h);
      break;
    }
    case Predicate::right_of: return mirrored(Predicate::left_of);
    case Predicate::contains: {
      const bool inside = encloses(ab, bb);
      ev.holds = inside && rule_at_most(b.area, cfg.kappa * a.area);
      ev.quantities = {{"area(" + A + ")", a.area}, {"area(" + B + ")", b.area}, {"kappa", cfg.kappa}};
      ev.rule = "box(" + B + ") within box(" + A + ") is " + (inside ? "true" : "false") +
                " and area(" + B + ") = " + num(b.area) + " <= kappa * area(" + A + ") = " +
                num(cfg.kappa) + " * " + num(a.area);
      break;
    }
    case Predicate::inside: return mirrored(Predicate::contains);
    case Predicate::on: {
      const double gap = std::abs(ab.y_max - bb.y_min);
      const double ratio = x_overlap(ab, bb) / ab.width();
      const bool reverse_contains = encloses(bb, ab) && rule_at_most(a.area, cfg.kappa * b.area);
      ev.holds = rule_at_most(gap, cfg.eps_on) && rule_at_most(cfg.on_overlap, ratio) && !reverse_contains;
      ev.quantities = {{"y_max(" + A + ")", ab.y_max},
                       {"y_min(" + B + ")", bb.y_min},
                       {"gap", gap},
                       {"eps_on", cfg.eps_on},
                       {"x_overlap_ratio", ratio},
                       {"on_overlap", cfg.on_overlap}};
      ev.rule = "|y_max(" + A + ") - y_min(" + B + ")| = |" + num(ab.y_max) + " - " + num(bb.y_min) +
                "| = " + num(gap) + " <= eps_on " + num(cfg.eps_on) + " and x_overlap/width(" + A +
                ") = " + num(ratio) + " >= " + num(cfg.on_overlap) + " and contains(" + B + "," + A +
                ") is " + (reverse_contains ? "true" : "false");
      break;
    }
    case Predicate::in_front_of: {
      if (!a.depth || !b.depth) {
        ev.holds = false;
        ev.rule = "depth(" + A + ") < depth(" + B + ") - tau_d";
        ev.detail = "depth not annotated for both objects";
        break;
      }
      ev.holds = rule_less(*a.depth, *b.depth - cfg.tau_d);
      ev.quantities = {{"depth(" + A + ")", *a.depth}, {"depth(" + B + ")", *b.depth}, {"tau_d", cfg.tau_d}};
      ev.rule = "depth(" + A + ") = " + num(*a.depth) + " < depth(" + B + ") - tau_d = " +
                num(*b.depth) + " - " + num(cfg.tau_d);
      break;
    }
    case Predicate::behind: return mirrored(Predicate::in_front_of);
    case Predicate::near: {
      const double d = center_distance(ab, bb);
      const bool nested = (encloses(ab, bb) && rule_at_most(b.area, cfg.kappa * a.area)) ||
                          (encloses(bb, ab) && rule_at_most(a.area, cfg.kappa * b.area));
      ev.holds = rule_at_most(d, cfg.delta_near) && !nested;
      ev.quantities = {{"center_distance", d}, {"delta_near", cfg.delta_near}};
      ev.rule = "center_distance(" + A + "," + B + ") = " + num(d) + " <= delta_near " +
                num(cfg.delta_near) + " and nested is " + (nested ? "true" : "false");
      break;
    }
    case Predicate::bigger_than: {
      ev.holds = rule_at_most(cfg.sigma * b.area, a.area);
      ev.quantities = {{"area(" + A + ")", a.area}, {"area(" + B + ")", b.area}, {"sigma", cfg.sigma}};
      ev.rule = "area(" + A + ") = " + num(a.area) + " >= sigma * area(" + B + ") = " + num(cfg.sigma) +
                " * " + num(b.area);
      break;
    }
    case Predicate::smaller_than: return mirrored(Predicate::bigger_than);
  }
  return ev;
}

}  // namespace horse
