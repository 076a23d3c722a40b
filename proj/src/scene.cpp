// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "horse/error.hpp"

namespace horse {

namespace {

constexpr std::array<std::string_view, kPredicateCount> kPredicateNames = {
    "above",  "below",  "left_of", "right_of", "in_front_of", "behind",
    "contains", "inside", "on",    "near",     "bigger_than", "smaller_than",
};

const double kCornerDistance = std::sqrt(0.5);

bool contains_rule(const SceneObject& a, const SceneObject& b, const RelationConfig& cfg) {
  return encloses(a.bbox, b.bbox) && rule_at_most(b.area, cfg.kappa * a.area);
}

}  // namespace

bool BBox::valid() const noexcept {
  return 0.0 <= x_min && x_min < x_max && x_max <= 1.0 &&
         0.0 <= y_min && y_min < y_max && y_max <= 1.0;
}

double x_overlap(const BBox& a, const BBox& b) noexcept {
  return std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
}

bool encloses(const BBox& outer, const BBox& inner) noexcept {
  return rule_at_most(outer.x_min, inner.x_min) && rule_at_most(outer.y_min, inner.y_min) &&
         rule_at_most(inner.x_max, outer.x_max) && rule_at_most(inner.y_max, outer.y_max);
}

double center_distance(const BBox& a, const BBox& b) noexcept {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

bool SceneObject::has_color(std::string_view color) const {
  return std::binary_search(colors.begin(), colors.end(), color);
}

std::string_view to_string(Predicate p) noexcept {
  return kPredicateNames[static_cast<std::size_t>(p)];
}

std::optional<Predicate> parse_predicate(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kPredicateNames.size(); ++i) {
    if (kPredicateNames[i] == name) return static_cast<Predicate>(i);
  }
  return std::nullopt;
}

std::optional<Predicate> inverse(Predicate p) noexcept {
  switch (p) {
    case Predicate::above: return Predicate::below;
    case Predicate::below: return Predicate::above;
    case Predicate::left_of: return Predicate::right_of;
    case Predicate::right_of: return Predicate::left_of;
    case Predicate::in_front_of: return Predicate::behind;
    case Predicate::behind: return Predicate::in_front_of;
    case Predicate::contains: return Predicate::inside;
    case Predicate::inside: return Predicate::contains;
    case Predicate::on: return std::nullopt;
    case Predicate::near: return Predicate::near;
    case Predicate::bigger_than: return Predicate::smaller_than;
    case Predicate::smaller_than: return Predicate::bigger_than;
  }
  return std::nullopt;
}

const SceneObject* SceneGraph::find_object(int id) const noexcept {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [id](const SceneObject& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

bool SceneGraph::has_relation(const RelationTriple& t) const noexcept {
  return std::binary_search(relations.begin(), relations.end(), t);
}

std::vector<SceneObject> normalize_sizes(std::vector<SceneObject> objects,
                                         const SalienceWeights& weights) {
  if (objects.empty()) throw Error(Errc::empty_scene, "cannot normalize an empty scene");

  double max_area = 0.0;
  for (auto& o : objects) {
    o.area = o.bbox.area();
    max_area = std::max(max_area, o.area);
  }

  std::vector<std::size_t> order(objects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Areas are ranked on a kRuleTolerance grid so rounding noise cannot
  // reorder equal areas.
  std::vector<long long> area_key(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    area_key[i] = std::llround(objects[i].area / kRuleTolerance);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (area_key[a] != area_key[b]) return area_key[a] > area_key[b];
    return objects[a].id < objects[b].id;
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    objects[order[rank]].size_rank = static_cast<int>(rank) + 1;
  }

  std::vector<double> raw(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const BBox& b = objects[i].bbox;
    const double d = std::hypot(b.center_x() - 0.5, b.center_y() - 0.5);
    raw[i] = weights.area * (objects[i].area / max_area) +
             weights.centrality * (1.0 - d / kCornerDistance);
  }
  const double best = *std::max_element(raw.begin(), raw.end());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const double s = best > 0.0 ? (raw[i] == best ? 1.0 : raw[i] / best) : 0.0;
    objects[i].salience = std::clamp(s, 0.0, 1.0);
  }
  return objects;
}

std::vector<RelationTriple> derive_relations(std::span<const SceneObject> objects,
                                             const RelationConfig& cfg) {
  std::vector<RelationTriple> out;
  auto emit = [&out](int s, Predicate p, int o) { out.push_back({s, p, o}); };

  for (const SceneObject& a : objects) {
    for (const SceneObject& b : objects) {
      if (a.id == b.id) continue;
      const BBox& ab = a.bbox;
      const BBox& bb = b.bbox;

      if (rule_less(ab.center_y(), bb.center_y() - cfg.tau_v) &&
          (!cfg.above_requires_overlap || rule_less(0.0, x_overlap(ab, bb)))) {
        emit(a.id, Predicate::above, b.id);
        emit(b.id, Predicate::below, a.id);
      }
      if (rule_less(ab.center_x(), bb.center_x() - cfg.tau_h)) {
        emit(a.id, Predicate::left_of, b.id);
        emit(b.id, Predicate::right_of, a.id);
      }
      const bool a_contains_b = contains_rule(a, b, cfg);
      const bool b_contains_a = contains_rule(b, a, cfg);
      if (a_contains_b) {
        emit(a.id, Predicate::contains, b.id);
        emit(b.id, Predicate::inside, a.id);
      }
      if (rule_at_most(std::abs(ab.y_max - bb.y_min), cfg.eps_on) &&
          rule_at_most(cfg.on_overlap, x_overlap(ab, bb) / ab.width()) && !b_contains_a) {
        emit(a.id, Predicate::on, b.id);
      }
      if (a.depth && b.depth && rule_less(*a.depth, *b.depth - cfg.tau_d)) {
        emit(a.id, Predicate::in_front_of, b.id);
        emit(b.id, Predicate::behind, a.id);
      }
      if (rule_at_most(center_distance(ab, bb), cfg.delta_near) && !a_contains_b && !b_contains_a) {
        emit(a.id, Predicate::near, b.id);
      }
      if (rule_at_most(cfg.sigma * b.area, a.area)) {
        emit(a.id, Predicate::bigger_than, b.id);
        emit(b.id, Predicate::smaller_than, a.id);
      }
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SceneGraph make_scene_graph(std::string image_id, std::optional<std::string> image_uri,
                            std::vector<SceneObject> objects,
                            const RelationConfig& relations,
                            const SalienceWeights& salience, std::int64_t built_at) {
  SceneGraph g;
  g.image_id = std::move(image_id);
  g.image_uri = std::move(image_uri);
  g.built_at = built_at;
  if (!objects.empty()) {
    g.objects = normalize_sizes(std::move(objects), salience);
    g.relations = derive_relations(g.objects, relations);
  }
  return g;
}

bool equivalent(const SceneGraph& a, const SceneGraph& b, double tol) {
  if (a.image_id != b.image_id || a.image_uri != b.image_uri ||
      a.relations != b.relations || a.objects.size() != b.objects.size()) {
    return false;
  }
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    const SceneObject& x = a.objects[i];
    const SceneObject& y = b.objects[i];
    if (x.id != y.id || x.label != y.label || x.colors != y.colors || x.shape != y.shape ||
        x.attributes != y.attributes || x.size_rank != y.size_rank ||
        x.depth.has_value() != y.depth.has_value()) {
      return false;
    }
    if (x.depth && !close(*x.depth, *y.depth)) return false;
    if (!close(x.bbox.x_min, y.bbox.x_min) || !close(x.bbox.y_min, y.bbox.y_min) ||
        !close(x.bbox.x_max, y.bbox.x_max) || !close(x.bbox.y_max, y.bbox.y_max) ||
        !close(x.confidence, y.confidence) || !close(x.area, y.area) ||
        !close(x.salience, y.salience)) {
      return false;
    }
  }
  return true;
}

}  // namespace horse
