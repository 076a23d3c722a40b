// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "horse/scene.hpp"

namespace oracle {

using Fact = std::tuple<int, std::string, int>;

// Rule comparisons treat differences up to 1e-9 as ties.
inline constexpr double kTie = 1e-9;

struct Thresholds {
  double tau_v = 0.05, tau_h = 0.05, eps_on = 0.05, tau_d = 0.05, delta_near = 0.2;
  double kappa = 0.9, sigma = 1.5, on_overlap = 0.5;
  bool above_needs_overlap = true;
};

// Evaluates every rule inequality for every ordered pair, one predicate at a
// time, straight from the box coordinates.
inline std::set<Fact> brute_force_relations(const std::vector<horse::SceneObject>& objs,
                                            const Thresholds& t = {}) {
  struct Box {
    double x0, y0, x1, y1;
    double cx() const { return (x0 + x1) / 2.0; }
    double cy() const { return (y0 + y1) / 2.0; }
    double w() const { return x1 - x0; }
    double area() const { return (x1 - x0) * (y1 - y0); }
  };
  auto box = [](const horse::SceneObject& o) {
    return Box{o.bbox.x_min, o.bbox.y_min, o.bbox.x_max, o.bbox.y_max};
  };
  auto overlap = [](const Box& a, const Box& b) {
    const double lo = a.x0 > b.x0 ? a.x0 : b.x0;
    const double hi = a.x1 < b.x1 ? a.x1 : b.x1;
    return hi - lo > 0.0 ? hi - lo : 0.0;
  };
  auto above = [&](const Box& a, const Box& b) {
    return a.cy() + kTie < b.cy() - t.tau_v && (!t.above_needs_overlap || overlap(a, b) > kTie);
  };
  auto left = [&](const Box& a, const Box& b) { return a.cx() + kTie < b.cx() - t.tau_h; };
  auto contains = [&](const Box& a, const Box& b) {
    const bool within = a.x0 - kTie <= b.x0 && a.y0 - kTie <= b.y0 && b.x1 - kTie <= a.x1 && b.y1 - kTie <= a.y1;
    return within && b.area() - kTie <= t.kappa * a.area();
  };
  auto on = [&](const Box& a, const Box& b) {
    return std::fabs(a.y1 - b.y0) - kTie <= t.eps_on && overlap(a, b) / a.w() + kTie >= t.on_overlap &&
           !contains(b, a);
  };
  auto front = [&](const horse::SceneObject& a, const horse::SceneObject& b) {
    return a.depth.has_value() && b.depth.has_value() && *a.depth + kTie < *b.depth - t.tau_d;
  };
  auto near = [&](const Box& a, const Box& b) {
    const double dx = a.cx() - b.cx();
    const double dy = a.cy() - b.cy();
    return std::hypot(dx, dy) - kTie <= t.delta_near && !contains(a, b) && !contains(b, a);
  };
  auto bigger = [&](const Box& a, const Box& b) { return a.area() + kTie >= t.sigma * b.area(); };

  std::set<Fact> out;
  for (const auto& oa : objs) {
    for (const auto& ob : objs) {
      if (oa.id == ob.id) continue;
      const Box a = box(oa);
      const Box b = box(ob);
      if (above(a, b)) out.insert({oa.id, "above", ob.id});
      if (above(b, a)) out.insert({oa.id, "below", ob.id});
      if (left(a, b)) out.insert({oa.id, "left_of", ob.id});
      if (left(b, a)) out.insert({oa.id, "right_of", ob.id});
      if (contains(a, b)) out.insert({oa.id, "contains", ob.id});
      if (contains(b, a)) out.insert({oa.id, "inside", ob.id});
      if (on(a, b)) out.insert({oa.id, "on", ob.id});
      if (front(oa, ob)) out.insert({oa.id, "in_front_of", ob.id});
      if (front(ob, oa)) out.insert({oa.id, "behind", ob.id});
      if (near(a, b)) out.insert({oa.id, "near", ob.id});
      if (bigger(a, b)) out.insert({oa.id, "bigger_than", ob.id});
      if (bigger(b, a)) out.insert({oa.id, "smaller_than", ob.id});
    }
  }
  return out;
}

inline std::set<Fact> as_facts(const std::vector<horse::RelationTriple>& triples) {
  std::set<Fact> out;
  for (const auto& r : triples) {
    out.insert({r.subject_id, std::string(horse::to_string(r.predicate)), r.object_id});
  }
  return out;
}

}  // namespace oracle
