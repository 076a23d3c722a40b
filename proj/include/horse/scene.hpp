// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace horse {

/// Axis-aligned box in normalized image coordinates. Origin is the top-left
/// corner and y grows downward.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }
  double center_x() const noexcept { return (x_min + x_max) / 2.0; }
  double center_y() const noexcept { return (y_min + y_max) / 2.0; }

  /// 0 <= min < max <= 1 on both axes.
  bool valid() const noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Rule comparisons treat differences up to this size as ties, so boxes that
/// differ only by rounding derive the same relations.
inline constexpr double kRuleTolerance = 1e-9;

/// a < b by more than kRuleTolerance.
constexpr bool rule_less(double a, double b) noexcept { return a < b - kRuleTolerance; }

/// a <= b up to kRuleTolerance.
constexpr bool rule_at_most(double a, double b) noexcept { return a <= b + kRuleTolerance; }

/// Length of the overlap of two boxes' x-intervals (0 when disjoint).
double x_overlap(const BBox& a, const BBox& b) noexcept;

/// Non-strict edge inclusion: `inner` lies entirely within `outer`, edges
/// compared with rule_at_most.
bool encloses(const BBox& outer, const BBox& inner) noexcept;

double center_distance(const BBox& a, const BBox& b) noexcept;

struct SceneObject {
  int id = 0;
  std::string label;
  BBox bbox;
  std::optional<double> depth;  // 0 = nearest to the camera
  std::vector<std::string> colors;  // sorted, unique
  std::optional<std::string> shape;
  double confidence = 1.0;
  // Opaque pass-through descriptors (emotion, gesture, ...). Never interpreted.
  std::vector<std::string> attributes;

  // Derived by normalize_sizes.
  double area = 0.0;
  int size_rank = 0;
  double salience = 0.0;

  bool has_color(std::string_view color) const;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

enum class Predicate : std::uint8_t {
  above,
  below,
  left_of,
  right_of,
  in_front_of,
  behind,
  contains,
  inside,
  on,
  near,
  bigger_than,
  smaller_than,
};

inline constexpr std::size_t kPredicateCount = 12;

inline constexpr std::array<Predicate, kPredicateCount> kAllPredicates = {
    Predicate::above,       Predicate::below,       Predicate::left_of,
    Predicate::right_of,    Predicate::in_front_of, Predicate::behind,
    Predicate::contains,    Predicate::inside,      Predicate::on,
    Predicate::near,        Predicate::bigger_than, Predicate::smaller_than,
};

std::string_view to_string(Predicate p) noexcept;
std::optional<Predicate> parse_predicate(std::string_view name) noexcept;

/// Stored inverse of a predicate. `on` has none; `near` is its own inverse.
std::optional<Predicate> inverse(Predicate p) noexcept;

struct RelationTriple {
  int subject_id = 0;
  Predicate predicate = Predicate::above;
  int object_id = 0;

  friend auto operator<=>(const RelationTriple&, const RelationTriple&) = default;
};

/// Thresholds for the geometric relation rules.
struct RelationConfig {
  double tau_v = 0.05;       // vertical center gap for above/below
  double tau_h = 0.05;       // horizontal center gap for left_of/right_of
  double eps_on = 0.05;      // max gap between A's bottom and B's top for on
  double on_overlap = 0.5;   // min x-overlap / width(A) for on
  double tau_d = 0.05;       // depth gap for in_front_of/behind
  double delta_near = 0.2;   // max center distance for near
  double kappa = 0.9;        // max area(B)/area(A) for contains
  double sigma = 1.5;        // min area ratio for bigger_than
  bool above_requires_overlap = true;

  friend bool operator==(const RelationConfig&, const RelationConfig&) = default;
};

struct SalienceWeights {
  double area = 0.7;
  double centrality = 0.3;

  friend bool operator==(const SalienceWeights&, const SalienceWeights&) = default;
};

struct SceneGraph {
  std::string image_id;
  std::optional<std::string> image_uri;
  std::vector<SceneObject> objects;
  std::vector<RelationTriple> relations;  // sorted, unique
  std::int64_t built_at = 0;              // unix seconds

  const SceneObject* find_object(int id) const noexcept;
  bool has_relation(const RelationTriple& t) const noexcept;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

/// Populates area, size_rank and salience. Throws Error(empty_scene) for an
/// empty list.
///
/// size_rank orders by descending area, ties by ascending id; areas are
/// compared after rounding to multiples of kRuleTolerance. The raw
/// salience is `w_area * area/max_area + w_center * (1 - d/sqrt(0.5))` where
/// d is the distance from the box center to the image center; it is rescaled
/// so the most salient object(s) score exactly 1.
std::vector<SceneObject> normalize_sizes(std::vector<SceneObject> objects,
                                         const SalienceWeights& weights = {});

/// Applies every relation rule to every ordered pair of objects. The result
/// is sorted, duplicate-free and closed under predicate inversion.
std::vector<RelationTriple> derive_relations(std::span<const SceneObject> objects,
                                             const RelationConfig& cfg = {});

/// Runs normalize_sizes and derive_relations to assemble a graph. An empty
/// object list yields an empty graph.
SceneGraph make_scene_graph(std::string image_id, std::optional<std::string> image_uri,
                            std::vector<SceneObject> objects,
                            const RelationConfig& relations = {},
                            const SalienceWeights& salience = {},
                            std::int64_t built_at = 0);

/// Structural equality ignoring built_at, with coordinates compared to `tol`.
bool equivalent(const SceneGraph& a, const SceneGraph& b, double tol = 1e-9);

}  // namespace horse
