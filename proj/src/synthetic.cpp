// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>

#include <json.hpp>

#include "horse/error.hpp"
#include "horse/ingest.hpp"
#include "horse/vocabulary.hpp"

namespace horse {

namespace {

using nlohmann::json;

constexpr double kSkyBottom = 0.30;
constexpr double kGroundTop = 0.65;
constexpr double kJitter = 0.02;
constexpr double kSkyLiftHeight = 0.08;

struct Footprint {
  double width;
  double height;
  std::vector<std::string> palette;
  std::optional<std::string> shape;
};

const std::map<std::string, Footprint, std::less<>>& known_footprints() {
  static const std::map<std::string, Footprint, std::less<>> table = {
      {"car", {0.20, 0.12, {"red", "blue", "black", "white", "gray"}, std::nullopt}},
      {"person", {0.06, 0.20, {}, std::nullopt}},
      {"tree", {0.12, 0.26, {"green"}, std::nullopt}},
      {"house", {0.22, 0.26, {"white", "brown", "beige"}, "rectangular"}},
      {"dog", {0.08, 0.10, {"brown", "black", "white"}, std::nullopt}},
      {"bicycle", {0.12, 0.10, {"red", "blue", "black"}, std::nullopt}},
      {"truck", {0.22, 0.16, {"white", "red"}, "rectangular"}},
      {"bench", {0.16, 0.10, {"brown"}, "rectangular"}},
      {"table", {0.20, 0.12, {"brown"}, "rectangular"}},
      {"ball", {0.05, 0.05, {"red", "blue", "yellow", "green"}, "round"}},
      {"cup", {0.04, 0.06, {"white", "red", "blue"}, std::nullopt}},
      {"book", {0.07, 0.04, {"red", "blue", "green"}, "rectangular"}},
  };
  return table;
}

// Labels outside the table get one of these sizes, picked by a stable hash.
const Footprint kSizeClasses[] = {
    {0.06, 0.12, {}, std::nullopt},
    {0.10, 0.14, {}, std::nullopt},
    {0.14, 0.18, {}, std::nullopt},
    {0.18, 0.22, {}, std::nullopt},
};

const char* const kTabletopItems[] = {"ball", "cup", "book"};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Distribution helpers written out by hand: the standard distributions are
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t below(std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool chance(double p) { return uniform() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

Footprint footprint_for(std::string_view label) {
  const auto& table = known_footprints();
  if (auto it = table.find(label); it != table.end()) return it->second;
  return kSizeClasses[fnv1a(label) % std::size(kSizeClasses)];
}

SceneObject make_object(int id, std::string label, BBox box, Rng& rng,
                        const Footprint& fp) {
  SceneObject o;
  o.id = id;
  o.label = std::move(label);
  o.bbox = box;
  if (!fp.palette.empty()) o.colors = {rng.pick(fp.palette)};
  o.shape = fp.shape;
  return o;
}

BBox standing_box(double center_x, double width, double height, double base_y) {
  return {std::max(0.0, center_x - width / 2.0), base_y - height,
          std::min(1.0, center_x + width / 2.0), base_y};
}

double slot_center(std::size_t slot, std::size_t slots, double width, Rng& rng) {
  const double slot_width = 1.0 / static_cast<double>(slots);
  const double center = (static_cast<double>(slot) + 0.5) * slot_width;
  const double room = std::min(kJitter, std::max(0.0, (slot_width - width) / 2.0));
  return center + rng.uniform(-room, room);
}

}  // namespace

GeneratorSpec parse_generator_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("generator spec: ") + e.what(), e.byte);
  }
  GeneratorSpec spec;
  try {
    if (doc.contains("n_scenes")) spec.n_scenes = doc.at("n_scenes").get<std::size_t>();
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("label_pool")) spec.label_pool = doc.at("label_pool").get<std::vector<std::string>>();
    if (doc.contains("anomaly_rate")) spec.anomaly_rate = doc.at("anomaly_rate").get<double>();
    if (doc.contains("table_rate")) spec.table_rate = doc.at("table_rate").get<double>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("generator spec: ") + e.what());
  }
  return spec;
}

std::vector<SyntheticScene> generate_synthetic(const GeneratorSpec& spec,
                                               const RelationConfig& relations,
                                               const SalienceWeights& salience) {
  if (spec.label_pool.empty()) throw Error(Errc::config_error, "generator: empty label_pool");
  if (spec.n_scenes == 0) throw Error(Errc::config_error, "generator: n_scenes must be >= 1");
  if (!(spec.anomaly_rate >= 0.0 && spec.anomaly_rate <= 1.0)) {
    throw Error(Errc::config_error, "generator: anomaly_rate must lie in [0,1]");
  }
  if (!(spec.table_rate >= 0.0 && spec.table_rate <= 1.0)) {
    throw Error(Errc::config_error, "generator: table_rate must lie in [0,1]");
  }

  const Vocabulary vocab = Vocabulary::defaults();
  std::vector<std::string> pool;
  for (const auto& label : spec.label_pool) {
    std::string canon = vocab.canon_label(label);
    if (canon.empty()) throw Error(Errc::config_error, "generator: empty label in label_pool");
    pool.push_back(std::move(canon));
  }

  Rng rng(spec.seed);
  const auto n_anomalies = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.n_scenes) * spec.anomaly_rate));
  std::vector<std::size_t> order(spec.n_scenes);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<bool> anomalous(spec.n_scenes, false);
  for (std::size_t i = 0; i < n_anomalies; ++i) anomalous[order[i]] = true;

  const std::vector<std::string> sky_colors = {"blue", "blue", "blue", "gray"};
  const std::vector<std::string> ground_colors = {"green", "gray", "brown"};

  std::vector<SyntheticScene> scenes;
  scenes.reserve(spec.n_scenes);
  for (std::size_t s = 0; s < spec.n_scenes; ++s) {
    const double scale = rng.uniform(0.9, 1.1);
    const bool has_table = rng.chance(spec.table_rate);
    const std::size_t pool_count = 2 + rng.below(has_table ? 2 : 3);
    const std::size_t slots = pool_count + (has_table ? 1 : 0);

    std::vector<SceneObject> objects;
    int next_id = 0;
    SceneObject sky = make_object(next_id++, "sky", {0.0, 0.0, 1.0, kSkyBottom}, rng, {});
    sky.colors = {rng.pick(sky_colors)};
    SceneObject ground = make_object(next_id++, "ground", {0.0, kGroundTop, 1.0, 1.0}, rng, {});
    ground.colors = {rng.pick(ground_colors)};
    objects.push_back(std::move(sky));
    objects.push_back(std::move(ground));

    std::vector<std::size_t> slot_order(slots);
    for (std::size_t i = 0; i < slots; ++i) slot_order[i] = i;
    for (std::size_t i = slots; i > 1; --i) std::swap(slot_order[i - 1], slot_order[rng.below(i)]);

    std::vector<std::size_t> pool_indices;  // positions in `objects`
    for (std::size_t k = 0; k < pool_count; ++k) {
      const std::string& label = rng.pick(pool);
      const Footprint fp = footprint_for(label);
      const double w = fp.width * scale;
      const double h = fp.height * scale;
      const double cx = slot_center(slot_order[k], slots, w, rng);
      pool_indices.push_back(objects.size());
      objects.push_back(make_object(next_id++, label, standing_box(cx, w, h, kGroundTop), rng, fp));
    }
    if (has_table) {
      const Footprint table_fp = footprint_for("table");
      const double tw = table_fp.width * scale;
      const double th = table_fp.height * scale;
      const double cx = slot_center(slot_order[pool_count], slots, tw, rng);
      objects.push_back(
          make_object(next_id++, "table", standing_box(cx, tw, th, kGroundTop), rng, table_fp));
      const std::string item = kTabletopItems[rng.below(std::size(kTabletopItems))];
      const Footprint item_fp = footprint_for(item);
      objects.push_back(make_object(
          next_id++, item,
          standing_box(cx, item_fp.width * scale, item_fp.height * scale, kGroundTop - th), rng,
          item_fp));
    }

    std::optional<std::string> violation;
    if (anomalous[s]) {
      SceneObject& lifted = objects[pool_indices[rng.below(pool_indices.size())]];
      const double shrink = std::min(1.0, kSkyLiftHeight / lifted.bbox.height());
      const double w = lifted.bbox.width() * shrink;
      const double h = lifted.bbox.height() * shrink;
      const double cx = lifted.bbox.center_x();
      lifted.bbox = {cx - w / 2.0, 0.01, cx + w / 2.0, 0.01 + h};
      violation = lifted.label + " above sky";
    }

    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", s);
    scenes.push_back({make_scene_graph(id, std::nullopt, std::move(objects), relations, salience),
                      std::move(violation)});
  }
  return scenes;
}

std::string export_synthetic(const std::vector<SyntheticScene>& scenes) {
  std::vector<SceneGraph> graphs;
  graphs.reserve(scenes.size());
  for (const auto& s : scenes) graphs.push_back(s.graph);
  json doc = json::parse(export_annotations(graphs));
  auto& images = doc["images"];
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    images[i]["violation"] = scenes[i].violation ? json(*scenes[i].violation) : json(nullptr);
  }
  return doc.dump(2);
}

}  // namespace horse
