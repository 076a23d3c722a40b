// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "horse/error.hpp"
#include "horse/ingest.hpp"
#include "horse/synthetic.hpp"

using namespace horse;

namespace {

const SceneObject* first_with(const SceneGraph& g, std::string_view label) {
  for (const auto& o : g.objects) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

// Templated conventions: sky on top, everything standing on the ground or
// on a table, nothing up in the sky band.
std::vector<std::string> broken_conventions(const SceneGraph& g) {
  std::vector<std::string> out;
  const SceneObject* sky = first_with(g, "sky");
  const SceneObject* ground = first_with(g, "ground");
  const SceneObject* table = first_with(g, "table");
  if (!sky || !ground) return {"missing sky or ground"};
  for (const auto& o : g.objects) {
    if (o.id == sky->id || o.id == ground->id) continue;
    if (g.has_relation({o.id, Predicate::above, sky->id})) out.push_back(o.label + " above sky");
    if (g.has_relation({o.id, Predicate::inside, sky->id})) out.push_back(o.label + " inside sky");
    const bool tabletop = o.label == "ball" || o.label == "cup" || o.label == "book";
    if (tabletop && table && g.has_relation({o.id, Predicate::on, table->id})) continue;
    if (!g.has_relation({o.id, Predicate::on, ground->id})) out.push_back(o.label + " not on ground");
  }
  return out;
}

}  // namespace

TEST_CASE("generator: exact anomaly count from round(n * rate)") {
  GeneratorSpec spec;
  spec.n_scenes = 100;
  spec.seed = 7;
  spec.anomaly_rate = 0.01;
  const auto scenes = generate_synthetic(spec);
  CHECK(scenes.size() == 100);
  CHECK(std::count_if(scenes.begin(), scenes.end(), [](const auto& s) { return s.violation.has_value(); }) == 1);

  spec.n_scenes = 250;
  spec.anomaly_rate = 0.1;
  const auto more = generate_synthetic(spec);
  CHECK(std::count_if(more.begin(), more.end(), [](const auto& s) { return s.violation.has_value(); }) == 25);
}

TEST_CASE("generator: same spec gives byte-identical output") {
  GeneratorSpec spec;
  spec.n_scenes = 60;
  spec.seed = 1234;
  CHECK(export_synthetic(generate_synthetic(spec)) == export_synthetic(generate_synthetic(spec)));
  GeneratorSpec other = spec;
  other.seed = 1235;
  CHECK(export_synthetic(generate_synthetic(spec)) != export_synthetic(generate_synthetic(other)));
}

TEST_CASE("generator: clean scenes satisfy every convention") {
  GeneratorSpec spec;
  spec.n_scenes = 300;
  spec.seed = 3;
  spec.anomaly_rate = 0.0;
  for (const auto& s : generate_synthetic(spec)) {
    CAPTURE(s.graph.image_id);
    CHECK_FALSE(s.violation.has_value());
    CHECK(broken_conventions(s.graph).empty());
    for (const auto& o : s.graph.objects) CHECK(o.bbox.valid());
  }
}

TEST_CASE("generator: injected scenes break the recorded convention") {
  GeneratorSpec spec;
  spec.n_scenes = 200;
  spec.seed = 8;
  spec.anomaly_rate = 0.05;
  std::size_t flagged = 0;
  for (const auto& s : generate_synthetic(spec)) {
    const auto broken = broken_conventions(s.graph);
    if (s.violation) {
      ++flagged;
      CHECK(std::find(broken.begin(), broken.end(), *s.violation) != broken.end());
    } else {
      CHECK(broken.empty());
    }
  }
  CHECK(flagged == 10);
}

TEST_CASE("generator: bad specs are rejected") {
  GeneratorSpec spec;
  spec.label_pool.clear();
  try {
    generate_synthetic(spec);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_error);
  }
  spec = GeneratorSpec{};
  spec.n_scenes = 0;
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
  spec = GeneratorSpec{};
  spec.anomaly_rate = 1.5;
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
}

TEST_CASE("generator: spec file and export reload") {
  const GeneratorSpec spec = parse_generator_spec(
      R"({"n_scenes": 20, "seed": 5, "label_pool": ["Cars", "zebra"], "anomaly_rate": 0.1})");
  CHECK(spec.n_scenes == 20);
  CHECK(spec.label_pool.size() == 2);
  const auto scenes = generate_synthetic(spec);
  for (const auto& s : scenes) {
    for (const auto& o : s.graph.objects) {
      CHECK(o.label != "Cars");
    }
  }
  const auto reloaded = load_annotations(std::string_view(export_synthetic(scenes)), Vocabulary::defaults());
  CHECK(reloaded.report.warnings.empty());
  REQUIRE(reloaded.graphs.size() == scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) CHECK(equivalent(scenes[i].graph, reloaded.graphs[i], 1e-9));
  CHECK_THROWS_AS(parse_generator_spec("{"), Error);
}
