// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "horse/scene.hpp"

namespace fixture {

inline horse::SceneObject make(int id, std::string label, horse::BBox box,
                               std::vector<std::string> colors = {},
                               std::optional<std::string> shape = std::nullopt) {
  horse::SceneObject o;
  o.id = id;
  o.label = std::move(label);
  o.bbox = box;
  o.colors = std::move(colors);
  o.shape = std::move(shape);
  return o;
}

inline std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, i);
  return buf;
}

struct CarCorpus {
  std::vector<horse::SceneGraph> graphs;
  std::string violator;
};

// 100 scenes holding one sky, one ground and one car. The car stands on the
// ground in 99 of them; in the remaining one it floats in the sky band.
inline CarCorpus car_on_ground_corpus(std::size_t violator_index = 57) {
  CarCorpus out;
  for (std::size_t i = 0; i < 100; ++i) {
    const double cx = 0.2 + 0.006 * static_cast<double>(i);
    std::vector<horse::SceneObject> objs = {
        make(0, "sky", {0.0, 0.0, 1.0, 0.3}, {"blue"}),
        make(1, "ground", {0.0, 0.65, 1.0, 1.0}, {"gray"}),
    };
    if (i == violator_index) {
      objs.push_back(make(2, "car", {cx - 0.1, 0.02, cx + 0.1, 0.1}, {"red"}));
    } else {
      objs.push_back(make(2, "car", {cx - 0.1, 0.53, cx + 0.1, 0.65}, {"red"}));
    }
    out.graphs.push_back(horse::make_scene_graph(numbered("car", i), std::nullopt, std::move(objs)));
  }
  out.violator = numbered("car", violator_index);
  return out;
}

struct TableCorpus {
  std::vector<horse::SceneGraph> graphs;
  std::string only_match;  // the one image with a red ball on a table
};

// 100 scenes with a table and a ball. Balls are red only in every tenth
// scene, and only one of those red balls rests on the table; the others lie
// on the floor beside it. Non-red balls sit on the table.
inline TableCorpus red_ball_on_table_corpus() {
  TableCorpus out;
  const char* const others[] = {"blue", "green", "yellow"};
  for (std::size_t i = 0; i < 100; ++i) {
    const bool red = i % 10 == 4;
    const bool on_table = !red || i == 44;
    const horse::BBox table{0.30, 0.50, 0.70, 0.80};
    const horse::BBox ball = on_table ? horse::BBox{0.45, 0.30, 0.55, 0.50} : horse::BBox{0.80, 0.85, 0.90, 0.95};
    std::vector<horse::SceneObject> objs = {
        make(0, "table", table, {"brown"}, "rectangular"),
        make(1, "ball", ball, {red ? "red" : others[i % 3]}, "round"),
    };
    if (i % 4 == 0) objs.push_back(make(2, "cup", {0.60, 0.42, 0.66, 0.50}, {"white"}));
    horse::SceneGraph g = horse::make_scene_graph(numbered("tbl", i), std::nullopt, std::move(objs));
    if (i == 44) g.image_uri = "images/tbl-044.png";
    out.graphs.push_back(std::move(g));
  }
  out.only_match = "tbl-044";
  return out;
}

}  // namespace fixture
