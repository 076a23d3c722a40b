// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "horse/scene.hpp"
#include "horse/vocabulary.hpp"

namespace horse {

struct IngestOptions {
  double min_confidence = 0.5;
  RelationConfig relations;
  SalienceWeights salience;
  std::int64_t built_at = 0;
};

struct LoadReport {
  std::size_t images = 0;
  std::size_t objects_kept = 0;
  std::size_t objects_dropped = 0;       // below min_confidence
  std::vector<std::string> empty_images;  // retained with no objects
  std::vector<std::string> warnings;      // unknown fields, unknown colors, ...
};

struct LoadResult {
  std::vector<SceneGraph> graphs;
  LoadReport report;
};

/// Reads an annotation document:
///
///   { "images": [ { "image_id": str, "image_uri"?: str,
///                   "width_px": num, "height_px": num,
///                   "objects": [ { "label": str, "bbox_px": [x, y, w, h],
///                                  "depth"?: num, "colors"?: [str],
///                                  "shape"?: str, "confidence"?: num,
///                                  "attributes"?: [str] } ] } ] }
///
/// Pixel boxes are divided by the image dimensions. Objects are numbered in
/// order of survival after the confidence filter.
///
/// Errors: parse_error (with line and field path), duplicate_image,
/// bad_geometry (naming the image and object index).
LoadResult load_annotations(std::istream& source, const Vocabulary& vocab,
                            const IngestOptions& options = {});
LoadResult load_annotations(std::string_view text, const Vocabulary& vocab,
                            const IngestOptions& options = {});

/// Concatenates several loads, rejecting image ids seen more than once.
LoadResult merge(std::vector<LoadResult> parts);

/// Writes graphs back as an annotation document on a width x height pixel
/// canvas. Loading the output reproduces the graphs to within 1e-9.
std::string export_annotations(const std::vector<SceneGraph>& graphs,
                               double width_px = 1000.0, double height_px = 1000.0);

}  // namespace horse
