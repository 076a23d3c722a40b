// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/ingest.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "horse/error.hpp"

namespace horse {

using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kImageFields = {
    "image_id", "image_uri", "width_px", "height_px", "objects", "violation",
};
const std::set<std::string, std::less<>> kObjectFields = {
    "label", "bbox_px", "depth", "colors", "shape", "confidence", "attributes",
};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::parse_error, path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

void warn_unknown(const json& obj, const std::set<std::string, std::less<>>& known,
                  const std::string& path, LoadReport& report) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) report.warnings.push_back(path + ": ignoring unknown field '" + key + "'");
  }
}

SceneObject read_object(const json& o, const std::string& path, const std::string& image_id,
                        std::size_t index, double width, double height,
                        const Vocabulary& vocab, LoadReport& report) {
  if (!o.is_object()) fail(path, "expected an object");
  warn_unknown(o, kObjectFields, path, report);

  SceneObject obj;
  obj.label = vocab.canon_label(get_string(require(o, "label", path), path + ".label"));
  if (obj.label.empty()) fail(path + ".label", "empty label");

  const json& box = require(o, "bbox_px", path);
  if (!box.is_array() || box.size() != 4) fail(path + ".bbox_px", "expected [x, y, w, h]");
  double px[4];
  for (std::size_t i = 0; i < 4; ++i) {
    px[i] = get_number(box[i], path + ".bbox_px[" + std::to_string(i) + "]");
  }
  const double x = px[0], y = px[1], w = px[2], h = px[3];
  // Slack of one part in 1e9 absorbs rounding in files written from normalized boxes.
  const double slack_x = width * 1e-9;
  const double slack_y = height * 1e-9;
  if (!(w > 0.0 && h > 0.0 && x >= 0.0 && y >= 0.0 && x + w <= width + slack_x &&
        y + h <= height + slack_y)) {
    std::ostringstream msg;
    msg << "image '" << image_id << "' object " << index << ": bbox_px [" << x << ", " << y
        << ", " << w << ", " << h << "] outside " << width << "x" << height;
    throw Error(Errc::bad_geometry, msg.str());
  }
  obj.bbox = {x / width, y / height, std::min(1.0, (x + w) / width),
              std::min(1.0, (y + h) / height)};

  if (auto it = o.find("depth"); it != o.end() && !it->is_null()) {
    const double d = get_number(*it, path + ".depth");
    if (d < 0.0 || d > 1.0) fail(path + ".depth", "depth must lie in [0,1]");
    obj.depth = d;
  }
  if (auto it = o.find("colors"); it != o.end() && !it->is_null()) {
    if (!it->is_array()) fail(path + ".colors", "expected an array of strings");
    std::set<std::string> colors;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string raw = get_string((*it)[i], path + ".colors[" + std::to_string(i) + "]");
      if (auto c = vocab.canon_color(raw)) {
        colors.insert(*c);
      } else {
        report.warnings.push_back(path + ": dropping unknown color '" + raw + "'");
      }
    }
    obj.colors.assign(colors.begin(), colors.end());
  }
  if (auto it = o.find("shape"); it != o.end() && !it->is_null()) {
    const std::string raw = get_string(*it, path + ".shape");
    if (auto s = vocab.canon_shape(raw)) {
      obj.shape = *s;
    } else {
      report.warnings.push_back(path + ": dropping unknown shape '" + raw + "'");
    }
  }
  if (auto it = o.find("confidence"); it != o.end() && !it->is_null()) {
    obj.confidence = get_number(*it, path + ".confidence");
    if (obj.confidence < 0.0 || obj.confidence > 1.0) {
      fail(path + ".confidence", "confidence must lie in [0,1]");
    }
  }
  if (auto it = o.find("attributes"); it != o.end() && !it->is_null()) {
    if (!it->is_array()) fail(path + ".attributes", "expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      obj.attributes.push_back(
          get_string((*it)[i], path + ".attributes[" + std::to_string(i) + "]"));
    }
  }
  return obj;
}

}  // namespace

LoadResult load_annotations(std::string_view text, const Vocabulary& vocab,
                            const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(Errc::parse_error,
                "line " + std::to_string(line_of(text, byte)) + ": " + e.what(), byte);
  }
  if (!doc.is_object()) fail("$", "expected an object with an 'images' array");
  const json& images = require(doc, "images", "$");
  if (!images.is_array()) fail("images", "expected an array");

  LoadResult result;
  LoadReport& report = result.report;
  std::set<std::string, std::less<>> seen;

  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string path = "images[" + std::to_string(i) + "]";
    const json& im = images[i];
    if (!im.is_object()) fail(path, "expected an object");
    warn_unknown(im, kImageFields, path, report);

    std::string image_id = get_string(require(im, "image_id", path), path + ".image_id");
    if (image_id.empty()) fail(path + ".image_id", "empty image_id");
    if (!seen.insert(image_id).second) {
      throw Error(Errc::duplicate_image, "duplicate image_id '" + image_id + "' at " + path);
    }
    std::optional<std::string> uri;
    if (auto it = im.find("image_uri"); it != im.end() && !it->is_null()) {
      uri = get_string(*it, path + ".image_uri");
    }
    const double width = get_number(require(im, "width_px", path), path + ".width_px");
    const double height = get_number(require(im, "height_px", path), path + ".height_px");
    if (!(width > 0.0 && height > 0.0)) {
      throw Error(Errc::bad_geometry, "image '" + image_id + "': non-positive dimensions");
    }

    std::vector<SceneObject> objects;
    if (auto it = im.find("objects"); it != im.end() && !it->is_null()) {
      if (!it->is_array()) fail(path + ".objects", "expected an array");
      for (std::size_t j = 0; j < it->size(); ++j) {
        SceneObject obj = read_object((*it)[j], path + ".objects[" + std::to_string(j) + "]",
                                      image_id, j, width, height, vocab, report);
        if (obj.confidence < options.min_confidence) {
          ++report.objects_dropped;
          continue;
        }
        obj.id = static_cast<int>(objects.size());
        objects.push_back(std::move(obj));
      }
    }

    ++report.images;
    report.objects_kept += objects.size();
    if (objects.empty()) report.empty_images.push_back(image_id);
    result.graphs.push_back(make_scene_graph(std::move(image_id), std::move(uri),
                                             std::move(objects), options.relations,
                                             options.salience, options.built_at));
  }
  return result;
}

LoadResult load_annotations(std::istream& source, const Vocabulary& vocab,
                            const IngestOptions& options) {
  std::string text((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
  return load_annotations(std::string_view(text), vocab, options);
}

LoadResult merge(std::vector<LoadResult> parts) {
  LoadResult out;
  std::set<std::string, std::less<>> seen;
  for (LoadResult& part : parts) {
    for (SceneGraph& g : part.graphs) {
      if (!seen.insert(g.image_id).second) {
        throw Error(Errc::duplicate_image, "duplicate image_id '" + g.image_id + "' across inputs");
      }
      out.graphs.push_back(std::move(g));
    }
    LoadReport& r = out.report;
    r.images += part.report.images;
    r.objects_kept += part.report.objects_kept;
    r.objects_dropped += part.report.objects_dropped;
    std::move(part.report.empty_images.begin(), part.report.empty_images.end(),
              std::back_inserter(r.empty_images));
    std::move(part.report.warnings.begin(), part.report.warnings.end(),
              std::back_inserter(r.warnings));
  }
  return out;
}

std::string export_annotations(const std::vector<SceneGraph>& graphs, double width_px,
                               double height_px) {
  json images = json::array();
  for (const SceneGraph& g : graphs) {
    json im = {{"image_id", g.image_id}, {"width_px", width_px}, {"height_px", height_px}};
    if (g.image_uri) im["image_uri"] = *g.image_uri;
    json objects = json::array();
    for (const SceneObject& o : g.objects) {
      json obj = {
          {"label", o.label},
          {"bbox_px",
           {o.bbox.x_min * width_px, o.bbox.y_min * height_px, o.bbox.width() * width_px,
            o.bbox.height() * height_px}},
          {"confidence", o.confidence},
      };
      if (o.depth) obj["depth"] = *o.depth;
      if (!o.colors.empty()) obj["colors"] = o.colors;
      if (o.shape) obj["shape"] = *o.shape;
      if (!o.attributes.empty()) obj["attributes"] = o.attributes;
      objects.push_back(std::move(obj));
    }
    im["objects"] = std::move(objects);
    images.push_back(std::move(im));
  }
  return json{{"images", std::move(images)}}.dump(2);
}

}  // namespace horse
