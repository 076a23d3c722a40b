// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/engine.hpp"

#include <algorithm>
#include <fstream>

#include "horse/error.hpp"
#include "horse/json_io.hpp"

namespace horse {

using nlohmann::json;
namespace fs = std::filesystem;

IngestSummary ingest_files(const std::vector<fs::path>& annotation_files, const fs::path& out,
                           const EngineConfig& config, std::int64_t built_at) {
  if (annotation_files.empty()) throw Error(Errc::empty_corpus, "no annotation files given");
  const Vocabulary vocab = load_vocabulary(config);
  IngestOptions options;
  options.min_confidence = config.min_confidence;
  options.relations = config.relations;
  options.salience = config.salience;
  options.built_at = built_at;

  std::vector<LoadResult> parts;
  for (const fs::path& file : annotation_files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read annotation file " + file.string());
    try {
      parts.push_back(load_annotations(in, vocab, options));
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what(), e.position());
    }
  }
  LoadResult all = merge(std::move(parts));
  RelationPriors priors = fit(all.graphs, config.alpha);
  Index index = build_index(std::move(all.graphs), std::move(priors), out, index_snapshot(config));
  return {index.stats(), std::move(all.report)};
}

Vocabulary load_vocabulary(const EngineConfig& config) {
  return config.vocab_path.empty() ? Vocabulary::defaults() : Vocabulary::from_file(config.vocab_path);
}

Engine Engine::open(const fs::path& index_dir, const std::optional<fs::path>& config_path) {
  Index index = Index::open(index_dir);
  std::vector<std::string> warnings;
  EngineConfig config;
  if (config_path) {
    config = load_engine_config(*config_path);
    for (auto& d : snapshot_differences(index.config_snapshot(), index_snapshot(config))) {
      warnings.push_back("config differs from index: " + d);
    }
  } else if (!index.config_snapshot().empty()) {
    config = engine_config_from_json(index.config_snapshot());
  }
  config.index_dir = index_dir.string();
  Engine engine(std::move(index), std::move(config));
  engine.warnings_.insert(engine.warnings_.begin(), warnings.begin(), warnings.end());
  return engine;
}

Engine::Engine(Index index, EngineConfig config)
    : index_(std::move(index)), config_(std::move(config)), vocab_(load_vocabulary(config_)) {
  TypicalityOptions options;
  options.theta = config_.theta;
  options.top_k = config_.uniqueness_k;
  ranking_ = rank_by_uniqueness(index_.priors(), index_.documents(), options);
}

QueryGraph Engine::parse(std::string_view text) const { return parse_query(text, vocab_); }

const SceneGraph& Engine::require(std::string_view image_id) const {
  const SceneGraph* g = index_.find(image_id);
  if (!g) throw Error(Errc::not_found, "unknown image '" + std::string(image_id) + "'");
  return *g;
}

json Engine::search(std::string_view text, std::size_t k, MatchMode mode) const {
  const QueryGraph q = parse(text);
  SearchOptions options;
  options.k = k;
  options.mode = mode;
  options.weights = config_.scoring;
  SearchStats stats;
  const auto results = horse::search(index_, q, options, &stats);
  json out_results = json::array();
  for (const auto& r : results) out_results.push_back(json_io::match(r, q));
  return {
      {"parsed", json_io::query(q)},
      {"k", k},
      {"mode", to_string(mode)},
      {"results", std::move(out_results)},
      {"stats", {{"corpus", stats.corpus}, {"candidates", stats.candidates}, {"verified", stats.verified}}},
  };
}

json Engine::explain(std::string_view image_id, std::string_view text) const {
  const SceneGraph& g = require(image_id);
  const QueryGraph q = parse(text);
  const MatchResult r = horse::explain(g, q, config_.relations, config_.scoring);
  json out = json_io::match(r, q);
  out["parsed"] = json_io::query(q);
  return out;
}

json Engine::anomalies(std::size_t k) const {
  json reports = json::array();
  for (std::size_t i = 0; i < std::min(k, ranking_.size()); ++i) {
    reports.push_back(json_io::typicality(ranking_[i]));
  }
  return {{"k", k}, {"theta", config_.theta}, {"reports", std::move(reports)}};
}

json Engine::image(std::string_view image_id) const { return json_io::scene(require(image_id)); }

json Engine::stats() const { return json_io::stats(index_.stats()); }

json Engine::priors(std::string_view subject, std::string_view object) const {
  return json_io::pair_priors(index_.priors(), vocab_.canon_label(subject), vocab_.canon_label(object));
}

json Engine::priors_dump() const {
  const RelationPriors& p = index_.priors();
  json triples = json::array();
  for (const auto& [key, count] : p.counts) {
    const auto& [subject, predicate, object] = key;
    triples.push_back({
        {"subject", subject},
        {"predicate", to_string(predicate)},
        {"object", object},
        {"count", count},
        {"pair_total", p.pair_total(subject, object)},
        {"probability", probability(p, subject, predicate, object)},
    });
  }
  return {{"alpha", p.alpha}, {"pairs", p.pair_totals.size()}, {"triples", std::move(triples)}};
}

std::optional<fs::path> Engine::image_file(std::string_view image_id, const fs::path& root) const {
  const SceneGraph& g = require(image_id);
  if (!g.image_uri || g.image_uri->empty()) return std::nullopt;
  std::string uri = *g.image_uri;
  constexpr std::string_view kFileScheme = "file://";
  if (uri.starts_with(kFileScheme)) {
    uri.erase(0, kFileScheme.size());
  } else if (uri.find("://") != std::string::npos) {
    return std::nullopt;
  }
  fs::path path(uri);
  if (path.is_relative()) path = root / path;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  return path;
}

}  // namespace horse
