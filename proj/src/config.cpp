// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "horse/error.hpp"

namespace horse {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::config_error, where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(Errc::config_error, where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::config_error, where + "." + key + ": wrong type");
  }
}

void require_range(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::config_error, "config: " + what);
}

void diff(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a.items()) keys.insert(k);
    for (const auto& [k, v] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      const std::string sub = path.empty() ? k : path + "." + k;
      diff(a.contains(k) ? a[k] : json(), b.contains(k) ? b[k] : json(), sub, out);
    }
    return;
  }
  if (a != b) out.push_back(path + ": index " + a.dump() + ", config " + b.dump());
}

}  // namespace

json to_json(const RelationConfig& c) {
  return {
      {"tau_v", c.tau_v},           {"tau_h", c.tau_h},
      {"eps_on", c.eps_on},         {"on_overlap", c.on_overlap},
      {"tau_d", c.tau_d},           {"delta_near", c.delta_near},
      {"kappa", c.kappa},           {"sigma", c.sigma},
      {"above_requires_overlap", c.above_requires_overlap},
  };
}

json to_json(const EngineConfig& c) {
  return {
      {"relations", to_json(c.relations)},
      {"salience", {{"area_weight", c.salience.area}, {"centrality_weight", c.salience.centrality}}},
      {"min_confidence", c.min_confidence},
      {"alpha", c.alpha},
      {"theta", c.theta},
      {"uniqueness_k", c.uniqueness_k},
      {"scoring", {{"attribute_weight", c.scoring.attribute}, {"edge_weight", c.scoring.edge}}},
      {"vocab_path", c.vocab_path},
      {"index_dir", c.index_dir},
      {"listen_address", c.listen_address},
      {"port", c.port},
  };
}

RelationConfig relation_config_from_json(const json& j) {
  const std::string where = "relations";
  check_keys(j, {"tau_v", "tau_h", "eps_on", "on_overlap", "tau_d", "delta_near", "kappa", "sigma",
                 "above_requires_overlap"},
             where);
  RelationConfig c;
  read(j, "tau_v", c.tau_v, where);
  read(j, "tau_h", c.tau_h, where);
  read(j, "eps_on", c.eps_on, where);
  read(j, "on_overlap", c.on_overlap, where);
  read(j, "tau_d", c.tau_d, where);
  read(j, "delta_near", c.delta_near, where);
  read(j, "kappa", c.kappa, where);
  read(j, "sigma", c.sigma, where);
  read(j, "above_requires_overlap", c.above_requires_overlap, where);
  return c;
}

EngineConfig engine_config_from_json(const json& j) {
  check_keys(j, {"relations", "salience", "min_confidence", "alpha", "theta", "uniqueness_k",
                 "scoring", "vocab_path", "index_dir", "listen_address", "port"},
             "config");
  EngineConfig c;
  if (j.contains("relations")) c.relations = relation_config_from_json(j["relations"]);
  if (j.contains("salience")) {
    const json& s = j["salience"];
    check_keys(s, {"area_weight", "centrality_weight"}, "salience");
    read(s, "area_weight", c.salience.area, "salience");
    read(s, "centrality_weight", c.salience.centrality, "salience");
  }
  if (j.contains("scoring")) {
    const json& s = j["scoring"];
    check_keys(s, {"attribute_weight", "edge_weight"}, "scoring");
    read(s, "attribute_weight", c.scoring.attribute, "scoring");
    read(s, "edge_weight", c.scoring.edge, "scoring");
  }
  read(j, "min_confidence", c.min_confidence, "config");
  read(j, "alpha", c.alpha, "config");
  read(j, "theta", c.theta, "config");
  read(j, "uniqueness_k", c.uniqueness_k, "config");
  read(j, "vocab_path", c.vocab_path, "config");
  read(j, "index_dir", c.index_dir, "config");
  read(j, "listen_address", c.listen_address, "config");
  read(j, "port", c.port, "config");
  validate(c);
  return c;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config_error, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what(), e.byte);
  }
  return engine_config_from_json(j);
}

void validate(const EngineConfig& c) {
  const RelationConfig& r = c.relations;
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require_range(unit(r.tau_v), "relations.tau_v must lie in [0,1]");
  require_range(unit(r.tau_h), "relations.tau_h must lie in [0,1]");
  require_range(unit(r.eps_on), "relations.eps_on must lie in [0,1]");
  require_range(r.on_overlap > 0.0 && r.on_overlap <= 1.0, "relations.on_overlap must lie in (0,1]");
  require_range(unit(r.tau_d), "relations.tau_d must lie in [0,1]");
  require_range(r.delta_near >= 0.0 && r.delta_near <= std::sqrt(2.0),
                "relations.delta_near must lie in [0,sqrt(2)]");
  require_range(r.kappa > 0.0 && r.kappa < 1.0, "relations.kappa must lie in (0,1)");
  require_range(r.sigma > 1.0, "relations.sigma must exceed 1");
  require_range(c.salience.area >= 0.0 && c.salience.centrality >= 0.0 &&
                    c.salience.area + c.salience.centrality > 0.0,
                "salience weights must be non-negative and not both zero");
  require_range(unit(c.min_confidence), "min_confidence must lie in [0,1]");
  require_range(c.alpha > 0.0, "alpha must be positive");
  require_range(c.theta > 0.0 && c.theta < 1.0, "theta must lie in (0,1)");
  require_range(c.uniqueness_k >= 1, "uniqueness_k must be at least 1");
  require_range(c.scoring.attribute >= 0.0 && c.scoring.edge >= 0.0,
                "scoring weights must be non-negative");
  require_range(c.port >= 0 && c.port <= 65535, "port must lie in [0,65535]");
}

json index_snapshot(const EngineConfig& c) {
  json j = to_json(c);
  for (const char* key : {"index_dir", "listen_address", "port"}) j.erase(key);
  return j;
}

std::vector<std::string> snapshot_differences(const json& stored, const json& current) {
  std::vector<std::string> out;
  diff(stored, current, "", out);
  return out;
}

}  // namespace horse
