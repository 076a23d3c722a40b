// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "horse/error.hpp"
#include "horse/index.hpp"
#include "horse/matcher.hpp"
#include "horse/priors.hpp"
#include "horse/query.hpp"
#include "horse/scene.hpp"

// JSON shapes shared by the command line (--json) and the HTTP API.
namespace horse::json_io {

nlohmann::json triple(const RelationTriple& t);
nlohmann::json object(const SceneObject& o);
nlohmann::json scene(const SceneGraph& g);
nlohmann::json query(const QueryGraph& q);
nlohmann::json evidence(const Evidence& e);
nlohmann::json outcome(const ConstraintOutcome& c);
nlohmann::json match(const MatchResult& r, const QueryGraph& q);
nlohmann::json scored_triple(const ScoredTriple& t);
nlohmann::json typicality(const TypicalityReport& r);
nlohmann::json stats(const IndexStats& s);

/// Per-predicate smoothed probabilities for an ordered label pair.
nlohmann::json pair_priors(const RelationPriors& priors, const std::string& subject,
                           const std::string& object);

/// { error, message, position? }
nlohmann::json error(const Error& e);
nlohmann::json error(const std::string& code, const std::string& message);

/// "car above sky"
std::string triple_text(const ScoredTriple& t);

}  // namespace horse::json_io
