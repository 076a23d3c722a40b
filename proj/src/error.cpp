// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include "horse/error.hpp"

namespace horse {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "ParseError";
    case Errc::duplicate_image: return "DuplicateImage";
    case Errc::bad_geometry: return "BadGeometry";
    case Errc::empty_scene: return "EmptyScene";
    case Errc::config_error: return "ConfigError";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::index_io: return "IndexIoError";
    case Errc::index_corrupt: return "IndexCorrupt";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::query_parse: return "ParseError";
    case Errc::empty_query: return "EmptyQuery";
    case Errc::query_too_large: return "QueryTooLarge";
    case Errc::not_found: return "NotFound";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace horse
