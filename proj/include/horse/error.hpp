// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace horse {

enum class Errc {
  parse_error,      // malformed annotation / config / vocabulary document
  duplicate_image,
  bad_geometry,
  empty_scene,
  config_error,
  empty_corpus,
  index_io,
  index_corrupt,
  version_mismatch,
  query_parse,
  empty_query,
  query_too_large,
  not_found,
  io_error,         // unreadable input or unwritable output file
};

/// Stable name of an error code, as rendered in CLI diagnostics and HTTP bodies.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  Errc code() const noexcept { return code_; }

  /// Character offset into the offending input, when the error has one.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

}  // namespace horse
