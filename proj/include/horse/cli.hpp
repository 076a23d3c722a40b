// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

#include "horse/error.hpp"

namespace horse {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;  // malformed input, config or usage
inline constexpr int kExitIo = 3;     // files and index
inline constexpr int kExitQuery = 4;  // query text, unknown image

int exit_code(Errc code) noexcept;

/// Entry point of the `horse` tool. Subcommands: ingest, search, explain,
/// anomalies, stats, priors, gen, serve, config.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace horse
