// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace dockmpc {

enum class LogLevel { Off = 0, Info = 1, Trace = 2 };

/// Parses off|info|trace (case-insensitive). Throws ConfigError otherwise.
LogLevel parse_log_level(const std::string& s);

/// Reads DOCKMPC_LOG; unset or empty means Off.
LogLevel log_level_from_env();

}  // namespace dockmpc
