// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockmpc/log.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "dockmpc/error.hpp"

namespace dockmpc {

LogLevel parse_log_level(const std::string& s) {
  std::string v = s;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "off" || v.empty()) return LogLevel::Off;
  if (v == "info") return LogLevel::Info;
  if (v == "trace") return LogLevel::Trace;
  throw ConfigError("DOCKMPC_LOG: expected off, info or trace, got '" + s + "'");
}

LogLevel log_level_from_env() {
  const char* v = std::getenv("DOCKMPC_LOG");
  return v ? parse_log_level(v) : LogLevel::Off;
}

}  // namespace dockmpc
