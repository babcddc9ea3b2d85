// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dockmpc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition on a domain value.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Robots closer than the coincidence guard; bearing undefined.
class CoincidentRobotsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Non-finite value produced while evaluating a problem.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long index)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// Malformed or invalid scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dockmpc
