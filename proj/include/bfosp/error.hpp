// Copyright 2026 The bfosp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bfosp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable machine-readable code, used by the HTTP service error bodies.
  virtual const char* code() const noexcept { return "error"; }
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "domain_error"; }
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "config_error"; }
};

/// Factorisation or other numerical failure.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "numerical_error"; }
};

/// Ask/tell discipline violated: unknown, stale or conflicting tokens.
class ProtocolError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "protocol_error"; }
};

/// Persisted or in-memory state failed validation.
class StateError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "state_error"; }
};

/// Requested entity does not exist (no incumbent, unknown campaign).
class NotFoundError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "not_found"; }
};

}  // namespace bfosp
