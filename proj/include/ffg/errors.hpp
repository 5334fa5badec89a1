// Copyright 2026 The ffg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ffg {

// Base for every error this library throws. `code()` is machine-readable
// and stable; `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// An entity violated a type invariant, or external input failed to decode.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, std::string path, const std::string& message)
      : Error(std::move(code), path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptySuiteError : public Error {
 public:
  explicit EmptySuiteError(const std::string& message) : Error("empty_suite", message) {}
};

class MissingRecordsError : public Error {
 public:
  explicit MissingRecordsError(const std::string& message)
      : Error("missing_records", message) {}
};

class InputMismatchError : public Error {
 public:
  explicit InputMismatchError(const std::string& message)
      : Error("input_mismatch", message) {}
};

class TooShortError : public Error {
 public:
  explicit TooShortError(const std::string& message) : Error("too_short", message) {}
};

class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& message) : Error("non_finite", message) {}
};

// Sampling backend failures: provider exhaustion and replay exhaustion.
class BackendError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public BackendError {
 public:
  explicit ProviderError(const std::string& message) : BackendError("provider_error", message) {}
};

class ReplayExhaustedError : public BackendError {
 public:
  explicit ReplayExhaustedError(const std::string& message)
      : BackendError("replay_exhausted", message) {}
};

// Raised when harness-level spawn failures exceed the configured budget.
class HarnessBudgetError : public Error {
 public:
  explicit HarnessBudgetError(const std::string& message)
      : Error("harness_budget_exceeded", message) {}
};

}  // namespace ffg
