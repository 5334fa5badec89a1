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

// JSON encoding of the domain types and JSON Lines file helpers. Field
// names follow the type definitions; rationals are strings "p/q".

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffg/errors.hpp"
#include "ffg/exec.hpp"
#include "ffg/model.hpp"

namespace ffg {

using Json = nlohmann::json;

Json encode(const Rational& value);
Json encode(const TestCase& value);
Json encode(const TestSuite& value);
Json encode(const Problem& value);
Json encode(const CandidateSolution& value);
Json encode(const FeedbackScore& value);
Json encode(const SolutionPrefix& value);
Json encode(const PreferencePair& value);
Json encode(const RunManifest& value);
// Wall time is only written when `with_timing` is set, so record files
// stay byte-reproducible by default.
Json encode(const ExecutionRecord& value, bool with_timing = false);

// Decoders throw ValidationError (code "decode_error" or the violated
// invariant) naming the offending field path; they never crash on
// malformed input.
template <typename T>
T decode(const Json& j);

template <> Rational decode<Rational>(const Json& j);
template <> TestCase decode<TestCase>(const Json& j);
template <> TestSuite decode<TestSuite>(const Json& j);
template <> Problem decode<Problem>(const Json& j);
template <> CandidateSolution decode<CandidateSolution>(const Json& j);
template <> FeedbackScore decode<FeedbackScore>(const Json& j);
template <> SolutionPrefix decode<SolutionPrefix>(const Json& j);
template <> PreferencePair decode<PreferencePair>(const Json& j);
template <> RunManifest decode<RunManifest>(const Json& j);
template <> ExecutionRecord decode<ExecutionRecord>(const Json& j);

// One compact JSON object per line, LF-terminated.
std::string dump_line(const Json& j);

// Digest of a suite's encoded form; scores reference suites by it.
std::string suite_digest(const TestSuite& suite);

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError("decode_error", where, "invalid JSON");
    try {
      out.push_back(decode<T>(j));
    } catch (const ValidationError& e) {
      throw ValidationError(e.code(), where + (e.path().empty() ? "" : "." + e.path()), e.what());
    }
  }
  return out;
}

template <typename T, typename Encoder>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items, Encoder&& enc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  for (const auto& item : items) out << dump_line(enc(item));
  if (!out) throw Error("io_error", "write failed for " + path.string());
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items) {
  write_jsonl(path, items, [](const T& v) { return encode(v); });
}

}  // namespace ffg
