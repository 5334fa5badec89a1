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

// Shared domain types. Every value is immutable once built and may be
// copied freely between worker threads.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffg/rational.hpp"

namespace ffg {

enum class ProblemKind { math, code };
enum class Provenance { gold, frontier_voted, self_voted };
enum class Verdict { pass, fail, error };
enum class PairKind { outcome, process };

// One input/output pair. Math problems carry a single case with empty input.
struct TestCase {
  std::string input;
  std::string output;
  Rational confidence{1};  // top-1 vote share; 1 for gold
};

struct TestSuite {
  std::string problem_id;
  std::vector<TestCase> cases;
  Provenance provenance = Provenance::gold;
  std::int64_t pool_size = 0;  // solutions voted over; 0 for gold
};

struct Problem {
  std::string id;
  ProblemKind kind = ProblemKind::math;
  std::string prompt;
  std::optional<TestSuite> gold_suite;
  std::optional<std::string> runner_profile;
  // Free-form keys carried through to reports (e.g. "difficulty").
  std::map<std::string, std::string> metadata;
};

struct Decoding {
  double temperature = 0.8;
  std::uint64_t seed = 0;
  std::int64_t max_tokens = 2048;
};

struct CandidateSolution {
  std::string problem_id;
  std::int64_t sample_index = 0;
  std::string text;
  // Extracted program (code) or answer (math). Absent means the solution
  // can only ever score as failing.
  std::optional<std::string> payload;
  std::string model_tag;
  Decoding decoding;
};

struct FeedbackScore {
  std::string problem_id;
  std::int64_t sample_index = 0;
  Rational r;
  std::int64_t passed = 0;
  std::int64_t total = 0;
  std::vector<Verdict> per_case;
  std::string suite_digest;
};

struct SolutionPrefix {
  std::string problem_id;
  std::int64_t parent_sample_index = 0;
  std::int64_t step_count = 0;
  std::int64_t parent_steps = 0;  // total reasoning steps of the parent
  std::string text;
  std::optional<Rational> expected_return;
  std::int64_t completion_count = 0;
};

// Identifies one side of a pair: a full solution, or a prefix of one when
// step_count is set.
struct ItemRef {
  std::int64_t sample_index = 0;
  std::optional<std::int64_t> step_count;

  friend bool operator==(const ItemRef&, const ItemRef&) = default;
};

struct PairSide {
  ItemRef ref;
  std::string text;
};

struct PreferencePair {
  std::string problem_id;
  PairSide chosen;
  PairSide rejected;
  PairKind kind = PairKind::outcome;
  Rational r_w;
  Rational r_l;
};

// Provenance of one round: the configuration it ran with (raw key/value
// text, so values appear exactly as configured) and digests of every file
// it read and wrote.
struct RunManifest {
  std::int64_t round_index = 0;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;   // path -> digest
  std::map<std::string, std::string> outputs;  // file name -> digest
  std::string model_tag;
  std::string started_at;
  std::string finished_at;
};

// Machine-readable description of a broken invariant.
struct Violation {
  std::string code;
  std::string path;
  std::string message;
};

using Validation = std::optional<Violation>;

std::string to_string(ProblemKind kind);
std::string to_string(Provenance provenance);
std::string to_string(Verdict verdict);
std::string to_string(PairKind kind);
std::optional<ProblemKind> parse_problem_kind(const std::string& s);
std::optional<Provenance> parse_provenance(const std::string& s);
std::optional<Verdict> parse_verdict(const std::string& s);
std::optional<PairKind> parse_pair_kind(const std::string& s);

Validation validate(const TestCase& value);
Validation validate(const TestSuite& value);
Validation validate(const Problem& value);
Validation validate(const CandidateSolution& value);
Validation validate(const FeedbackScore& value);
Validation validate(const SolutionPrefix& value);
// Pair admission depends on the (epsilon, sigma) of the producing run.
Validation validate(const PreferencePair& value, const Rational& epsilon, const Rational& sigma);

// Uniqueness rules that span a whole dataset.
Validation validate_problem_set(const std::vector<Problem>& problems);
Validation validate_solution_set(const std::vector<CandidateSolution>& solutions);

// Throws ValidationError when `v` holds a violation.
void ensure(const Validation& v);

}  // namespace ffg
