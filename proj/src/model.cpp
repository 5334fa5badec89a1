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

#include "ffg/model.hpp"

#include <set>
#include <tuple>

#include "ffg/errors.hpp"

namespace ffg {
namespace {

Violation violation(std::string code, std::string path, std::string message) {
  return Violation{std::move(code), std::move(path), std::move(message)};
}

Validation prefixed(Validation v, const std::string& prefix) {
  if (v) v->path = v->path.empty() ? prefix : prefix + "." + v->path;
  return v;
}

bool in_unit_interval(const Rational& r) { return r >= Rational(0) && r <= Rational(1); }

}  // namespace

std::string to_string(ProblemKind kind) { return kind == ProblemKind::math ? "math" : "code"; }

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::gold: return "gold";
    case Provenance::frontier_voted: return "frontier_voted";
    case Provenance::self_voted: return "self_voted";
  }
  return "gold";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::error: return "error";
  }
  return "error";
}

std::string to_string(PairKind kind) { return kind == PairKind::outcome ? "outcome" : "process"; }

std::optional<ProblemKind> parse_problem_kind(const std::string& s) {
  if (s == "math") return ProblemKind::math;
  if (s == "code") return ProblemKind::code;
  return std::nullopt;
}

std::optional<Provenance> parse_provenance(const std::string& s) {
  if (s == "gold") return Provenance::gold;
  if (s == "frontier_voted") return Provenance::frontier_voted;
  if (s == "self_voted") return Provenance::self_voted;
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "error") return Verdict::error;
  return std::nullopt;
}

std::optional<PairKind> parse_pair_kind(const std::string& s) {
  if (s == "outcome") return PairKind::outcome;
  if (s == "process") return PairKind::process;
  return std::nullopt;
}

Validation validate(const TestCase& value) {
  if (!in_unit_interval(value.confidence))
    return violation("confidence_out_of_range", "confidence",
                     "confidence " + value.confidence.str() + " outside [0,1]");
  return std::nullopt;
}

Validation validate(const TestSuite& value) {
  for (std::size_t i = 0; i < value.cases.size(); ++i) {
    const std::string path = "cases[" + std::to_string(i) + "]";
    if (auto v = validate(value.cases[i])) return prefixed(v, path);
    if (value.provenance == Provenance::gold && value.cases[i].confidence != Rational(1))
      return violation("gold_confidence", path + ".confidence",
                       "gold suite case must have confidence 1");
  }
  if (value.pool_size < 0) return violation("negative_pool_size", "pool_size", "pool_size < 0");
  if (value.provenance == Provenance::gold && value.pool_size != 0)
    return violation("gold_pool_size", "pool_size", "gold suite must have pool_size 0");
  return std::nullopt;
}

Validation validate(const Problem& value) {
  if (value.id.empty()) return violation("empty_id", "id", "problem id is empty");
  if (value.prompt.empty()) return violation("empty_prompt", "prompt", "prompt is empty");
  if (value.gold_suite) {
    if (auto v = validate(*value.gold_suite)) return prefixed(v, "gold_suite");
    if (value.gold_suite->provenance != Provenance::gold)
      return violation("gold_provenance", "gold_suite.provenance",
                       "gold_suite must have provenance gold");
    if (value.kind == ProblemKind::math &&
        (value.gold_suite->cases.size() != 1 || !value.gold_suite->cases[0].input.empty()))
      return violation("math_suite_shape", "gold_suite.cases",
                       "math gold suite must hold exactly one case with empty input");
  }
  if (value.runner_profile && value.kind != ProblemKind::code)
    return violation("runner_profile_kind", "runner_profile",
                     "runner_profile only applies to code problems");
  return std::nullopt;
}

Validation validate(const CandidateSolution& value) {
  if (value.problem_id.empty()) return violation("empty_id", "problem_id", "problem_id is empty");
  if (value.sample_index < 0)
    return violation("negative_index", "sample_index", "sample_index must be >= 0");
  if (value.decoding.max_tokens <= 0)
    return violation("bad_max_tokens", "decoding.max_tokens", "max_tokens must be positive");
  return std::nullopt;
}

Validation validate(const FeedbackScore& value) {
  if (value.total <= 0) return violation("empty_total", "total", "total must be positive");
  if (value.passed < 0 || value.passed > value.total)
    return violation("passed_out_of_range", "passed", "passed must lie in [0,total]");
  if (value.r != Rational(value.passed, value.total))
    return violation("ratio_mismatch", "r", "r must equal passed/total exactly");
  if (static_cast<std::int64_t>(value.per_case.size()) != value.total)
    return violation("per_case_length", "per_case", "per_case length must equal total");
  std::int64_t passes = 0;
  for (Verdict v : value.per_case) passes += v == Verdict::pass ? 1 : 0;
  if (passes != value.passed)
    return violation("per_case_count", "per_case", "pass verdicts must equal passed");
  return std::nullopt;
}

Validation validate(const SolutionPrefix& value) {
  if (value.step_count < 1)
    return violation("step_count_range", "step_count", "step_count must be >= 1");
  if (value.parent_steps > 0 && value.step_count >= value.parent_steps)
    return violation("step_count_range", "step_count",
                     "step_count must be below the parent's step total");
  if (value.expected_return) {
    if (!in_unit_interval(*value.expected_return))
      return violation("expected_return_range", "expected_return",
                       "expected_return outside [0,1]");
    if (value.completion_count < 1)
      return violation("completion_count", "completion_count",
                       "expected_return requires completion_count >= 1");
  }
  return std::nullopt;
}

Validation validate(const PreferencePair& value, const Rational& epsilon, const Rational& sigma) {
  if (value.r_w < epsilon)
    return violation("below_floor", "r_w", "r_w " + value.r_w.str() + " < epsilon " + epsilon.str());
  if (!(value.r_w - value.r_l > sigma))
    return violation("margin_unmet", "r_l", "r_w - r_l must exceed sigma " + sigma.str());
  if (value.chosen.text == value.rejected.text)
    return violation("identical_sides", "rejected.text", "chosen and rejected texts are identical");
  return std::nullopt;
}

Validation validate_problem_set(const std::vector<Problem>& problems) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    if (auto v = validate(problems[i])) return prefixed(v, path);
    if (!seen.insert(problems[i].id).second)
      return violation("duplicate_id", path + ".id", "duplicate problem id " + problems[i].id);
  }
  return std::nullopt;
}

Validation validate_solution_set(const std::vector<CandidateSolution>& solutions) {
  std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const auto& s = solutions[i];
    const std::string path = "[" + std::to_string(i) + "]";
    if (auto v = validate(s)) return prefixed(v, path);
    if (!seen.emplace(s.problem_id, s.sample_index, s.model_tag).second)
      return violation("duplicate_sample", path, "duplicate (problem_id, sample_index, model_tag)");
  }
  return std::nullopt;
}

void ensure(const Validation& v) {
  if (v) throw ValidationError(v->code, v->path, v->message);
}

}  // namespace ffg
