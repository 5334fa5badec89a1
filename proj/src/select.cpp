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

#include "ffg/select.hpp"

#include <map>
#include <set>

#include "ffg/answer.hpp"
#include "ffg/errors.hpp"

namespace ffg {

SelectionResult select_program_sc(const ExecutionGrid& pool, const VotePolicy& policy) {
  if (pool.rows() == 0) throw ValidationError("empty_pool", "pool", "no programs to select from");
  SelectionResult result;
  result.matched_counts.assign(pool.rows(), 0);
  Rational confidence_sum(0);
  for (std::size_t c = 0; c < pool.cols(); ++c) {
    VoteOutcome outcome = vote_outputs(pool.column(c), policy);
    const auto* won = std::get_if<PseudoOutput>(&outcome);
    if (!won) continue;
    ++result.consensus_inputs;
    confidence_sum += won->confidence;
    for (std::size_t r = 0; r < pool.rows(); ++r) {
      const auto& rec = pool.at(r, c);
      if (rec.status == ExecStatus::ok && rec.stdout_canonical == won->value)
        ++result.matched_counts[r];
    }
  }
  if (result.consensus_inputs == 0) throw EmptySuiteError("no input reached consensus");
  result.confidence = confidence_sum / Rational(result.consensus_inputs);
  for (std::size_t r = 0; r < pool.rows(); ++r) {
    if (result.matched_counts[r] == result.consensus_inputs) {
      result.chosen_sample_index = pool.at(r, 0).sample_index;
      break;
    }
  }
  return result;
}

bool verify_pseudo_outputs_sct(const TestSuite& pseudo, const TestSuite& gold,
                               const NormalizationPolicy& normalization) {
  std::map<std::string, std::string> expected;
  for (const auto& tc : gold.cases) expected.emplace(tc.input, tc.output);
  std::set<std::string> pseudo_inputs;
  for (const auto& tc : pseudo.cases) pseudo_inputs.insert(tc.input);
  if (pseudo_inputs.size() != expected.size())
    throw InputMismatchError("pseudo and gold suites cover different inputs");
  for (const auto& in : pseudo_inputs)
    if (!expected.count(in)) throw InputMismatchError("pseudo suite has an input absent from gold");
  for (const auto& tc : pseudo.cases)
    if (!outputs_equal(tc.output, expected.at(tc.input), normalization)) return false;
  return true;
}

std::optional<std::string> weighted_best_of_n(const std::vector<std::optional<std::string>>& answers,
                                              const std::vector<double>& scores,
                                              TiePolicy tie_policy) {
  if (answers.size() != scores.size())
    throw ValidationError("length_mismatch", "scores", "answers and scores differ in length");
  if (answers.empty()) throw ValidationError("empty", "answers", "need at least one answer");
  std::vector<std::pair<std::string, double>> classes;  // first-seen order
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (!answers[i] || answers[i]->empty()) continue;
    std::string key = canonical_answer(*answers[i]);
    auto [it, fresh] = slot.emplace(key, classes.size());
    if (fresh) classes.emplace_back(key, 0.0);
    classes[it->second].second += scores[i];
  }
  if (classes.empty()) return std::nullopt;
  std::size_t best = 0;
  bool tied = false;
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (classes[i].second > classes[best].second) {
      best = i;
      tied = false;
    } else if (classes[i].second == classes[best].second) {
      tied = true;
    }
  }
  if (tied && tie_policy == TiePolicy::discard_input) return std::nullopt;
  return classes[best].first;
}

}  // namespace ffg
