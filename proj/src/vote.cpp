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

#include "ffg/vote.hpp"

#include <algorithm>

#include "ffg/answer.hpp"
#include "ffg/errors.hpp"

namespace ffg {

std::optional<std::string> validate_vote_policy(const VotePolicy& policy) {
  if (policy.min_pool < 1) return "min_pool must be >= 1";
  return std::nullopt;
}

std::string to_string(TiePolicy policy) {
  return policy == TiePolicy::discard_input ? "discard_input" : "first_seen";
}

std::optional<TiePolicy> parse_tie_policy(std::string_view s) {
  if (s == "discard_input" || s == "discard") return TiePolicy::discard_input;
  if (s == "first_seen") return TiePolicy::first_seen;
  return std::nullopt;
}

std::string to_string(NoConsensusReason reason) {
  switch (reason) {
    case NoConsensusReason::tie: return "tie";
    case NoConsensusReason::all_failed: return "all_failed";
    case NoConsensusReason::pool_too_small: return "pool_too_small";
  }
  return "tie";
}

VoteOutcome vote_values(const std::vector<std::optional<std::string>>& values,
                        const VotePolicy& policy, VoteTally* tally) {
  VoteTally local;
  VoteTally& t = tally ? *tally : local;
  t = VoteTally{};
  std::map<std::string, std::size_t> slot;
  for (const auto& v : values) {
    if (!v) {
      ++t.failures;
      continue;
    }
    auto [it, fresh] = slot.emplace(*v, t.counts.size());
    if (fresh) t.counts.emplace_back(*v, 0);
    ++t.counts[it->second].second;
  }

  const auto pool = static_cast<std::int64_t>(values.size());
  if (pool < policy.min_pool) return NoConsensus{NoConsensusReason::pool_too_small};
  if (t.counts.empty()) return NoConsensus{NoConsensusReason::all_failed};

  // counts is in first-seen order, so the first maximum is the first-seen
  // winner among any tie.
  std::size_t best = 0;
  std::size_t tied = 1;
  for (std::size_t i = 1; i < t.counts.size(); ++i) {
    if (t.counts[i].second > t.counts[best].second) {
      best = i;
      tied = 1;
    } else if (t.counts[i].second == t.counts[best].second) {
      ++tied;
    }
  }
  if (tied > 1 && policy.tie_policy == TiePolicy::discard_input)
    return NoConsensus{NoConsensusReason::tie};
  return PseudoOutput{t.counts[best].first, Rational(t.counts[best].second, pool)};
}

VoteOutcome vote_outputs(const std::vector<ExecutionRecord>& records, const VotePolicy& policy,
                         VoteTally* tally) {
  std::vector<std::optional<std::string>> values;
  values.reserve(records.size());
  for (const auto& rec : records)
    values.push_back(rec.status == ExecStatus::ok ? rec.stdout_canonical : std::nullopt);
  return vote_values(values, policy, tally);
}

VoteOutcome majority_answer_label(const std::vector<std::optional<std::string>>& answers,
                                  const VotePolicy& policy) {
  std::vector<std::optional<std::string>> keys;
  keys.reserve(answers.size());
  for (const auto& a : answers) {
    if (a && !a->empty()) keys.push_back(canonical_answer(*a));
    else keys.push_back(std::nullopt);
  }
  return vote_values(keys, policy);
}

Provenance pool_provenance(std::string_view pool_model_tag, std::string_view frontier_tag) {
  return !frontier_tag.empty() && pool_model_tag == frontier_tag ? Provenance::frontier_voted
                                                                 : Provenance::self_voted;
}

TestSuite build_pseudo_suite(const std::string& problem_id, const std::vector<std::string>& inputs,
                             const ExecutionGrid& pool, const VotePolicy& policy,
                             Provenance provenance, std::vector<VoteAudit>* audit) {
  if (inputs.empty()) throw EmptySuiteError("no inputs for problem " + problem_id);
  if (pool.cols() != inputs.size())
    throw MissingRecordsError("execution grid does not cover every input of " + problem_id);
  TestSuite suite;
  suite.problem_id = problem_id;
  suite.provenance = provenance;
  suite.pool_size = static_cast<std::int64_t>(pool.rows());
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    VoteTally tally;
    VoteOutcome outcome = vote_outputs(pool.column(c), policy, &tally);
    if (const auto* won = std::get_if<PseudoOutput>(&outcome))
      suite.cases.push_back(TestCase{inputs[c], won->value, won->confidence});
    if (audit) audit->push_back(VoteAudit{problem_id, inputs[c], std::move(tally), outcome});
  }
  if (suite.cases.empty()) throw EmptySuiteError("no input reached consensus for " + problem_id);
  return suite;
}

Rational suite_confidence(const TestSuite& suite) {
  if (suite.cases.empty()) throw EmptySuiteError("suite " + suite.problem_id + " has no cases");
  Rational sum(0);
  for (const auto& c : suite.cases) sum += c.confidence;
  return sum / Rational(static_cast<std::int64_t>(suite.cases.size()));
}

}  // namespace ffg
