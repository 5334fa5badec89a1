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

// Majority voting over executed solution pools: pseudo outputs for code
// inputs, pseudo answer labels for math, and suite confidence.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ffg/exec.hpp"
#include "ffg/model.hpp"

namespace ffg {

enum class TiePolicy { discard_input, first_seen };

struct VotePolicy {
  TiePolicy tie_policy = TiePolicy::discard_input;
  // Executed solutions required per input before a vote counts.
  std::int64_t min_pool = 3;
};

std::optional<std::string> validate_vote_policy(const VotePolicy& policy);
std::string to_string(TiePolicy policy);
std::optional<TiePolicy> parse_tie_policy(std::string_view s);

struct PseudoOutput {
  std::string value;
  Rational confidence;  // top-1 count / pool size, failures included
};

enum class NoConsensusReason { tie, all_failed, pool_too_small };

struct NoConsensus {
  NoConsensusReason reason;
};

using VoteOutcome = std::variant<PseudoOutput, NoConsensus>;

std::string to_string(NoConsensusReason reason);

// Candidate tally of one vote, for audit logs: values in first-seen order.
struct VoteTally {
  std::vector<std::pair<std::string, std::int64_t>> counts;
  std::int64_t failures = 0;
};

// Failed executions never win but count in the confidence denominator.
VoteOutcome vote_outputs(const std::vector<ExecutionRecord>& records, const VotePolicy& policy,
                         VoteTally* tally = nullptr);

// Same rule over plain values; nullopt entries are failures.
VoteOutcome vote_values(const std::vector<std::optional<std::string>>& values,
                        const VotePolicy& policy, VoteTally* tally = nullptr);

// Mode over extracted answers grouped by answers_equivalent; the winner is
// reported in canonical form. NoAnswer entries only count in the
// denominator.
VoteOutcome majority_answer_label(const std::vector<std::optional<std::string>>& answers,
                                  const VotePolicy& policy);

Provenance pool_provenance(std::string_view pool_model_tag, std::string_view frontier_tag);

// Per-input vote result kept for --audit output.
struct VoteAudit {
  std::string problem_id;
  std::string input;
  VoteTally tally;
  VoteOutcome outcome;
};

// Column c of `pool` holds every pool program's record for inputs[c].
// Inputs without consensus are omitted. Throws EmptySuiteError when no
// input survives.
TestSuite build_pseudo_suite(const std::string& problem_id, const std::vector<std::string>& inputs,
                             const ExecutionGrid& pool, const VotePolicy& policy,
                             Provenance provenance, std::vector<VoteAudit>* audit = nullptr);

// Mean of per-case confidence; throws EmptySuiteError on an empty suite.
Rational suite_confidence(const TestSuite& suite);

}  // namespace ffg
