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

// Inference-time selection: program self-consistency over voted outputs,
// checking voted outputs against ground truth, and weighted best-of-N.

#include <optional>
#include <string>
#include <vector>

#include "ffg/exec.hpp"
#include "ffg/model.hpp"
#include "ffg/vote.hpp"

namespace ffg {

struct SelectionResult {
  std::optional<std::int64_t> chosen_sample_index;
  bool passed = false;                      // set by callers that also run the truth check
  Rational confidence;                      // mean top-1 share over consensus inputs
  std::vector<std::int64_t> matched_counts; // per program row
  std::int64_t consensus_inputs = 0;
};

// Rows of `pool` are programs, columns inputs. Inputs without consensus are
// skipped; the lowest-index program matching every pseudo output is chosen.
// Throws EmptySuiteError when no input reaches consensus.
SelectionResult select_program_sc(const ExecutionGrid& pool, const VotePolicy& policy);

// True iff every pseudo output equals the gold output for the same input.
// Throws InputMismatchError when the two suites' input sets differ.
bool verify_pseudo_outputs_sct(const TestSuite& pseudo, const TestSuite& gold,
                               const NormalizationPolicy& normalization = {});

// Groups answers by equivalence and returns the canonical answer of the
// class with the largest summed score. nullopt entries are NoAnswer and
// never win. Ties follow `tie_policy` (discard yields nullopt).
std::optional<std::string> weighted_best_of_n(const std::vector<std::optional<std::string>>& answers,
                                              const std::vector<double>& scores,
                                              TiePolicy tie_policy = TiePolicy::first_seen);

}  // namespace ffg
