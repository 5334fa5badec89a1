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

// Preference-pair construction from outcome scores and prefix returns,
// prefix sampling, and a reference calculator for the DPO+NLL loss.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffg/model.hpp"

namespace ffg {

struct PairPolicy {
  Rational epsilon{1};  // floor on the chosen score, r_w >= epsilon
  Rational sigma{0};    // strict margin, r_w - r_l > sigma
  std::optional<std::int64_t> max_pairs_per_problem;
  // Drop pairs whose (chosen text, rejected text) repeats an earlier pair.
  bool dedupe = false;
};

enum class PrefixMode { ratio, fixed };

struct PrefixPolicy {
  PrefixMode mode = PrefixMode::ratio;
  Rational ratio{3, 10};
  std::int64_t fixed_count = 10;
  std::int64_t completions = 3;  // M
  std::uint64_t rng_seed = 0;
};

struct DpoHyper {
  double beta = 0.1;
  double alpha = 0.0;  // NLL weight
};

std::optional<std::string> validate_pair_policy(const PairPolicy& policy);
std::optional<std::string> validate_prefix_policy(const PrefixPolicy& policy);
std::optional<std::string> validate_dpo_hyper(const DpoHyper& hyper);

// r_w >= epsilon and r_w - r_l > sigma.
bool admits(const Rational& r_w, const Rational& r_l, const PairPolicy& policy);

struct ScoredSolution {
  FeedbackScore score;
  std::string text;
};

// All admitted ordered pairs, w-index major, then deduped and capped.
// Sides with identical text are never paired.
std::vector<PreferencePair> build_outcome_pairs(const std::vector<ScoredSolution>& solutions,
                                                const PairPolicy& policy);

// Same rule over prefix expected returns; every prefix must carry one.
std::vector<PreferencePair> build_process_pairs(const std::vector<SolutionPrefix>& prefixes,
                                                const PairPolicy& policy);

// Outcome and process pairs of many problems, ordered by problem id, with
// each problem's outcome pairs before its process pairs.
std::vector<PreferencePair> merge_pairs(const std::vector<PreferencePair>& outcome,
                                        const std::vector<PreferencePair>& process);

// Reasoning steps are the non-blank lines of a solution.
std::int64_t count_steps(std::string_view text);

// Draws distinct cut points k in [1, S-1] (S = steps) and returns the
// prefixes made of the first k steps, ascending in k. Throws TooShortError
// when S < 2.
std::vector<SolutionPrefix> sample_prefixes(const CandidateSolution& solution,
                                            const PrefixPolicy& policy);

// Prefix text followed by a completion, joined by one line break.
std::string concat_completion(std::string_view prefix, std::string_view completion);

// Sets expected_return to the exact mean of the completion scores.
SolutionPrefix estimate_prefix_return(SolutionPrefix prefix,
                                      const std::vector<FeedbackScore>& completion_scores);

struct SequenceLogProbs {
  double policy_chosen = 0;
  double ref_chosen = 0;
  double policy_rejected = 0;
  double ref_rejected = 0;
};

// beta * [(pc - rc) - (pr - rr)]
double dpo_logit(const SequenceLogProbs& lp, const DpoHyper& hyper);

// -log sigmoid(logit) + alpha * chosen_mean_nll. Throws NonFiniteError on
// NaN or infinite inputs.
double dpo_reference_loss(const SequenceLogProbs& lp, double chosen_mean_nll, const DpoHyper& hyper);

}  // namespace ffg
