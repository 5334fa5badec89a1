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

#include "ffg/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ffg/digest.hpp"
#include "ffg/errors.hpp"

namespace ffg {
namespace {

struct Item {
  ItemRef ref;
  const std::string* text;
  Rational r;
};

std::vector<PreferencePair> pairs_over(const std::string& problem_id, const std::vector<Item>& items,
                                       const PairPolicy& policy, PairKind kind) {
  std::vector<PreferencePair> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t w = 0; w < items.size(); ++w) {
    for (std::size_t l = 0; l < items.size(); ++l) {
      if (w == l || !admits(items[w].r, items[l].r, policy)) continue;
      if (*items[w].text == *items[l].text) continue;
      if (policy.dedupe && !seen.emplace(*items[w].text, *items[l].text).second) continue;
      out.push_back(PreferencePair{problem_id,
                                   PairSide{items[w].ref, *items[w].text},
                                   PairSide{items[l].ref, *items[l].text},
                                   kind, items[w].r, items[l].r});
    }
  }
  if (policy.max_pairs_per_problem &&
      static_cast<std::int64_t>(out.size()) > *policy.max_pairs_per_problem)
    out.resize(static_cast<std::size_t>(*policy.max_pairs_per_problem));
  return out;
}

struct Step {
  std::size_t begin;
  std::size_t end;  // one past the last character, excluding '\n'
};

std::vector<Step> split_steps(std::string_view text) {
  std::vector<Step> steps;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r\v\f") != std::string_view::npos) steps.push_back({start, end});
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return steps;
}

// Unbiased draw in [0, n) from the raw engine output; the standard
// distributions are not portable across library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw NonFiniteError(std::string(name) + " is not finite");
}

}  // namespace

std::optional<std::string> validate_pair_policy(const PairPolicy& policy) {
  if (policy.epsilon < Rational(0) || policy.epsilon > Rational(1)) return "epsilon must lie in [0,1]";
  if (policy.sigma < Rational(0)) return "sigma must be >= 0";
  if (policy.max_pairs_per_problem && *policy.max_pairs_per_problem < 0)
    return "max_pairs_per_problem must be >= 0";
  return std::nullopt;
}

std::optional<std::string> validate_prefix_policy(const PrefixPolicy& policy) {
  if (policy.ratio <= Rational(0) || policy.ratio > Rational(1)) return "ratio must lie in (0,1]";
  if (policy.fixed_count < 1) return "fixed_count must be >= 1";
  if (policy.completions < 1) return "completions (M) must be >= 1";
  return std::nullopt;
}

std::optional<std::string> validate_dpo_hyper(const DpoHyper& hyper) {
  if (!(hyper.beta > 0) || !std::isfinite(hyper.beta)) return "beta must be > 0";
  if (!(hyper.alpha >= 0) || !std::isfinite(hyper.alpha)) return "alpha must be >= 0";
  return std::nullopt;
}

bool admits(const Rational& r_w, const Rational& r_l, const PairPolicy& policy) {
  return r_w >= policy.epsilon && r_w - r_l > policy.sigma;
}

std::vector<PreferencePair> build_outcome_pairs(const std::vector<ScoredSolution>& solutions,
                                                const PairPolicy& policy) {
  if (solutions.empty()) return {};
  std::vector<Item> items;
  items.reserve(solutions.size());
  for (const auto& s : solutions) {
    if (s.score.problem_id != solutions.front().score.problem_id)
      throw ValidationError("mixed_problems", "problem_id", "scores span several problems");
    items.push_back(Item{ItemRef{s.score.sample_index, std::nullopt}, &s.text, s.score.r});
  }
  return pairs_over(solutions.front().score.problem_id, items, policy, PairKind::outcome);
}

std::vector<PreferencePair> build_process_pairs(const std::vector<SolutionPrefix>& prefixes,
                                                const PairPolicy& policy) {
  if (prefixes.empty()) return {};
  std::vector<Item> items;
  items.reserve(prefixes.size());
  for (const auto& p : prefixes) {
    if (!p.expected_return)
      throw ValidationError("missing_return", "expected_return", "prefix lacks an expected return");
    if (p.problem_id != prefixes.front().problem_id)
      throw ValidationError("mixed_problems", "problem_id", "prefixes span several problems");
    items.push_back(Item{ItemRef{p.parent_sample_index, p.step_count}, &p.text, *p.expected_return});
  }
  return pairs_over(prefixes.front().problem_id, items, policy, PairKind::process);
}

std::vector<PreferencePair> merge_pairs(const std::vector<PreferencePair>& outcome,
                                        const std::vector<PreferencePair>& process) {
  std::vector<PreferencePair> out;
  out.reserve(outcome.size() + process.size());
  out.insert(out.end(), outcome.begin(), outcome.end());
  out.insert(out.end(), process.begin(), process.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.problem_id != b.problem_id) return a.problem_id < b.problem_id;
    return a.kind == PairKind::outcome && b.kind == PairKind::process;
  });
  return out;
}

std::int64_t count_steps(std::string_view text) {
  return static_cast<std::int64_t>(split_steps(text).size());
}

std::vector<SolutionPrefix> sample_prefixes(const CandidateSolution& solution,
                                            const PrefixPolicy& policy) {
  if (auto err = validate_prefix_policy(policy)) throw ValidationError("bad_prefix_policy", "", *err);
  const auto steps = split_steps(solution.text);
  const auto total = static_cast<std::int64_t>(steps.size());
  if (total < 2)
    throw TooShortError("solution " + std::to_string(solution.sample_index) + " of " +
                        solution.problem_id + " has fewer than 2 steps");

  const std::int64_t cuts = total - 1;
  std::int64_t want = policy.mode == PrefixMode::ratio
                          ? ceil(policy.ratio * Rational(total))
                          : policy.fixed_count;
  want = std::clamp<std::int64_t>(want, 1, cuts);

  std::mt19937_64 rng(policy.rng_seed ^ stable_hash(solution.problem_id) ^
                      (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(solution.sample_index + 1)));
  // Partial Fisher-Yates over cut points 1..S-1.
  std::vector<std::int64_t> pool(static_cast<std::size_t>(cuts));
  for (std::int64_t k = 0; k < cuts; ++k) pool[static_cast<std::size_t>(k)] = k + 1;
  for (std::int64_t i = 0; i < want; ++i) {
    auto j = i + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(cuts - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<std::int64_t> chosen(pool.begin(), pool.begin() + want);
  std::sort(chosen.begin(), chosen.end());

  std::vector<SolutionPrefix> out;
  out.reserve(chosen.size());
  for (std::int64_t k : chosen) {
    SolutionPrefix p;
    p.problem_id = solution.problem_id;
    p.parent_sample_index = solution.sample_index;
    p.step_count = k;
    p.parent_steps = total;
    p.text = solution.text.substr(0, steps[static_cast<std::size_t>(k - 1)].end);
    out.push_back(std::move(p));
  }
  return out;
}

std::string concat_completion(std::string_view prefix, std::string_view completion) {
  std::string out(prefix);
  if (!completion.empty() && completion.front() != '\n') out.push_back('\n');
  out.append(completion);
  return out;
}

SolutionPrefix estimate_prefix_return(SolutionPrefix prefix,
                                      const std::vector<FeedbackScore>& completion_scores) {
  if (completion_scores.empty())
    throw ValidationError("no_completions", "completion_scores", "need at least one completion");
  Rational sum(0);
  for (const auto& s : completion_scores) sum += s.r;
  const auto m = static_cast<std::int64_t>(completion_scores.size());
  prefix.expected_return = sum / Rational(m);
  prefix.completion_count = m;
  return prefix;
}

double dpo_logit(const SequenceLogProbs& lp, const DpoHyper& hyper) {
  return hyper.beta * ((lp.policy_chosen - lp.ref_chosen) - (lp.policy_rejected - lp.ref_rejected));
}

double dpo_reference_loss(const SequenceLogProbs& lp, double chosen_mean_nll, const DpoHyper& hyper) {
  check_finite(lp.policy_chosen, "logp_policy_chosen");
  check_finite(lp.ref_chosen, "logp_ref_chosen");
  check_finite(lp.policy_rejected, "logp_policy_rejected");
  check_finite(lp.ref_rejected, "logp_ref_rejected");
  check_finite(chosen_mean_nll, "chosen_mean_nll");
  check_finite(hyper.beta, "beta");
  check_finite(hyper.alpha, "alpha");
  if (auto err = validate_dpo_hyper(hyper)) throw ValidationError("bad_dpo_hyper", "", *err);
  const double z = dpo_logit(lp, hyper);
  // -log sigmoid(z) = softplus(-z), evaluated without overflow.
  const double nls = z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  return nls + hyper.alpha * chosen_mean_nll;
}

}  // namespace ffg
