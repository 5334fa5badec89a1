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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "ffg/errors.hpp"
#include "ffg/pairs.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ffg;

namespace {

std::vector<ScoredSolution> scored(const std::vector<Rational>& rs) {
  std::vector<ScoredSolution> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    ScoredSolution s;
    s.score.problem_id = "p";
    s.score.sample_index = static_cast<std::int64_t>(i);
    s.score.r = rs[i];
    s.text = "solution " + std::to_string(i);
    out.push_back(std::move(s));
  }
  return out;
}

std::set<std::pair<std::int64_t, std::int64_t>> indices(const std::vector<PreferencePair>& pairs) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& p : pairs) out.emplace(p.chosen.ref.sample_index, p.rejected.ref.sample_index);
  return out;
}

CandidateSolution steps(int n, std::int64_t index = 0) {
  CandidateSolution s;
  s.problem_id = "p";
  s.sample_index = index;
  for (int i = 1; i <= n; ++i) s.text += "Step " + std::to_string(i) + ".\n";
  return s;
}

FeedbackScore r_of(Rational r) {
  FeedbackScore s;
  s.r = r;
  return s;
}

}  // namespace

TEST_SUITE("pairs") {

TEST_CASE("outcome pairs respect floor and margin") {
  PairPolicy policy{Rational(1, 2), Rational(3, 10), {}, false};
  auto pairs = build_outcome_pairs(scored({Rational(1), Rational(3, 5), Rational(1, 5)}), policy);
  CHECK(indices(pairs) == std::set<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {0, 2}, {1, 2}});

  PairPolicy strict{Rational(1), Rational(0), {}, false};
  auto strict_pairs = build_outcome_pairs(scored({Rational(1), Rational(1), Rational(0)}), strict);
  REQUIRE(strict_pairs.size() == 2);
  CHECK(strict_pairs[0].chosen.ref.sample_index == 0);
  CHECK(strict_pairs[0].rejected.ref.sample_index == 2);
  CHECK(strict_pairs[1].chosen.ref.sample_index == 1);
  CHECK(strict_pairs[1].rejected.ref.sample_index == 2);
  for (const auto& p : strict_pairs) CHECK_FALSE(validate(p, strict.epsilon, strict.sigma));

  CHECK(build_outcome_pairs(scored({Rational(1, 2), Rational(1, 2), Rational(1, 2)}),
                            PairPolicy{Rational(0), Rational(0), {}, false})
            .empty());
  CHECK(build_outcome_pairs({}, strict).empty());
}

TEST_CASE("thresholds compare exactly") {
  PairPolicy third{Rational(1, 3), Rational(0), {}, false};
  auto pairs = build_outcome_pairs(scored({Rational(2, 3), Rational(0)}), third);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].r_w == Rational(2, 3));

  PairPolicy two_thirds{Rational(2, 3), Rational(0), {}, false};
  auto three = build_outcome_pairs(scored({Rational(1), Rational(2, 3), Rational(0)}), two_thirds);
  CHECK(indices(three) == std::set<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("no pair appears in both orientations") {
  testing::Rng rng(17);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Rational> rs;
    auto n = rng.between(0, 10);
    for (std::int64_t i = 0; i < n; ++i) rs.emplace_back(rng.between(0, 4), 4);
    PairPolicy policy{Rational(rng.between(0, 4), 4), Rational(rng.between(0, 3), 4), {}, false};
    auto got = indices(build_outcome_pairs(scored(rs), policy));
    for (auto [w, l] : got) {
      CHECK(got.count({l, w}) == 0);
      CHECK(rs[static_cast<std::size_t>(w)] > rs[static_cast<std::size_t>(l)]);
    }
  }
}

TEST_CASE("identical texts, dedupe and the per-problem cap") {
  auto items = scored({Rational(1), Rational(0), Rational(0), Rational(1)});
  items[3].text = items[0].text;
  items[2].text = items[1].text;
  PairPolicy policy{Rational(1), Rational(0), {}, false};
  auto all = build_outcome_pairs(items, policy);
  CHECK(all.size() == 4);
  for (const auto& p : all) CHECK(p.chosen.text != p.rejected.text);
  policy.dedupe = true;
  CHECK(build_outcome_pairs(items, policy).size() == 1);
  policy.dedupe = false;
  policy.max_pairs_per_problem = 3;
  auto capped = build_outcome_pairs(items, policy);
  REQUIRE(capped.size() == 3);
  CHECK(indices(capped) == std::set<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {0, 2}, {3, 1}});
  policy.max_pairs_per_problem = 0;
  CHECK(build_outcome_pairs(items, policy).empty());
}

TEST_CASE("random instances match enumeration") {
  testing::Rng rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    auto n = rng.between(0, 12);
    auto den = rng.between(1, 6);
    std::vector<Rational> rs;
    std::vector<oracle::Frac> fr;
    for (std::int64_t i = 0; i < n; ++i) {
      auto num = rng.between(0, den);
      rs.emplace_back(num, den);
      fr.push_back({num, den});
    }
    auto e_den = rng.between(1, 6);
    auto e_num = rng.between(0, e_den);
    auto s_num = rng.between(0, 5);
    PairPolicy policy{Rational(e_num, e_den), Rational(s_num, 6), {}, false};
    std::set<std::pair<std::int64_t, std::int64_t>> want;
    for (auto p : oracle::enumerate_pairs(fr, {e_num, e_den}, {s_num, 6}))
      want.emplace(static_cast<std::int64_t>(p.w), static_cast<std::int64_t>(p.l));
    auto got = build_outcome_pairs(scored(rs), policy);
    CHECK(indices(got) == want);
    CHECK(got.size() == want.size());
  }
}

TEST_CASE("process pairs and merging") {
  std::vector<SolutionPrefix> prefixes = {
      {"p", 0, 1, 4, "a", Rational(2, 3), 3},
      {"p", 0, 2, 4, "a\nb", Rational(0), 3},
      {"p", 1, 1, 4, "c", Rational(1, 3), 3},
  };
  PairPolicy policy{Rational(1, 3), Rational(0), {}, false};
  auto process = build_process_pairs(prefixes, policy);
  REQUIRE(process.size() == 3);
  CHECK(process[0].kind == PairKind::process);
  CHECK(process[0].chosen.ref == ItemRef{0, 1});
  CHECK(process[0].rejected.ref == ItemRef{0, 2});
  prefixes[1].expected_return.reset();
  CHECK_THROWS_AS(build_process_pairs(prefixes, policy), ValidationError);

  auto outcome_b = build_outcome_pairs(scored({Rational(1), Rational(0)}), PairPolicy{});
  auto outcome_a = outcome_b;
  for (auto& p : outcome_a) p.problem_id = "a";
  std::vector<PreferencePair> outcome = outcome_b;
  outcome.insert(outcome.end(), outcome_a.begin(), outcome_a.end());
  auto merged = merge_pairs(outcome, process);
  REQUIRE(merged.size() == 5);
  CHECK(merged[0].problem_id == "a");
  CHECK(merged[1].problem_id == "p");
  CHECK(merged[1].kind == PairKind::outcome);
  CHECK(merged[2].kind == PairKind::process);
}

TEST_CASE("step counting") {
  CHECK(count_steps("a\n\n  \nb\nc") == 3);
  CHECK(count_steps("") == 0);
  CHECK(count_steps("only one") == 1);
}

TEST_CASE("prefix sampling") {
  PrefixPolicy fixed{PrefixMode::fixed, Rational(3, 10), 2, 3, 9};
  auto five = sample_prefixes(steps(5), fixed);
  REQUIRE(five.size() == 2);
  CHECK(five[0].step_count < five[1].step_count);
  for (const auto& p : five) {
    CHECK(p.step_count >= 1);
    CHECK(p.step_count <= 4);
    CHECK(p.parent_steps == 5);
    CHECK(count_steps(p.text) == p.step_count);
    CHECK(steps(5).text.rfind(p.text, 0) == 0);
    CHECK_FALSE(validate(p));
  }

  PrefixPolicy ratio{PrefixMode::ratio, Rational(3, 10), 10, 3, 9};
  CHECK(sample_prefixes(steps(10), ratio).size() == 3);
  CHECK(sample_prefixes(steps(2), ratio).size() == 1);
  fixed.fixed_count = 10;
  CHECK(sample_prefixes(steps(5), fixed).size() == 4);
  CHECK_THROWS_AS(sample_prefixes(steps(1), ratio), TooShortError);
  CHECK_THROWS_AS(sample_prefixes(steps(0), ratio), TooShortError);
}

TEST_CASE("prefix sampling is a pure function of seed and solution") {
  PrefixPolicy policy{PrefixMode::fixed, Rational(3, 10), 3, 3, 42};
  auto a = sample_prefixes(steps(12, 4), policy);
  auto b = sample_prefixes(steps(12, 4), policy);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].step_count == b[i].step_count);
  std::set<std::vector<std::int64_t>> draws;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    policy.rng_seed = seed;
    std::vector<std::int64_t> ks;
    for (const auto& p : sample_prefixes(steps(12, 4), policy)) ks.push_back(p.step_count);
    draws.insert(ks);
  }
  CHECK(draws.size() > 1);
}

TEST_CASE("expected returns are exact means") {
  SolutionPrefix p{"p", 0, 1, 3, "a", std::nullopt, 0};
  CHECK(estimate_prefix_return(p, {r_of(Rational(1)), r_of(Rational(0)), r_of(Rational(0))}).expected_return ==
        Rational(1, 3));
  auto all = estimate_prefix_return(p, {r_of(Rational(1)), r_of(Rational(1)), r_of(Rational(1))});
  CHECK(all.expected_return == Rational(1));
  CHECK(all.completion_count == 3);
  CHECK(estimate_prefix_return(p, {r_of(Rational(1, 2)), r_of(Rational(1, 4)), r_of(Rational(1, 4))})
            .expected_return == Rational(1, 3));
  CHECK_THROWS_AS(estimate_prefix_return(p, {}), ValidationError);
}

TEST_CASE("concatenation") {
  CHECK(concat_completion("a\nb", "c") == "a\nb\nc");
  CHECK(concat_completion("a\nb", "\nc") == "a\nb\nc");
  CHECK(concat_completion("a", "") == "a");
}

TEST_CASE("dpo reference loss") {
  DpoHyper hyper{0.5, 0.0};
  CHECK(dpo_reference_loss({-3, -3, -7, -7}, 0, hyper) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(dpo_reference_loss({0.4, 0, -0.1, 0}, 0, hyper) == doctest::Approx(std::log1p(std::exp(-0.25))).epsilon(1e-9));
  hyper.alpha = 0.2;
  CHECK(dpo_reference_loss({0.4, 0, -0.1, 0}, 1.0, hyper) == doctest::Approx(std::log1p(std::exp(-0.25)) + 0.2).epsilon(1e-9));
  CHECK(dpo_logit({0.4, 0, -0.1, 0}, hyper) == doctest::Approx(0.25));
  CHECK(dpo_logit({-0.1, 0, 0.4, 0}, hyper) == doctest::Approx(-0.25));
  CHECK(std::isfinite(dpo_reference_loss({1000, 0, -1000, 0}, 0, {1.0, 0})));
  CHECK(dpo_reference_loss({-1000, 0, 1000, 0}, 0, {1.0, 0}) == doctest::Approx(2000.0));
}

TEST_CASE("non-finite inputs are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(dpo_reference_loss({nan, 0, 0, 0}, 0, {0.5, 0}), NonFiniteError);
  CHECK_THROWS_AS(dpo_reference_loss({0, 0, -inf, 0}, 0, {0.5, 0}), NonFiniteError);
  CHECK_THROWS_AS(dpo_reference_loss({0, 0, 0, 0}, nan, {0.5, 0}), NonFiniteError);
  CHECK_THROWS_AS(dpo_reference_loss({0, 0, 0, 0}, 0, {0.0, 0}), ValidationError);
}

TEST_CASE("policy validation") {
  CHECK(validate_pair_policy({Rational(3, 2), Rational(0), {}, false}));
  CHECK(validate_pair_policy({Rational(1), Rational(-1), {}, false}));
  CHECK_FALSE(validate_pair_policy({}));
  CHECK(validate_prefix_policy({PrefixMode::ratio, Rational(0), 1, 3, 0}));
  CHECK(validate_prefix_policy({PrefixMode::fixed, Rational(1, 2), 1, 0, 0}));
  CHECK(validate_dpo_hyper({-1, 0}));
}

}  // TEST_SUITE
