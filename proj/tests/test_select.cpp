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

#include "ffg/errors.hpp"
#include "ffg/select.hpp"
#include "support.hpp"

using namespace ffg;

namespace {

// Grid of outputs; nullopt cells are runtime errors.
ExecutionGrid grid_of(const std::vector<std::vector<std::optional<std::string>>>& rows) {
  ExecutionGrid g(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      auto& rec = g.at(r, c);
      rec.sample_index = static_cast<std::int64_t>(r);
      rec.case_index = static_cast<std::int64_t>(c);
      rec.status = rows[r][c] ? ExecStatus::ok : ExecStatus::runtime_error;
      rec.stdout_canonical = rows[r][c];
    }
  return g;
}

TestSuite suite(std::vector<std::pair<std::string, std::string>> cases, Provenance provenance) {
  TestSuite s{"p", {}, provenance, provenance == Provenance::gold ? 0 : 3};
  for (auto& [in, out] : cases) s.cases.push_back({in, out, Rational(1)});
  return s;
}

}  // namespace

TEST_SUITE("select") {

TEST_CASE("the program matching every consensus output is chosen") {
  auto g = grid_of({{"1", "2"}, {"1", "3"}, {"1", "3"}, {"0", "3"}});
  auto res = select_program_sc(g, VotePolicy{});
  CHECK(res.chosen_sample_index == 1);
  CHECK(res.consensus_inputs == 2);
  CHECK(res.matched_counts == std::vector<std::int64_t>{1, 2, 2, 1});
  CHECK(res.confidence == (Rational(3, 4) + Rational(3, 4)) / Rational(2));
}

TEST_CASE("lowest index wins among full matches") {
  auto g = grid_of({{"9", "9"}, {"1", "2"}, {"1", "2"}, {"1", "2"}});
  CHECK(select_program_sc(g, VotePolicy{}).chosen_sample_index == 1);
}

TEST_CASE("no full match leaves the choice empty") {
  auto g = grid_of({{"1", "x"}, {"1", "2"}, {"y", "2"}, {"1", "2"}, {"1", "z"}, {"w", "2"}});
  auto g2 = grid_of({{"1", "a"}, {"1", "b"}, {"1", "c"}, {"0", "2"}, {"5", "2"}, {"6", "2"}});
  auto res = select_program_sc(g2, VotePolicy{});
  CHECK_FALSE(res.chosen_sample_index);
  CHECK(select_program_sc(g, VotePolicy{}).chosen_sample_index == 1);
}

TEST_CASE("inputs without consensus are skipped") {
  auto g = grid_of({{"1", "a"}, {"1", "b"}, {"2", "c"}});
  auto res = select_program_sc(g, VotePolicy{});
  CHECK(res.consensus_inputs == 1);
  CHECK(res.chosen_sample_index == 0);
  auto none = grid_of({{"a"}, {"b"}, {"c"}});
  CHECK_THROWS_AS(select_program_sc(none, VotePolicy{}), EmptySuiteError);
}

TEST_CASE("a chosen program agrees with every voted output") {
  testing::Rng rng(29);
  for (int iter = 0; iter < 300; ++iter) {
    auto rows = static_cast<std::size_t>(rng.between(3, 8));
    auto cols = static_cast<std::size_t>(rng.between(1, 5));
    std::vector<std::vector<std::optional<std::string>>> cells(rows);
    for (auto& row : cells)
      for (std::size_t c = 0; c < cols; ++c)
        row.push_back(rng.coin(0.1) ? std::nullopt : std::optional(std::to_string(rng.between(0, 2))));
    auto g = grid_of(cells);
    SelectionResult res;
    try {
      res = select_program_sc(g, VotePolicy{});
    } catch (const EmptySuiteError&) {
      continue;
    }
    if (!res.chosen_sample_index) continue;
    auto r = static_cast<std::size_t>(*res.chosen_sample_index);
    for (std::size_t c = 0; c < cols; ++c) {
      auto vote = vote_outputs(g.column(c), VotePolicy{});
      if (auto* w = std::get_if<PseudoOutput>(&vote)) CHECK(g.at(r, c).stdout_canonical == w->value);
    }
  }
}

TEST_CASE("truth check of voted outputs") {
  auto gold = suite({{"1", "a"}, {"2", "b"}}, Provenance::gold);
  CHECK(verify_pseudo_outputs_sct(suite({{"2", "b"}, {"1", "a"}}, Provenance::self_voted), gold));
  CHECK_FALSE(verify_pseudo_outputs_sct(suite({{"1", "a"}, {"2", "c"}}, Provenance::self_voted), gold));
  CHECK_THROWS_AS(verify_pseudo_outputs_sct(suite({{"1", "a"}}, Provenance::self_voted), gold),
                  InputMismatchError);
  CHECK_THROWS_AS(verify_pseudo_outputs_sct(suite({{"1", "a"}, {"3", "b"}}, Provenance::self_voted), gold),
                  InputMismatchError);
  auto floats = suite({{"1", "0.5"}}, Provenance::gold);
  auto close = suite({{"1", "0.5000001"}}, Provenance::self_voted);
  CHECK_FALSE(verify_pseudo_outputs_sct(close, floats));
  CHECK(verify_pseudo_outputs_sct(close, floats, {NormalizationMode::token_float, 1e-6}));
}

TEST_CASE("weighted best of n") {
  CHECK(weighted_best_of_n({"9", "7", "9"}, {0.2, 0.9, 0.3}) == "7");
  CHECK(weighted_best_of_n({"1/2", "0.5", "3"}, {0.3, 0.3, 0.5}) == "1/2");
  CHECK_FALSE(weighted_best_of_n({std::nullopt, std::nullopt}, {1.0, 1.0}));
  CHECK(weighted_best_of_n({"1", "2"}, {0.5, 0.5}) == "1");
  CHECK_FALSE(weighted_best_of_n({"1", "2"}, {0.5, 0.5}, TiePolicy::discard_input));
  CHECK_THROWS_AS(weighted_best_of_n({"1"}, {0.5, 0.5}), ValidationError);
}

TEST_CASE("uniform weights reduce to the majority") {
  testing::Rng rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::optional<std::string>> answers;
    auto n = rng.between(1, 10);
    for (std::int64_t i = 0; i < n; ++i)
      answers.push_back(rng.coin(0.2) ? std::nullopt : std::optional(std::to_string(rng.between(0, 3))));
    auto weighted = weighted_best_of_n(answers, std::vector<double>(answers.size(), 1.0), TiePolicy::discard_input);
    auto majority = majority_answer_label(answers, {TiePolicy::discard_input, 1});
    if (auto* w = std::get_if<PseudoOutput>(&majority)) {
      CHECK(weighted == w->value);
    } else {
      CHECK_FALSE(weighted);
    }
  }
}

}  // TEST_SUITE
