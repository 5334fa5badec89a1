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

#include <set>

#include "ffg/config.hpp"
#include "ffg/errors.hpp"
#include "support.hpp"

using namespace ffg;

namespace {

std::string error_code(const std::map<std::string, std::string>& values) {
  try {
    config_from_values(values);
  } catch (const ValidationError& e) {
    return e.code() + ":" + e.path();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  auto c = config_from_values({});
  CHECK(c.k_sc == 16);
  CHECK(c.k_dpo == 8);
  CHECK(c.pairs.epsilon == Rational(1));
  CHECK(c.pairs.sigma == Rational(0));
  CHECK_FALSE(c.pairs.max_pairs_per_problem);
  CHECK(c.vote.tie_policy == TiePolicy::discard_input);
  CHECK(c.prefix.ratio == Rational(3, 10));
  CHECK(c.runner.name == "python");
  CHECK(c.runner.limits.wall_time_seconds == 2.0);
  CHECK(c.effective.at("pairs.epsilon") == "1");
  CHECK(c.effective.size() > 50);
}

TEST_CASE("every preset loads and validates") {
  auto names = preset_names();
  CHECK(names.size() == 7);
  for (const auto& name : names) {
    auto c = config_from_values({{"run.preset", name}});
    CHECK(c.effective.at("run.preset") == name);
    CHECK(c.k_dpo >= 2);
  }
  CHECK_FALSE(preset_values("nope"));
  CHECK(error_code({{"run.preset", "nope"}}).rfind("bad_config", 0) == 0);
}

TEST_CASE("code and math presets") {
  auto code = config_from_values({{"run.preset", "code-dpo"}});
  CHECK(code.pairs.epsilon == Rational(1, 2));
  CHECK(code.pairs.sigma == Rational(3, 5));
  CHECK(code.dpo.beta == 0.1);
  CHECK(code.feedback == FeedbackSource::self);
  CHECK(code.effective.at("pairs.epsilon") == "0.5");
  CHECK(code.effective.at("pairs.sigma") == "0.6");

  auto math = config_from_values({{"run.preset", "math-dpo"}});
  CHECK(math.pairs.epsilon == Rational(1));
  CHECK(math.pairs.sigma == Rational(0));
  CHECK(math.dpo.beta == 0.5);
  CHECK(math.dpo.alpha == 0.2);
  CHECK(math.effective.at("pairs.epsilon") == "1.0");
  CHECK(math.effective.at("pairs.sigma") == "0.0");
  CHECK_FALSE(math.process_pairs);

  auto pdpo = config_from_values({{"run.preset", "code-pdpo-gold"}});
  CHECK(pdpo.prefix.ratio == Rational(3, 10));
  CHECK(pdpo.prefix.completions == 5);
  CHECK(pdpo.pairs.epsilon == Rational(1, 5));
  CHECK_FALSE(pdpo.outcome_pairs);
  CHECK(pdpo.process_pairs);
  CHECK(pdpo.feedback == FeedbackSource::gold);
}

TEST_CASE("explicit keys override the preset") {
  auto c = config_from_values({{"run.preset", "code-dpo"}, {"pairs.sigma", "1/4"}});
  CHECK(c.pairs.sigma == Rational(1, 4));
  CHECK(c.effective.at("pairs.sigma") == "1/4");
  CHECK(c.pairs.epsilon == Rational(1, 2));
}

TEST_CASE("bad values name their key") {
  CHECK(error_code({{"pairs.bogus", "1"}}) == "bad_config:pairs.bogus");
  CHECK(error_code({{"pairs.epsilon", "abc"}}).find("pairs.epsilon") != std::string::npos);
  CHECK(error_code({{"pairs.epsilon", "3/2"}}).find("pairs") != std::string::npos);
  CHECK(error_code({{"sampling.k_dpo", "1"}}).find("k_dpo") != std::string::npos);
  CHECK(error_code({{"sampling.k_sc", "2"}, {"vote.min_pool", "3"}}) != "");
  CHECK(error_code({{"run.prompt_source", "fresh"}, {"run.num_splits", "2"}, {"run.round_index", "2"}}) != "");
  CHECK(error_code({{"exec.runner", "cobol"}}).find("exec.runner") != std::string::npos);
  CHECK(error_code({{"run.parallelism", "0"}}) != "");
  CHECK(error_code({{"dpo.beta", "-1"}}) != "");
  CHECK(error_code({{"vote.tie_policy", "coin"}}) != "");
}

TEST_CASE("ini files and relative paths") {
  testing::TempDir dir;
  testing::write_file(dir / "cfg" / "round.ini",
                      "[run]\npreset = math-dpo\nproblems = data/p.jsonl\nseed = 5\n"
                      "[pairs]\nepsilon = 2/3\n[exec]\nguard = bin/guard\n");
  auto c = load_config(dir / "cfg" / "round.ini", {{"run.round_index", "1"}});
  CHECK(c.problems == (dir.path() / "cfg" / "data" / "p.jsonl").lexically_normal());
  CHECK(c.pairs.epsilon == Rational(2, 3));
  CHECK(c.effective.at("pairs.epsilon") == "2/3");
  CHECK(c.round_index == 1);
  CHECK(c.seed == 5);
  CHECK(c.runner.guarded);
  CHECK(c.runner.command.front() == (dir.path() / "cfg" / "bin" / "guard").lexically_normal().string());
  CHECK_THROWS(load_config(dir / "missing.ini"));
  testing::write_file(dir / "bad.ini", "[run]\nwat = 1\n");
  CHECK_THROWS_AS(load_config(dir / "bad.ini"), ValidationError);
}

TEST_CASE("feedback by round") {
  auto c = config_from_values({});
  CHECK(feedback_for_round(c) == FeedbackSource::frontier);
  c.round_index = 1;
  CHECK(feedback_for_round(c) == FeedbackSource::self);
  c.round_index = 5;
  CHECK(feedback_for_round(c) == FeedbackSource::self);
  c.feedback = FeedbackSource::gold;
  CHECK(feedback_for_round(c) == FeedbackSource::gold);
  auto order = config_from_values({{"run.feedback_order", "self,frontier"}, {"run.round_index", "1"}});
  CHECK(feedback_for_round(order) == FeedbackSource::frontier);
}

TEST_CASE("derived seeds separate streams and rounds") {
  auto c = config_from_values({{"run.seed", "3"}});
  std::set<std::uint64_t> seeds = {derive_seed(c, "policy"), derive_seed(c, "frontier"), derive_seed(c, "prefix")};
  c.round_index = 1;
  seeds.insert(derive_seed(c, "policy"));
  CHECK(seeds.size() == 4);
  auto again = config_from_values({{"run.seed", "3"}});
  CHECK(derive_seed(again, "policy") == derive_seed(config_from_values({{"run.seed", "3"}}), "policy"));
  CHECK(again.policy_backend.seed != again.frontier_backend.seed);
}

}  // TEST_SUITE
