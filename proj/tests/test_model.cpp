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

#include <limits>

#include "ffg/codec.hpp"
#include "ffg/errors.hpp"
#include "ffg/model.hpp"
#include "ffg/rational.hpp"
#include "support.hpp"

using namespace ffg;

TEST_SUITE("model") {

TEST_CASE("rational normalizes sign and lowest terms") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS(Rational(1, 0));
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(5).str() == "5");
}

TEST_CASE("rational arithmetic and ordering are exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) - Rational(1, 3) == Rational(1, 3));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) / Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(Rational(1, 3) > Rational(333, 1000));
  CHECK(Rational(2, 3) - Rational(1, 3) > Rational(0));
}

TEST_CASE("rational parse") {
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("0.30") == Rational(3, 10));
  CHECK(Rational::parse("-1.5") == Rational(-3, 2));
  CHECK(Rational::parse(".5") == Rational(1, 2));
  CHECK(Rational::parse("50%") == Rational(1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK_FALSE(Rational::parse("abc"));
  CHECK_FALSE(Rational::parse("1/0"));
  CHECK_FALSE(Rational::parse(""));
  CHECK_FALSE(Rational::parse("99999999999999999999999"));
}

TEST_CASE("rational ceil") {
  CHECK(ceil(Rational(3)) == 3);
  CHECK(ceil(Rational(3, 10) * Rational(10)) == 3);
  CHECK(ceil(Rational(3, 10) * Rational(5)) == 2);
  CHECK(ceil(Rational(-3, 2)) == -1);
}

TEST_CASE("test case confidence must lie in the unit interval") {
  TestCase c{"", "4", Rational(6, 5)};
  auto v = validate(c);
  REQUIRE(v);
  CHECK(v->code == "confidence_out_of_range");
  CHECK_THROWS_AS(ensure(v), ValidationError);
  c.confidence = Rational(1, 2);
  CHECK_FALSE(validate(c));
}

TEST_CASE("gold suites carry confidence one") {
  TestSuite s{"p", {{"1", "2", Rational(9, 10)}}, Provenance::gold, 0};
  auto v = validate(s);
  REQUIRE(v);
  CHECK(v->code == "gold_confidence");
  CHECK(v->path == "cases[0].confidence");
  s.provenance = Provenance::self_voted;
  s.pool_size = 10;
  CHECK_FALSE(validate(s));
}

TEST_CASE("math gold suites hold one case with empty input") {
  Problem p{"m1", ProblemKind::math, "What is 2+2?", TestSuite{"m1", {{"x", "4"}}, Provenance::gold, 0}, {}, {}};
  CHECK(validate(p)->code == "math_suite_shape");
  p.gold_suite->cases[0].input.clear();
  CHECK_FALSE(validate(p));
}

TEST_CASE("feedback score invariants") {
  FeedbackScore s{"p", 0, Rational(1, 4), 1, 4,
                  {Verdict::pass, Verdict::fail, Verdict::fail, Verdict::error}, ""};
  CHECK_FALSE(validate(s));
  s.r = Rational(1, 3);
  CHECK(validate(s)->code == "ratio_mismatch");
  s.r = Rational(1, 4);
  s.per_case.pop_back();
  CHECK(validate(s)->code == "per_case_length");
  s.total = 0;
  CHECK(validate(s)->code == "empty_total");
}

TEST_CASE("prefix invariants") {
  SolutionPrefix p{"p", 0, 3, 5, "a\nb\nc", Rational(1, 3), 3};
  CHECK_FALSE(validate(p));
  p.step_count = 5;
  CHECK(validate(p)->code == "step_count_range");
  p.step_count = 0;
  CHECK(validate(p)->code == "step_count_range");
  p.step_count = 2;
  p.completion_count = 0;
  CHECK(validate(p)->code == "completion_count");
}

TEST_CASE("pair admission is checked against the producing policy") {
  PreferencePair pair{"p", {{0, {}}, "a"}, {{1, {}}, "b"}, PairKind::outcome, Rational(1), Rational(0)};
  CHECK_FALSE(validate(pair, Rational(1), Rational(0)));
  pair.r_l = Rational(1);
  CHECK(validate(pair, Rational(1), Rational(0))->code == "margin_unmet");
  pair.r_w = Rational(1, 2);
  pair.r_l = Rational(0);
  CHECK(validate(pair, Rational(1), Rational(0))->code == "below_floor");
  pair.r_w = Rational(1);
  pair.rejected.text = "a";
  CHECK(validate(pair, Rational(1), Rational(0))->code == "identical_sides");
}

TEST_CASE("dataset uniqueness") {
  Problem a{"x", ProblemKind::math, "q", {}, {}, {}};
  CHECK(validate_problem_set({a, a})->code == "duplicate_id");
  CandidateSolution s{"x", 0, "t", "1", "m", {}};
  CHECK(validate_solution_set({s, s})->code == "duplicate_sample");
  CandidateSolution t = s;
  t.model_tag = "other";
  CHECK_FALSE(validate_solution_set({s, t}));
}

TEST_CASE("codec round trips every entity") {
  Problem p{"c1", ProblemKind::code, "Add two numbers.",
            TestSuite{"c1", {{"1 2", "3"}, {"4 5", "9"}}, Provenance::gold, 0}, "python",
            {{"difficulty", "introductory"}}};
  auto p2 = decode<Problem>(encode(p));
  CHECK(encode(p2) == encode(p));

  TestSuite s{"c1", {{"1 2", "3", Rational(7, 10)}}, Provenance::self_voted, 10};
  CHECK(encode(decode<TestSuite>(encode(s))) == encode(s));

  CandidateSolution sol{"c1", 3, "text", std::nullopt, "policy", Decoding{0.7, 99, 512}};
  auto sol2 = decode<CandidateSolution>(encode(sol));
  CHECK_FALSE(sol2.payload);
  CHECK(sol2.decoding.seed == 99);
  CHECK(encode(sol2) == encode(sol));

  FeedbackScore fs{"c1", 3, Rational(1, 2), 1, 2, {Verdict::pass, Verdict::error}, "sha256:x"};
  CHECK(encode(decode<FeedbackScore>(encode(fs))) == encode(fs));

  SolutionPrefix pre{"c1", 2, 1, 4, "step", Rational(2, 3), 3};
  CHECK(encode(decode<SolutionPrefix>(encode(pre))) == encode(pre));

  PreferencePair pair{"c1", {{0, 2}, "a"}, {{1, {}}, "b"}, PairKind::process, Rational(2, 3), Rational(0)};
  auto pair2 = decode<PreferencePair>(encode(pair));
  CHECK(pair2.chosen.ref.step_count == 2);
  CHECK_FALSE(pair2.rejected.ref.step_count);
  CHECK(encode(pair2) == encode(pair));

  ExecutionRecord rec{"c1", 1, 0, ExecStatus::ok, "3", 0.25, "1 2", "policy"};
  auto rec2 = decode<ExecutionRecord>(encode(rec));
  CHECK(same_outcome(rec, rec2));
  CHECK_FALSE(encode(rec).contains("wall_time_used"));
  CHECK(encode(rec, true).contains("wall_time_used"));

  RunManifest m{2, {{"pairs.epsilon", "0.5"}}, {{"p.jsonl", "sha256:a"}}, {{"pairs.jsonl", "sha256:b"}},
                "policy", "2026-01-01T00:00:00Z", "2026-01-01T00:00:01Z"};
  CHECK(encode(decode<RunManifest>(encode(m))) == encode(m));
}

TEST_CASE("decoders report the offending field") {
  Json j = encode(TestSuite{"p", {{"", "1", Rational(1)}}, Provenance::gold, 0});
  j["cases"][0]["confidence"] = "9/10";
  try {
    decode<TestSuite>(j);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.code() == "gold_confidence");
    CHECK(e.path().find("cases[0]") != std::string::npos);
  }
  Json bad = {{"problem_id", "p"}, {"sample_index", "zero"}};
  CHECK_THROWS_AS(decode<CandidateSolution>(bad), ValidationError);
}

TEST_CASE("decoders never crash on malformed input") {
  testing::Rng rng(1234);
  const std::vector<Json> atoms = {nullptr, 1, -1, 2.5, "x", "1/0", "", true, Json::array(),
                                   Json::object(), Json::array({1, "a"})};
  const std::vector<std::string> keys = {"id", "kind", "prompt", "gold_suite", "cases",
                                         "confidence", "r", "passed", "total", "per_case",
                                         "problem_id", "sample_index", "status", "chosen",
                                         "rejected", "kind", "r_w", "r_l", "ref", "step_count"};
  for (int iter = 0; iter < 2000; ++iter) {
    Json j = Json::object();
    int n = static_cast<int>(rng.between(0, 6));
    for (int k = 0; k < n; ++k) {
      Json v = atoms[static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(atoms.size()) - 1))];
      if (rng.coin(0.2)) v = Json::array({Json::object({{"input", v}, {"output", v}})});
      j[keys[static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(keys.size()) - 1))]] = v;
    }
    auto attempt = [&](auto tag) {
      using T = decltype(tag);
      try {
        (void)decode<T>(j);
      } catch (const ValidationError&) {
      }
    };
    attempt(Problem{});
    attempt(TestSuite{});
    attempt(CandidateSolution{});
    attempt(FeedbackScore{});
    attempt(SolutionPrefix{});
    attempt(PreferencePair{});
    attempt(ExecutionRecord{});
    attempt(RunManifest{});
  }
  CHECK(true);
}

TEST_CASE("jsonl helpers name the failing line") {
  testing::TempDir dir;
  testing::write_file(dir / "s.jsonl", "{\"problem_id\":\"p\",\"provenance\":\"gold\",\"cases\":[{\"input\":\"1\",\"output\":\"2\"}]}\nnot json\n");
  try {
    read_jsonl<TestSuite>(dir / "s.jsonl");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("s.jsonl:2") != std::string::npos);
  }
}

}  // TEST_SUITE
