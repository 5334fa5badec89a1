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

#include <chrono>

#include "ffg/errors.hpp"
#include "ffg/exec.hpp"

using namespace ffg;

namespace {

RunnerProfile fast(double wall = 2.0) {
  RunnerProfile p = *runner_preset("python-fast");
  p.limits.wall_time_seconds = wall;
  return p;
}

const char* kAdd = "a, b = map(int, input().split())\nprint(a + b)\n";

}  // namespace

TEST_SUITE("exec") {

TEST_CASE("normalization") {
  CHECK(normalize_output("5 \r\n\n") == "5");
  CHECK(normalize_output("hello\nworld  \n") == "hello\nworld");
  CHECK(normalize_output("") == "");
  CHECK(normalize_output("\n\n") == "");
  CHECK(normalize_output("  lead\n\nmid\n") == "  lead\n\nmid");
  CHECK(canonical_input("1 2\r\n") == "1 2");
}

TEST_CASE("float tolerance only in token_float mode") {
  NormalizationPolicy exact;
  NormalizationPolicy loose{NormalizationMode::token_float, 1e-6};
  CHECK_FALSE(outputs_equal("1.0000001", "1.0", exact));
  CHECK(outputs_equal("1.0000001", "1.0", loose));
  CHECK_FALSE(outputs_equal("1.1", "1.0", loose));
  CHECK(outputs_equal("2 3.0000001", "2  3", loose));
  CHECK_FALSE(outputs_equal("2 3", "2 3 4", loose));
  CHECK_FALSE(outputs_equal("abc", "abd", loose));
  CHECK(validate_normalization(NormalizationPolicy{NormalizationMode::token_float, -1}));
}

TEST_CASE("profiles") {
  CHECK(runner_preset("python"));
  CHECK(runner_preset("sh")->source_suffix == ".sh");
  CHECK_FALSE(runner_preset("cobol"));
  RunnerProfile p = fast();
  p.command = {"python3"};
  CHECK(validate_profile(p));
  p = fast();
  p.limits.wall_time_seconds = 0;
  CHECK(validate_profile(p));
  CHECK_FALSE(validate_profile(fast()));
}

TEST_CASE("statuses") {
  auto ok = execute(kAdd, fast(), "2 3");
  CHECK(ok.status == ExecStatus::ok);
  CHECK(ok.stdout_canonical == "5");

  auto crash = execute("raise ValueError('x')\n", fast(), "");
  CHECK(crash.status == ExecStatus::runtime_error);
  CHECK_FALSE(crash.stdout_canonical);

  auto loop = execute("while True:\n    pass\n", fast(1.0), "");
  CHECK(loop.status == ExecStatus::timeout);
  CHECK(loop.wall_time_used < 1.5);

  RunnerProfile small = fast();
  small.limits.output_bytes = 1000;
  auto flood = execute("print('x' * 5000)\n", small, "");
  CHECK(flood.status == ExecStatus::output_overflow);
  CHECK_FALSE(flood.stdout_canonical);

  RunnerProfile missing = fast();
  missing.command = {"/nonexistent/runner", "{source}"};
  CHECK(execute(kAdd, missing, "2 3").status == ExecStatus::spawn_error);
  missing.command = {"no-such-runner-on-path", "{source}"};
  CHECK(execute(kAdd, missing, "2 3").status == ExecStatus::spawn_error);
}

TEST_CASE("sleeping child is killed at the wall deadline") {
  auto start = std::chrono::steady_clock::now();
  auto rec = execute("import time\ntime.sleep(10)\n", fast(1.0), "");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(rec.status == ExecStatus::timeout);
  CHECK(wall < 1.6);
}

TEST_CASE("grandchildren die with the group") {
  const char* prog =
      "import subprocess, sys\n"
      "subprocess.Popen(['sleep', '30'])\n"
      "import time\ntime.sleep(30)\n";
  auto start = std::chrono::steady_clock::now();
  auto rec = execute(prog, fast(1.0), "");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(rec.status == ExecStatus::timeout);
  CHECK(wall < 1.6);
}

TEST_CASE("memory limit surfaces as a runtime error") {
  RunnerProfile p = fast();
  p.limits.memory_bytes = 128ll << 20;
  auto rec = execute("x = bytearray(512 * 1024 * 1024)\nprint(len(x))\n", p, "");
  CHECK(rec.status == ExecStatus::runtime_error);
}

TEST_CASE("stdin handling") {
  auto rec = execute("import sys\nprint(repr(sys.stdin.read()))\n", fast(), "1 2");
  CHECK(rec.stdout_canonical == "'1 2\\n'");
  auto empty = execute("import sys\nprint(len(sys.stdin.read()))\n", fast(), "");
  CHECK(empty.stdout_canonical == "0");
  std::string big(300000, 'a');
  auto large = execute("import sys\nprint(len(sys.stdin.read()))\n", fast(), big);
  CHECK(large.stdout_canonical == "300001");
  auto ignores = execute("print('hi')\n", fast(), big);
  CHECK(ignores.status == ExecStatus::ok);
}

TEST_CASE("call based mode") {
  RunnerProfile p = fast();
  p.io_mode = IoMode::call_based;
  auto rec = execute("def solve(a, b):\n    return [a + b, a * b]\n", p, "3\n4");
  CHECK(rec.stdout_canonical == "[7, 12]");
  auto cls = execute("class Solution:\n    def solve(self, s):\n        return s[::-1]\n", p, "\"abc\"");
  CHECK(cls.stdout_canonical == "\"cba\"");
}

TEST_CASE("matrix fills every cell") {
  std::vector<ProgramRef> programs = {
      {"p", 0, "m", std::string(kAdd)},
      {"p", 1, "m", std::string("a, b = map(int, input().split())\nprint(a * b)\n")},
      {"p", 2, "m", std::nullopt},
  };
  auto grid = execute_matrix(programs, {"2 3", "4 5"}, fast(), {2, 0});
  REQUIRE(grid.rows() == 3);
  REQUIRE(grid.cols() == 2);
  CHECK(grid.cells().size() == 6);
  CHECK(grid.at(0, 0).stdout_canonical == "5");
  CHECK(grid.at(0, 1).stdout_canonical == "9");
  CHECK(grid.at(1, 0).stdout_canonical == "6");
  CHECK(grid.at(1, 1).stdout_canonical == "20");
  CHECK(grid.at(2, 0).status == ExecStatus::runtime_error);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(grid.at(r, c).sample_index == static_cast<std::int64_t>(r));
      CHECK(grid.at(r, c).case_index == static_cast<std::int64_t>(c));
    }
  CHECK(grid.column(1).size() == 3);
  CHECK(grid.row(1).size() == 2);
}

TEST_CASE("a timing-out program only affects its own row") {
  std::vector<ProgramRef> programs = {
      {"p", 0, "m", std::string(kAdd)},
      {"p", 1, "m", std::string("while True:\n    pass\n")},
      {"p", 2, "m", std::string(kAdd)},
  };
  auto grid = execute_matrix(programs, {"1 1", "2 2"}, fast(1.0), {3, 0});
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(grid.at(0, c).status == ExecStatus::ok);
    CHECK(grid.at(1, c).status == ExecStatus::timeout);
    CHECK(grid.at(2, c).status == ExecStatus::ok);
  }
}

TEST_CASE("spawn failures beyond the budget abort the matrix") {
  RunnerProfile p = fast();
  p.command = {"/nonexistent/runner", "{source}"};
  std::vector<ProgramRef> programs = {{"p", 0, "m", std::string(kAdd)}};
  CHECK_THROWS_AS(execute_matrix(programs, {"1 1", "2 2"}, p, {1, 0}), HarnessBudgetError);
  auto grid = execute_matrix(programs, {"1 1", "2 2"}, p, {1, 2});
  CHECK(grid.at(0, 0).status == ExecStatus::spawn_error);
  CHECK(grid.at(0, 1).status == ExecStatus::spawn_error);
  CHECK_THROWS_AS(execute_matrix(programs, {"1 1"}, fast(), {0, 0}), ValidationError);
}

TEST_CASE("status names round trip") {
  for (auto s : {ExecStatus::ok, ExecStatus::timeout, ExecStatus::runtime_error,
                 ExecStatus::output_overflow, ExecStatus::spawn_error})
    CHECK(parse_exec_status(to_string(s)) == s);
  CHECK_FALSE(parse_exec_status("weird"));
}

}  // TEST_SUITE
