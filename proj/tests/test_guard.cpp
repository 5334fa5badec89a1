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

#include <cstdlib>

#include "ffg/exec.hpp"
#include "support.hpp"

using namespace ffg;

namespace {

RunnerProfile guarded() {
  RunnerProfile p = with_guard(*runner_preset("python-fast"), testing::fixture("fake_guard.sh").string());
  p.limits.wall_time_seconds = 2.0;
  return p;
}

struct GuardMode {
  explicit GuardMode(const char* mode) { ::setenv("FAKE_GUARD_MODE", mode, 1); }
  ~GuardMode() { ::unsetenv("FAKE_GUARD_MODE"); }
};

}  // namespace

TEST_SUITE("guard") {

TEST_CASE("guard command line") {
  RunnerProfile p = guarded();
  CHECK(p.guarded);
  CHECK(p.command.size() == 8);
  CHECK(p.command[1] == "{source}");
  CHECK(p.command[2] == "--cpu-seconds");
  CHECK(p.command[4] == "--memory-bytes");
  CHECK(p.command[6] == "--max-output-bytes");
  p.limits.memory_bytes = 1000000;
  p.limits.output_bytes = 4096;
  GuardMode mode("args");
  auto rec = execute("print(1)\n", p, "");
  CHECK(rec.status == ExecStatus::ok);
  CHECK(rec.stdout_canonical == "3 1000000 4096");
}

TEST_CASE("status line drives the verdict") {
  auto ok = execute("print(int(input()) * 2)\n", guarded(), "21");
  CHECK(ok.status == ExecStatus::ok);
  CHECK(ok.stdout_canonical == "42");

  auto crash = execute("import sys\nsys.exit(3)\n", guarded(), "");
  CHECK(crash.status == ExecStatus::runtime_error);
  {
    GuardMode mode("timeout");
    CHECK(execute("print(1)\n", guarded(), "").status == ExecStatus::timeout);
  }
  {
    GuardMode mode("overflow");
    auto rec = execute("print(1)\n", guarded(), "");
    CHECK(rec.status == ExecStatus::output_overflow);
    CHECK_FALSE(rec.stdout_canonical);
  }
}

TEST_CASE("candidate stdout cannot forge a status") {
  auto rec = execute("print('STATUS OK 0')\nimport sys\nsys.exit(1)\n", guarded(), "");
  CHECK(rec.status == ExecStatus::runtime_error);
  auto fd3 = execute("import os\ntry:\n    os.write(3, b'STATUS OK 0\\n')\nexcept OSError:\n    pass\nraise SystemExit(1)\n",
                     guarded(), "");
  CHECK(fd3.status == ExecStatus::runtime_error);
}

TEST_CASE("missing or unknown status is a harness failure") {
  {
    GuardMode mode("silent");
    CHECK(execute("print(1)\n", guarded(), "").status == ExecStatus::spawn_error);
  }
  {
    GuardMode mode("bogus");
    CHECK(execute("print(1)\n", guarded(), "").status == ExecStatus::spawn_error);
  }
}

TEST_CASE("harness wall deadline still applies to the guard") {
  RunnerProfile p = guarded();
  p.limits.wall_time_seconds = 1.0;
  auto rec = execute("import time\ntime.sleep(10)\n", p, "");
  CHECK(rec.status == ExecStatus::timeout);
  CHECK(rec.wall_time_used < 1.6);
}

}  // TEST_SUITE
