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

// Runs candidate programs on test inputs under resource limits and
// captures canonicalized stdout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffg {

enum class IoMode { stdin_stdout, call_based };
enum class ExecStatus { ok, timeout, runtime_error, output_overflow, spawn_error };
enum class NormalizationMode { exact_canonical, token_float };

struct Limits {
  double wall_time_seconds = 2.0;
  std::int64_t memory_bytes = 256ll << 20;
  std::int64_t output_bytes = 1ll << 20;
};

// How to launch a program source file. `command` is an argv template; the
// placeholders {source}, {cpu_seconds}, {memory_bytes} and
// {max_output_bytes} are substituted per run.
struct RunnerProfile {
  std::string name = "python";
  std::vector<std::string> command{"python3", "{source}"};
  IoMode io_mode = IoMode::stdin_stdout;
  Limits limits;
  std::string source_suffix = ".py";
  // Function (or Solution method) invoked by the call-based driver.
  std::string call_entry = "solve";
  // When set, the command is a guard shim that reports "STATUS <tag> <exit>"
  // on fd 3 and enforces limits itself.
  bool guarded = false;
};

// Built-in profiles: "python", "python-fast" (isolated, no site
// packages), "sh".
std::optional<RunnerProfile> runner_preset(std::string_view name);

// Rewrites `profile` so that programs run under the guard shim at
// `guard_path`.
RunnerProfile with_guard(RunnerProfile profile, const std::string& guard_path);

std::optional<std::string> validate_profile(const RunnerProfile& profile);

struct ExecutionRecord {
  std::string problem_id;
  std::int64_t sample_index = 0;
  std::int64_t case_index = 0;
  ExecStatus status = ExecStatus::spawn_error;
  std::optional<std::string> stdout_canonical;  // present iff status == ok
  double wall_time_used = 0.0;
  // Carried so a records file is self-describing for voting and scoring.
  std::string input;
  std::string model_tag;
};

// Same cell and same outcome; wall time is ignored.
bool same_outcome(const ExecutionRecord& a, const ExecutionRecord& b);

struct NormalizationPolicy {
  NormalizationMode mode = NormalizationMode::exact_canonical;
  double float_tolerance = 1e-6;
};

std::optional<std::string> validate_normalization(const NormalizationPolicy& policy);

// CRLF -> LF, trailing whitespace stripped per line, trailing blank lines
// dropped. Identical for both modes; token_float only changes comparison.
std::string normalize_output(std::string_view raw, const NormalizationPolicy& policy = {});

// Equality of two canonical outputs under the policy.
bool outputs_equal(std::string_view a, std::string_view b, const NormalizationPolicy& policy);

// Canonical form of a test input: CRLF -> LF, trailing whitespace per line
// and trailing blank lines removed.
std::string canonical_input(std::string_view raw);

std::string to_string(ExecStatus status);
std::optional<ExecStatus> parse_exec_status(std::string_view s);

// Runs `program` once on `input`. Candidate failures are statuses;
// spawn_error means the harness could not launch the runner.
ExecutionRecord execute(std::string_view program, const RunnerProfile& profile,
                        std::string_view input);

// One row of execute_matrix. A missing source yields runtime_error cells
// without launching anything.
struct ProgramRef {
  std::string problem_id;
  std::int64_t sample_index = 0;
  std::string model_tag;
  std::optional<std::string> source;
};

class ExecutionGrid {
 public:
  ExecutionGrid() = default;
  ExecutionGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ExecutionRecord& at(std::size_t row, std::size_t col) { return cells_[row * cols_ + col]; }
  const ExecutionRecord& at(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }
  // Records of one input across every program, in row order.
  std::vector<ExecutionRecord> column(std::size_t col) const;
  std::vector<ExecutionRecord> row(std::size_t r) const;
  const std::vector<ExecutionRecord>& cells() const { return cells_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExecutionRecord> cells_;
};

struct MatrixOptions {
  std::size_t parallelism = 1;
  // Abort once more than this many cells end in spawn_error.
  std::size_t spawn_failure_budget = 0;
};

// Executes every (program, input) cell on a bounded worker pool. The
// resulting grid does not depend on scheduling or parallelism.
ExecutionGrid execute_matrix(const std::vector<ProgramRef>& programs,
                             const std::vector<std::string>& inputs,
                             const RunnerProfile& profile, const MatrixOptions& options);

}  // namespace ffg
