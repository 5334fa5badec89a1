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

// Round orchestration. Each stage is a function over in-memory artifacts;
// run_round chains the same functions the CLI subcommands call, so running
// the stages by hand reproduces a round byte for byte.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffg/config.hpp"
#include "ffg/exec.hpp"
#include "ffg/model.hpp"
#include "ffg/sampler.hpp"
#include "ffg/vote.hpp"

namespace ffg {

// Problems of this round: the whole set, or contiguous split number
// round_index out of num_splits in fresh mode.
std::vector<Problem> round_problems(const std::vector<Problem>& problems, const RoundConfig& config);

// n samples per problem, in problem order. Each problem's decoding seed is
// derived from `base_seed` and its id.
std::vector<CandidateSolution> stage_sample(const std::vector<Problem>& problems, std::int64_t n,
                                            Decoding decoding, std::uint64_t base_seed,
                                            Backend& backend, const ExtractionPolicy& extraction,
                                            std::size_t parallelism = 1);

// Inputs for every code problem; math problems are skipped.
std::vector<GeneratedInputs> stage_gen_inputs(const std::vector<Problem>& problems, std::int64_t k,
                                              Backend& backend, const PromptTemplate& tmpl,
                                              std::size_t parallelism = 1);

// Executes each solution on its problem's inputs. Records come out
// problem by problem, row-major (solution, then input).
std::vector<ExecutionRecord> stage_exec(const std::vector<CandidateSolution>& solutions,
                                        const std::map<std::string, std::vector<std::string>>& inputs,
                                        const RunnerProfile& profile, const MatrixOptions& options);

struct Exclusion {
  std::string problem_id;
  std::string reason;
};

struct VoteStageResult {
  std::vector<TestSuite> suites;
  std::vector<Exclusion> excluded;
  std::vector<VoteAudit> audit;
};

struct VoteStageOptions {
  VotePolicy policy;
  std::optional<std::string> pool_tag;  // only records with this model_tag vote
  std::string frontier_tag = "frontier";
  std::optional<std::int64_t> max_pool;  // only sample_index < max_pool vote
};

// Pseudo suites from execution records (code problems).
VoteStageResult stage_vote(const std::vector<ExecutionRecord>& records, const VoteStageOptions& options);

// Single-case pseudo suites from the majority answer (math problems).
VoteStageResult stage_label(const std::vector<CandidateSolution>& solutions,
                            const VoteStageOptions& options);

// Gold suites of the given problems; problems without one are excluded.
VoteStageResult stage_gold(const std::vector<Problem>& problems);

// Scores every solution whose problem has a suite. Code solutions are
// scored from their records; math solutions from their extracted answers.
std::vector<FeedbackScore> stage_verify(const std::vector<Problem>& problems,
                                        const std::vector<CandidateSolution>& solutions,
                                        const std::vector<TestSuite>& suites,
                                        const std::vector<ExecutionRecord>& records,
                                        const NormalizationPolicy& normalization,
                                        const ExtractionPolicy& extraction);

std::vector<PreferencePair> stage_pairs(const std::vector<FeedbackScore>& scores,
                                        const std::vector<CandidateSolution>& solutions,
                                        const PairPolicy& policy);

struct PrefixStageResult {
  std::vector<SolutionPrefix> prefixes;
  std::vector<PreferencePair> pairs;
};

// Samples prefixes of every solution with a suite, completes each one
// `policy.completions` times, scores the concatenations and builds
// process pairs.
PrefixStageResult stage_prefix_pairs(const std::vector<Problem>& problems,
                                     const std::vector<CandidateSolution>& solutions,
                                     const std::vector<TestSuite>& suites, Backend& backend,
                                     const RoundConfig& config);

// Writes pairs.jsonl lines with the run digest attached (omitted when
// empty).
void write_pairs(const std::filesystem::path& path, const std::vector<PreferencePair>& pairs,
                 const std::string& run_digest);

struct RoundResult {
  std::filesystem::path run_dir;
  RunManifest manifest;
  std::vector<Exclusion> excluded;
  std::size_t pair_count = 0;
};

// Runs one round into <out_dir>/<round_index>/. On failure the partial
// artifacts stay in place next to a FAILED marker and the error is
// rethrown.
RoundResult run_round(const RoundConfig& config);

// Digest of the configuration snapshot and input digests.
std::string run_digest(const RunManifest& manifest);

// Recomputes every digest a manifest lists; returns the mismatching names.
std::vector<std::string> verify_manifest(const std::filesystem::path& run_dir);

// Timestamp for manifests; SOURCE_DATE_EPOCH wins over the clock.
std::string timestamp_now();

}  // namespace ffg
