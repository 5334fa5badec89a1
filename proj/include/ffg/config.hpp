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

// Round configuration: an INI file with sections [run], [sampling],
// [vote], [pairs], [prefix], [exec], [backend], [dpo] and [answer].
// Named presets fill in the published hyper-parameter rows; explicit keys
// override them. Every effective value is kept as text so the manifest
// records it exactly as written.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffg/answer.hpp"
#include "ffg/exec.hpp"
#include "ffg/pairs.hpp"
#include "ffg/sampler.hpp"
#include "ffg/vote.hpp"

namespace ffg {

enum class FeedbackSource { frontier, self, gold };
enum class PromptSource { fixed, fresh };

std::string to_string(FeedbackSource source);
std::optional<FeedbackSource> parse_feedback_source(std::string_view s);

enum class BackendKind { mock, replay, provider };

struct BackendSpec {
  BackendKind kind = BackendKind::mock;
  std::filesystem::path path;    // replay file
  std::filesystem::path script;  // mock script (JSON)
  std::uint64_t seed = 0;
  std::string model;
  std::string base_url;
  std::string tag;
};

struct RoundConfig {
  std::int64_t round_index = 0;
  std::filesystem::path problems;
  std::filesystem::path out_dir = "runs";
  std::uint64_t seed = 0;
  PromptSource prompt_source = PromptSource::fixed;
  std::int64_t num_splits = 1;
  // Feedback source per round; the last entry repeats for later rounds.
  std::vector<FeedbackSource> feedback_order{FeedbackSource::frontier, FeedbackSource::self};
  std::optional<FeedbackSource> feedback;  // overrides the order when set
  bool outcome_pairs = true;
  bool process_pairs = false;
  std::size_t parallelism = 4;

  std::int64_t k_sc = 16;
  std::int64_t k_dpo = 8;
  std::int64_t num_inputs = 10;
  Decoding decoding;
  std::filesystem::path template_dir;

  VotePolicy vote;
  PairPolicy pairs;
  PrefixPolicy prefix;
  DpoHyper dpo;
  ExtractionPolicy extraction;

  RunnerProfile runner;
  NormalizationPolicy normalization;
  std::size_t spawn_failure_budget = 0;

  BackendSpec policy_backend;
  BackendSpec frontier_backend;
  std::optional<BackendSpec> inputs_backend;  // defaults to the frontier

  // "section.key" -> value text, defaults included.
  std::map<std::string, std::string> effective;
};

// Preset rows; each maps "section.key" to value text.
std::vector<std::string> preset_names();
std::optional<std::map<std::string, std::string>> preset_values(std::string_view name);

// Defaults, then the preset named by run.preset, then `values`.
// Relative paths resolve against `base_dir`.
RoundConfig config_from_values(const std::map<std::string, std::string>& values,
                               const std::filesystem::path& base_dir = {});

// Reads an INI file; `overrides` ("section.key" -> text) win over it.
RoundConfig load_config(const std::filesystem::path& file,
                        const std::map<std::string, std::string>& overrides = {});

FeedbackSource feedback_for_round(const RoundConfig& config);

// Seed for a named stream, derived from the root seed and round index.
std::uint64_t derive_seed(const RoundConfig& config, std::string_view stream);

std::unique_ptr<Backend> make_backend(const BackendSpec& spec, const RoundConfig& config);

MatrixOptions matrix_options(const RoundConfig& config);

}  // namespace ffg
