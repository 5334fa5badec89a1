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

// Pluggable sources of solutions, prefix completions and synthesized test
// inputs: a chat-completions provider, a replay file, or a seeded mock.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffg/answer.hpp"
#include "ffg/model.hpp"

namespace ffg {

struct PromptTemplate {
  std::string name;
  std::string text;      // placeholders {problem} and {prefix}
  std::string preamble;  // optional few-shot block placed before the text

  std::string render(std::string_view problem, std::string_view prefix = {}) const;
};

std::optional<std::string> validate_template(const PromptTemplate& t, bool needs_prefix = false);

// Reads <dir>/<name>.txt and, if present, <dir>/<name>.preamble.txt.
PromptTemplate load_template(const std::filesystem::path& dir, const std::string& name);

struct TemplateSet {
  PromptTemplate math_solution;
  PromptTemplate code_solution;
  PromptTemplate completion;
  PromptTemplate test_inputs;
};

// Loads math_solution, code_solution, completion and test_inputs.
TemplateSet load_templates(const std::filesystem::path& dir);

// Directory of the templates shipped with the project.
std::filesystem::path default_template_dir();

// Backends return raw response texts; ingestion (payload extraction,
// indexing, concatenation) is shared and lives in the free functions below.
class Backend {
 public:
  virtual ~Backend() = default;
  // Identity recorded as model_tag on every sample.
  virtual std::string tag() const = 0;
  virtual std::vector<std::string> solve(const Problem& problem, std::int64_t n,
                                         const Decoding& decoding) = 0;
  // Continuations of `prefix`; the prefix itself is not repeated.
  virtual std::vector<std::string> complete(const Problem& problem, const SolutionPrefix& prefix,
                                            std::int64_t m, const Decoding& decoding) = 0;
  virtual std::string propose_inputs(const Problem& problem, std::int64_t k,
                                     const PromptTemplate& tmpl) = 0;
};

struct ProviderConfig {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model;
  std::string api_key;
  std::string tag;       // defaults to the model name
  int attempts = 3;
  double backoff_seconds = 0.5;
  double timeout_seconds = 120;
  std::size_t in_flight = 4;
  TemplateSet templates;
};

// Fills base_url and api_key from PROVIDER_BASE_URL / PROVIDER_API_KEY when
// unset; throws ValidationError when auth is still missing.
ProviderConfig provider_from_env(ProviderConfig config);

// OpenAI-compatible chat-completions client. Each sample is its own
// request with seed = decoding.seed + index, so retries are idempotent.
class ProviderBackend : public Backend {
 public:
  explicit ProviderBackend(ProviderConfig config);
  std::string tag() const override;
  std::vector<std::string> solve(const Problem& problem, std::int64_t n,
                                 const Decoding& decoding) override;
  std::vector<std::string> complete(const Problem& problem, const SolutionPrefix& prefix,
                                    std::int64_t m, const Decoding& decoding) override;
  std::string propose_inputs(const Problem& problem, std::int64_t k,
                             const PromptTemplate& tmpl) override;

 private:
  std::string chat(const std::string& prompt, const Decoding& decoding);
  std::vector<std::string> chat_many(const std::string& prompt, std::int64_t n,
                                     const Decoding& decoding);
  ProviderConfig config_;
};

// Serves recorded responses from a solutions.jsonl-shaped file. Entries may
// carry "request": "solve" (default), "complete" or "inputs"; each
// (problem_id, request) pair has its own cursor advancing in file order.
class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(const std::filesystem::path& path, std::string tag = "replay");
  std::string tag() const override { return tag_; }
  std::vector<std::string> solve(const Problem& problem, std::int64_t n,
                                 const Decoding& decoding) override;
  std::vector<std::string> complete(const Problem& problem, const SolutionPrefix& prefix,
                                    std::int64_t m, const Decoding& decoding) override;
  std::string propose_inputs(const Problem& problem, std::int64_t k,
                             const PromptTemplate& tmpl) override;

 private:
  std::vector<std::string> take(const std::string& problem_id, const std::string& request,
                                std::int64_t n);
  std::string tag_;
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> entries_;
  std::map<std::pair<std::string, std::string>, std::size_t> cursor_;
};

// Deterministic synthetic model. Output depends only on the seed and the
// request (problem, prefix, index, decoding seed), never on call order.
//
// Script format (JSON):
//   {"default": {"accuracy": 0.7, "steps": 4},
//    "problems": {"<id>": {"answer": "12", "wrong_answers": ["11"],
//                          "accuracy": 0.6, "steps": 5,
//                          "correct_program": "...", "wrong_programs": ["..."],
//                          "inputs": ["1 2"], "inputs_response": "raw text"}}}
class MockBackend : public Backend {
 public:
  MockBackend(std::uint64_t seed, nlohmann::json script, std::string tag = "mock");
  std::string tag() const override { return tag_; }
  std::vector<std::string> solve(const Problem& problem, std::int64_t n,
                                 const Decoding& decoding) override;
  std::vector<std::string> complete(const Problem& problem, const SolutionPrefix& prefix,
                                    std::int64_t m, const Decoding& decoding) override;
  std::string propose_inputs(const Problem& problem, std::int64_t k,
                             const PromptTemplate& tmpl) override;

 private:
  struct Behavior {
    double accuracy = 0.7;
    std::int64_t steps = 4;
    std::optional<std::string> answer;
    std::vector<std::string> wrong_answers;
    std::optional<std::string> correct_program;
    std::vector<std::string> wrong_programs;
    std::vector<std::string> inputs;
    std::optional<std::string> inputs_response;
  };
  Behavior behavior(const std::string& problem_id) const;
  std::string make_solution(const Problem& problem, const Behavior& b, std::uint64_t key) const;
  std::string make_completion(const Problem& problem, const Behavior& b,
                              const SolutionPrefix& prefix, std::uint64_t key) const;
  std::uint64_t seed_;
  nlohmann::json script_;
  std::string tag_;
};

// Last fenced code block of a response; nullopt when there is none.
std::optional<std::string> extract_code_block(std::string_view text);

// Payload for `text`: the program for code problems, the answer for math.
std::optional<std::string> extract_payload(const Problem& problem, std::string_view text,
                                           const ExtractionPolicy& extraction);

// n solutions with sample_index 0..n-1 in request order.
std::vector<CandidateSolution> sample_solutions(const Problem& problem, std::int64_t n,
                                                const Decoding& decoding, Backend& backend,
                                                const ExtractionPolicy& extraction);

// m completions, each stored as prefix + continuation with its payload
// extracted from the concatenation.
std::vector<CandidateSolution> sample_completions(const Problem& problem,
                                                  const SolutionPrefix& prefix, std::int64_t m,
                                                  const Decoding& decoding, Backend& backend,
                                                  const ExtractionPolicy& extraction);

struct GeneratedInputs {
  std::string problem_id;
  std::vector<std::string> inputs;  // distinct canonical inputs, at most k
  bool empty = false;               // nothing usable: exclude the problem
};

// Accepts a JSON array of strings (bare or inside one fenced block) or one
// input per fenced block.
std::vector<std::string> parse_input_response(std::string_view response);

GeneratedInputs generate_test_inputs(const Problem& problem, std::int64_t k, Backend& backend,
                                     const PromptTemplate& tmpl);

}  // namespace ffg
