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

#include "ffg/sampler.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>

#include "ffg/codec.hpp"
#include "ffg/digest.hpp"
#include "ffg/errors.hpp"
#include "ffg/exec.hpp"
#include "ffg/pairs.hpp"
#include "ffg/parallel.hpp"

namespace ffg {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Splits "https://host:port/v1" into ("https://host:port", "/v1").
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme = url.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string path = url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, slash), path};
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    lines.emplace_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

bool is_fence(const std::string& line) {
  auto b = line.find_first_not_of(" \t");
  return b != std::string::npos && line.compare(b, 3, "```") == 0;
}

// Contents of every fenced block, pairing fences in order.
std::vector<std::string> fenced_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  auto lines = split_lines(text);
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_fence(lines[i])) continue;
    if (!open) {
      open = i;
      continue;
    }
    std::string body;
    for (std::size_t j = *open + 1; j < i; ++j) {
      if (j > *open + 1) body.push_back('\n');
      body += lines[j];
    }
    blocks.push_back(std::move(body));
    open.reset();
  }
  return blocks;
}

std::optional<std::vector<std::string>> json_string_array(std::string_view text) {
  auto j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& item : j)
    if (item.is_string()) out.push_back(item.get<std::string>());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- templates

std::string PromptTemplate::render(std::string_view problem, std::string_view prefix) const {
  std::string body = replace_all(replace_all(text, "{problem}", problem), "{prefix}", prefix);
  if (preamble.empty()) return body;
  return preamble + "\n\n" + body;
}

std::optional<std::string> validate_template(const PromptTemplate& t, bool needs_prefix) {
  if (t.text.find("{problem}") == std::string::npos)
    return "template " + t.name + " lacks the {problem} placeholder";
  if (needs_prefix && t.text.find("{prefix}") == std::string::npos)
    return "template " + t.name + " lacks the {prefix} placeholder";
  return std::nullopt;
}

PromptTemplate load_template(const fs::path& dir, const std::string& name) {
  PromptTemplate t;
  t.name = name;
  t.text = read_file(dir / (name + ".txt"));
  if (fs::exists(dir / (name + ".preamble.txt"))) t.preamble = read_file(dir / (name + ".preamble.txt"));
  return t;
}

TemplateSet load_templates(const fs::path& dir) {
  TemplateSet set{load_template(dir, "math_solution"), load_template(dir, "code_solution"),
                  load_template(dir, "completion"), load_template(dir, "test_inputs")};
  for (const auto* t : {&set.math_solution, &set.code_solution, &set.test_inputs})
    if (auto err = validate_template(*t)) throw ValidationError("bad_template", t->name, *err);
  if (auto err = validate_template(set.completion, true))
    throw ValidationError("bad_template", set.completion.name, *err);
  return set;
}

fs::path default_template_dir() {
#ifdef FFG_TEMPLATE_DIR
  return FFG_TEMPLATE_DIR;
#else
  return "templates";
#endif
}

// ---------------------------------------------------------------- provider

ProviderConfig provider_from_env(ProviderConfig config) {
  if (config.base_url.empty())
    if (const char* url = std::getenv("PROVIDER_BASE_URL")) config.base_url = url;
  if (config.api_key.empty())
    if (const char* key = std::getenv("PROVIDER_API_KEY")) config.api_key = key;
  if (config.api_key.empty())
    throw ValidationError("missing_auth", "backend.api_key", "provider backend requires PROVIDER_API_KEY");
  if (config.base_url.empty())
    throw ValidationError("missing_base_url", "backend.base_url", "provider backend requires a base URL");
  if (config.model.empty())
    throw ValidationError("missing_model", "backend.model", "provider backend requires a model name");
  return config;
}

ProviderBackend::ProviderBackend(ProviderConfig config) : config_(std::move(config)) {
  if (config_.attempts < 1) config_.attempts = 1;
}

std::string ProviderBackend::tag() const { return config_.tag.empty() ? config_.model : config_.tag; }

std::string ProviderBackend::chat(const std::string& prompt, const Decoding& decoding) {
  auto [origin, prefix] = split_url(config_.base_url);
  Json body = {{"model", config_.model},
               {"messages", Json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", decoding.temperature},
               {"seed", decoding.seed},
               {"max_tokens", decoding.max_tokens}};
  const std::string payload = body.dump();
  httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};

  std::string last_error;
  for (int attempt = 0; attempt < config_.attempts; ++attempt) {
    if (attempt > 0) {
      auto delay = config_.backoff_seconds * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    httplib::Client client(origin);
    auto secs = std::chrono::duration<double>(config_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    auto res = client.Post(prefix + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw ProviderError("provider rejected request: HTTP " + std::to_string(res->status));
    auto j = Json::parse(res->body, nullptr, false);
    try {
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception&) {
      throw ProviderError("malformed provider response");
    }
  }
  throw ProviderError("provider failed after " + std::to_string(config_.attempts) +
                      " attempts: " + last_error);
}

std::vector<std::string> ProviderBackend::chat_many(const std::string& prompt, std::int64_t n,
                                                    const Decoding& decoding) {
  std::vector<std::string> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), config_.in_flight, [&](std::size_t i) {
    Decoding d = decoding;
    d.seed = decoding.seed + i;
    out[i] = chat(prompt, d);
  });
  return out;
}

std::vector<std::string> ProviderBackend::solve(const Problem& problem, std::int64_t n,
                                                const Decoding& decoding) {
  const auto& tmpl = problem.kind == ProblemKind::code ? config_.templates.code_solution
                                                       : config_.templates.math_solution;
  return chat_many(tmpl.render(problem.prompt), n, decoding);
}

std::vector<std::string> ProviderBackend::complete(const Problem& problem, const SolutionPrefix& prefix,
                                                   std::int64_t m, const Decoding& decoding) {
  return chat_many(config_.templates.completion.render(problem.prompt, prefix.text), m, decoding);
}

std::string ProviderBackend::propose_inputs(const Problem& problem, std::int64_t k,
                                            const PromptTemplate& tmpl) {
  Decoding d;
  d.temperature = 0.0;
  return chat(replace_all(tmpl.render(problem.prompt), "{k}", std::to_string(k)), d);
}

// ---------------------------------------------------------------- replay

ReplayBackend::ReplayBackend(const fs::path& path, std::string tag) : tag_(std::move(tag)) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open replay file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("problem_id") || !j.contains("text") ||
        !j["problem_id"].is_string() || !j["text"].is_string())
      throw ValidationError("decode_error", path.filename().string() + ":" + std::to_string(lineno),
                            "replay entry needs string problem_id and text");
    std::string request = j.value("request", std::string("solve"));
    entries_[{j["problem_id"].get<std::string>(), request}].push_back(j["text"].get<std::string>());
  }
}

std::vector<std::string> ReplayBackend::take(const std::string& problem_id, const std::string& request,
                                             std::int64_t n) {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(problem_id, request);
  const auto& list = entries_[key];
  std::size_t& cur = cursor_[key];
  if (cur + static_cast<std::size_t>(n) > list.size())
    throw ReplayExhaustedError("replay has " + std::to_string(list.size() - cur) + " " + request +
                               " entries left for " + problem_id + ", " + std::to_string(n) +
                               " requested");
  std::vector<std::string> out(list.begin() + static_cast<std::ptrdiff_t>(cur),
                               list.begin() + static_cast<std::ptrdiff_t>(cur + n));
  cur += static_cast<std::size_t>(n);
  return out;
}

std::vector<std::string> ReplayBackend::solve(const Problem& problem, std::int64_t n, const Decoding&) {
  return take(problem.id, "solve", n);
}

std::vector<std::string> ReplayBackend::complete(const Problem& problem, const SolutionPrefix&,
                                                 std::int64_t m, const Decoding&) {
  return take(problem.id, "complete", m);
}

std::string ReplayBackend::propose_inputs(const Problem& problem, std::int64_t, const PromptTemplate&) {
  return take(problem.id, "inputs", 1).front();
}

// ---------------------------------------------------------------- mock

MockBackend::MockBackend(std::uint64_t seed, Json script, std::string tag)
    : seed_(seed), script_(std::move(script)), tag_(std::move(tag)) {
  if (script_.is_null()) script_ = Json::object();
  if (!script_.is_object()) throw ValidationError("bad_script", "mock", "mock script must be an object");
}

MockBackend::Behavior MockBackend::behavior(const std::string& problem_id) const {
  Behavior b;
  auto apply = [&b](const Json& j) {
    if (!j.is_object()) return;
    if (j.contains("accuracy")) b.accuracy = j["accuracy"].get<double>();
    if (j.contains("steps")) b.steps = std::max<std::int64_t>(1, j["steps"].get<std::int64_t>());
    if (j.contains("answer")) b.answer = j["answer"].get<std::string>();
    if (j.contains("wrong_answers")) b.wrong_answers = j["wrong_answers"].get<std::vector<std::string>>();
    if (j.contains("correct_program")) b.correct_program = j["correct_program"].get<std::string>();
    if (j.contains("wrong_programs")) b.wrong_programs = j["wrong_programs"].get<std::vector<std::string>>();
    if (j.contains("inputs")) b.inputs = j["inputs"].get<std::vector<std::string>>();
    if (j.contains("inputs_response")) b.inputs_response = j["inputs_response"].get<std::string>();
  };
  try {
    if (script_.contains("default")) apply(script_["default"]);
    if (script_.contains("problems") && script_["problems"].contains(problem_id))
      apply(script_["problems"][problem_id]);
  } catch (const Json::exception& e) {
    throw ValidationError("bad_script", "mock.problems." + problem_id, e.what());
  }
  return b;
}

namespace {

std::string wrong_answer(const std::string& answer, const std::vector<std::string>& wrong,
                         std::mt19937_64& rng) {
  if (!wrong.empty()) return wrong[pick(rng, wrong.size())];
  if (auto v = Rational::parse(answer)) return (*v + Rational(1 + static_cast<std::int64_t>(pick(rng, 4)))).str();
  return answer + "'";
}

constexpr std::string_view kSlip = "a careless slip";

}  // namespace

std::string MockBackend::make_solution(const Problem& problem, const Behavior& b, std::uint64_t key) const {
  std::mt19937_64 rng(key);
  const bool correct = unit(rng) < b.accuracy;
  if (problem.kind == ProblemKind::code) {
    std::string program = correct && b.correct_program ? *b.correct_program
                          : !b.wrong_programs.empty()  ? b.wrong_programs[pick(rng, b.wrong_programs.size())]
                                                       : std::string("raise SystemExit(1)");
    return "Read the input and compute the result.\n```python\n" + program + "\n```\n";
  }
  if (!b.answer) return "I am not sure how to solve this.\n";
  const std::size_t slip = correct ? 0 : 1 + pick(rng, static_cast<std::size_t>(b.steps));
  std::string text;
  for (std::int64_t i = 1; i <= b.steps; ++i) {
    text += "Step " + std::to_string(i) + ": ";
    text += static_cast<std::size_t>(i) == slip ? std::string(kSlip) : "work through the problem";
    text += ".\n";
  }
  const std::string answer = correct ? *b.answer : wrong_answer(*b.answer, b.wrong_answers, rng);
  return text + "The answer is \\boxed{" + answer + "}.\n";
}

std::string MockBackend::make_completion(const Problem& problem, const Behavior& b,
                                         const SolutionPrefix& prefix, std::uint64_t key) const {
  std::mt19937_64 rng(key);
  // A prefix carrying a slip steers completions toward wrong answers.
  const bool slipped = prefix.text.find(kSlip) != std::string::npos;
  const double p = slipped ? b.accuracy / 4 : b.accuracy;
  const bool correct = unit(rng) < p;
  if (problem.kind == ProblemKind::code) {
    std::string program = correct && b.correct_program ? *b.correct_program
                          : !b.wrong_programs.empty()  ? b.wrong_programs[pick(rng, b.wrong_programs.size())]
                                                       : std::string("raise SystemExit(1)");
    return "```python\n" + program + "\n```\n";
  }
  if (!b.answer) return "I am not sure.\n";
  std::string text;
  for (std::int64_t i = prefix.step_count + 1; i <= b.steps; ++i)
    text += "Step " + std::to_string(i) + ": continue the work.\n";
  const std::string answer = correct ? *b.answer : wrong_answer(*b.answer, b.wrong_answers, rng);
  return text + "The answer is \\boxed{" + answer + "}.\n";
}

std::vector<std::string> MockBackend::solve(const Problem& problem, std::int64_t n,
                                            const Decoding& decoding) {
  const Behavior b = behavior(problem.id);
  std::vector<std::string> out;
  for (std::int64_t i = 0; i < n; ++i) {
    auto key = stable_hash(problem.id + "|solve|" + std::to_string(i) + "|" +
                               std::to_string(decoding.seed),
                           seed_);
    out.push_back(make_solution(problem, b, key));
  }
  return out;
}

std::vector<std::string> MockBackend::complete(const Problem& problem, const SolutionPrefix& prefix,
                                               std::int64_t m, const Decoding& decoding) {
  const Behavior b = behavior(problem.id);
  std::vector<std::string> out;
  for (std::int64_t i = 0; i < m; ++i) {
    auto key = stable_hash(problem.id + "|complete|" + prefix.text + "|" +
                               std::to_string(prefix.parent_sample_index) + "|" + std::to_string(i) +
                               "|" + std::to_string(decoding.seed),
                           seed_);
    out.push_back(make_completion(problem, b, prefix, key));
  }
  return out;
}

std::string MockBackend::propose_inputs(const Problem& problem, std::int64_t, const PromptTemplate&) {
  const Behavior b = behavior(problem.id);
  if (b.inputs_response) return *b.inputs_response;
  return Json(b.inputs).dump();
}

// ---------------------------------------------------------------- ingestion

std::optional<std::string> extract_code_block(std::string_view text) {
  auto lines = split_lines(text);
  std::optional<std::size_t> close;
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (!is_fence(lines[i])) continue;
    if (!close) {
      close = i;
      continue;
    }
    std::string body;
    for (std::size_t j = i + 1; j < *close; ++j) {
      if (j > i + 1) body.push_back('\n');
      body += lines[j];
    }
    return body;
  }
  return std::nullopt;
}

std::optional<std::string> extract_payload(const Problem& problem, std::string_view text,
                                           const ExtractionPolicy& extraction) {
  if (problem.kind == ProblemKind::code) {
    auto code = extract_code_block(text);
    if (code && code->find_first_not_of(" \t\n") == std::string::npos) return std::nullopt;
    return code;
  }
  return extract_answer(text, extraction);
}

std::vector<CandidateSolution> sample_solutions(const Problem& problem, std::int64_t n,
                                                const Decoding& decoding, Backend& backend,
                                                const ExtractionPolicy& extraction) {
  if (n < 1) throw ValidationError("bad_count", "n", "need at least one sample");
  auto texts = backend.solve(problem, n, decoding);
  std::vector<CandidateSolution> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CandidateSolution s;
    s.problem_id = problem.id;
    s.sample_index = static_cast<std::int64_t>(i);
    s.payload = extract_payload(problem, texts[i], extraction);
    s.text = std::move(texts[i]);
    s.model_tag = backend.tag();
    s.decoding = decoding;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CandidateSolution> sample_completions(const Problem& problem,
                                                  const SolutionPrefix& prefix, std::int64_t m,
                                                  const Decoding& decoding, Backend& backend,
                                                  const ExtractionPolicy& extraction) {
  if (m < 1) throw ValidationError("bad_count", "m", "need at least one completion");
  auto texts = backend.complete(problem, prefix, m, decoding);
  std::vector<CandidateSolution> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CandidateSolution s;
    s.problem_id = problem.id;
    s.sample_index = static_cast<std::int64_t>(i);
    s.text = concat_completion(prefix.text, texts[i]);
    s.payload = extract_payload(problem, s.text, extraction);
    s.model_tag = backend.tag();
    s.decoding = decoding;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> parse_input_response(std::string_view response) {
  std::vector<std::string> raw;
  auto blocks = fenced_blocks(response);
  if (blocks.size() == 1) {
    if (auto arr = json_string_array(blocks.front())) raw = std::move(*arr);
    else raw = blocks;
  } else if (!blocks.empty()) {
    raw = std::move(blocks);
  } else if (auto arr = json_string_array(response)) {
    raw = std::move(*arr);
  }
  return raw;
}

GeneratedInputs generate_test_inputs(const Problem& problem, std::int64_t k, Backend& backend,
                                     const PromptTemplate& tmpl) {
  if (problem.kind != ProblemKind::code)
    throw ValidationError("wrong_kind", "kind", "test inputs are only generated for code problems");
  GeneratedInputs result;
  result.problem_id = problem.id;
  std::set<std::string> seen;
  for (const auto& item : parse_input_response(backend.propose_inputs(problem, k, tmpl))) {
    if (static_cast<std::int64_t>(result.inputs.size()) >= k) break;
    std::string canon = canonical_input(item);
    if (seen.insert(canon).second) result.inputs.push_back(std::move(canon));
  }
  result.empty = result.inputs.empty();
  return result;
}

}  // namespace ffg
