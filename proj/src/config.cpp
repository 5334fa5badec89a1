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

#include "ffg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ffg/codec.hpp"
#include "ffg/digest.hpp"
#include "ffg/errors.hpp"

namespace ffg {
namespace {

namespace fs = std::filesystem;

using Values = std::map<std::string, std::string>;

const Values& defaults() {
  static const Values d = {
      {"run.round_index", "0"},
      {"run.problems", ""},
      {"run.out_dir", "runs"},
      {"run.preset", ""},
      {"run.seed", "0"},
      {"run.prompt_source", "fixed"},
      {"run.num_splits", "1"},
      {"run.feedback_order", "frontier,self"},
      {"run.feedback", ""},
      {"run.outcome_pairs", "true"},
      {"run.process_pairs", "false"},
      {"run.parallelism", "4"},
      {"sampling.k_sc", "16"},
      {"sampling.k_dpo", "8"},
      {"sampling.num_inputs", "10"},
      {"sampling.temperature", "0.8"},
      {"sampling.max_tokens", "2048"},
      {"sampling.templates", ""},
      {"vote.tie_policy", "discard_input"},
      {"vote.min_pool", "3"},
      {"pairs.epsilon", "1"},
      {"pairs.sigma", "0"},
      {"pairs.max_pairs_per_problem", "unlimited"},
      {"pairs.dedupe", "false"},
      {"prefix.mode", "ratio"},
      {"prefix.ratio", "0.30"},
      {"prefix.fixed_count", "10"},
      {"prefix.completions", "3"},
      {"exec.runner", "python"},
      {"exec.guard", ""},
      {"exec.io_mode", "stdin_stdout"},
      {"exec.wall_time_seconds", "2"},
      {"exec.memory_bytes", "268435456"},
      {"exec.output_bytes", "1048576"},
      {"exec.normalization", "exact_canonical"},
      {"exec.float_tolerance", "1e-6"},
      {"exec.spawn_failure_budget", "0"},
      {"dpo.beta", "0.1"},
      {"dpo.alpha", "0"},
      {"answer.extraction", "boxed-first"},
      {"answer.strict", ""},
      {"backend.policy_kind", "mock"},
      {"backend.policy_path", ""},
      {"backend.policy_script", ""},
      {"backend.policy_seed", ""},
      {"backend.policy_model", ""},
      {"backend.policy_base_url", ""},
      {"backend.policy_tag", "policy"},
      {"backend.frontier_kind", "mock"},
      {"backend.frontier_path", ""},
      {"backend.frontier_script", ""},
      {"backend.frontier_seed", ""},
      {"backend.frontier_model", ""},
      {"backend.frontier_base_url", ""},
      {"backend.frontier_tag", "frontier"},
      {"backend.inputs_kind", ""},
      {"backend.inputs_path", ""},
      {"backend.inputs_script", ""},
      {"backend.inputs_seed", ""},
      {"backend.inputs_model", ""},
      {"backend.inputs_base_url", ""},
      {"backend.inputs_tag", "inputs"},
  };
  return d;
}

const std::map<std::string, Values, std::less<>>& presets() {
  static const std::map<std::string, Values, std::less<>> p = {
      {"math-dpo",
       {{"run.feedback", "frontier"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"dpo.beta", "0.5"}, {"dpo.alpha", "0.2"}, {"pairs.epsilon", "1.0"}, {"pairs.sigma", "0.0"},
        {"run.outcome_pairs", "true"}, {"run.process_pairs", "false"}}},
      {"math-pdpo",
       {{"run.feedback", "frontier"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"prefix.mode", "fixed"}, {"prefix.fixed_count", "10"}, {"prefix.completions", "3"},
        {"dpo.beta", "0.5"}, {"dpo.alpha", "0.2"}, {"pairs.epsilon", "1/3"}, {"pairs.sigma", "0.0"},
        {"run.outcome_pairs", "true"}, {"run.process_pairs", "true"}}},
      {"math-pdpo-sc",
       {{"run.feedback", "self"}, {"sampling.k_sc", "16"}, {"sampling.k_dpo", "16"},
        {"prefix.mode", "fixed"}, {"prefix.fixed_count", "8"}, {"prefix.completions", "3"},
        {"dpo.beta", "0.5"}, {"dpo.alpha", "1.0"}, {"pairs.epsilon", "1/3"}, {"pairs.sigma", "0.0"},
        {"run.outcome_pairs", "true"}, {"run.process_pairs", "true"}}},
      {"code-dpo-gold",
       {{"run.feedback", "gold"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"dpo.beta", "0.1"}, {"dpo.alpha", "0.0"}, {"pairs.epsilon", "1.0"}, {"pairs.sigma", "0.0"},
        {"run.outcome_pairs", "true"}, {"run.process_pairs", "false"}}},
      {"code-pdpo-gold",
       {{"run.feedback", "gold"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"prefix.mode", "ratio"}, {"prefix.ratio", "30%"}, {"prefix.completions", "5"},
        {"dpo.beta", "0.1"}, {"dpo.alpha", "0.2"}, {"pairs.epsilon", "1/5"}, {"pairs.sigma", "0.0"},
        {"run.outcome_pairs", "false"}, {"run.process_pairs", "true"}}},
      {"code-dpo",
       {{"run.feedback", "self"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"dpo.beta", "0.1"}, {"dpo.alpha", "0.0"}, {"pairs.epsilon", "0.5"}, {"pairs.sigma", "0.6"},
        {"run.outcome_pairs", "true"}, {"run.process_pairs", "false"}}},
      {"code-pdpo",
       {{"run.feedback", "self"}, {"sampling.k_sc", "10"}, {"sampling.k_dpo", "10"},
        {"prefix.mode", "ratio"}, {"prefix.ratio", "30%"}, {"prefix.completions", "3"},
        {"dpo.beta", "0.1"}, {"dpo.alpha", "0.0"}, {"pairs.epsilon", "0.5"}, {"pairs.sigma", "0.4"},
        {"run.outcome_pairs", "false"}, {"run.process_pairs", "true"}}},
  };
  return p;
}

[[noreturn]] void bad(const std::string& key, const std::string& message) {
  throw ValidationError("bad_config", key, message);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    bad(key, "expected an integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double v = 0;
  if (!(in >> v) || !in.eof() || !std::isfinite(v)) bad(key, "expected a number, got '" + text + "'");
  return v;
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  bad(key, "expected a boolean, got '" + text + "'");
}

Rational parse_fraction(const std::string& key, const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) bad(key, "expected a fraction or decimal, got '" + text + "'");
  return *r;
}

fs::path resolve(const fs::path& base, const std::string& text) {
  if (text.empty()) return {};
  fs::path p(text);
  if (p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

BackendSpec parse_backend(const Values& v, const std::string& role, const fs::path& base,
                          std::uint64_t root_seed) {
  const std::string k = "backend." + role + "_";
  BackendSpec spec;
  const std::string& kind = v.at(k + "kind");
  if (kind == "mock") spec.kind = BackendKind::mock;
  else if (kind == "replay") spec.kind = BackendKind::replay;
  else if (kind == "provider") spec.kind = BackendKind::provider;
  else bad(k + "kind", "unknown backend kind '" + kind + "'");
  spec.path = resolve(base, v.at(k + "path"));
  spec.script = resolve(base, v.at(k + "script"));
  spec.seed = v.at(k + "seed").empty() ? stable_hash(role, root_seed)
                                        : parse_integer<std::uint64_t>(k + "seed", v.at(k + "seed"));
  spec.model = v.at(k + "model");
  spec.base_url = v.at(k + "base_url");
  spec.tag = v.at(k + "tag");
  if (spec.kind == BackendKind::replay && spec.path.empty()) bad(k + "path", "replay backend needs a path");
  if (spec.kind == BackendKind::provider && spec.model.empty()) bad(k + "model", "provider backend needs a model");
  return spec;
}

std::vector<FeedbackSource> parse_order(const std::string& key, const std::string& text) {
  std::vector<FeedbackSource> order;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    auto f = parse_feedback_source(item.substr(b, e - b + 1));
    if (!f) bad(key, "unknown feedback source '" + item + "'");
    order.push_back(*f);
  }
  if (order.empty()) bad(key, "feedback order is empty");
  return order;
}

}  // namespace

std::string to_string(FeedbackSource source) {
  switch (source) {
    case FeedbackSource::frontier: return "frontier";
    case FeedbackSource::self: return "self";
    case FeedbackSource::gold: return "gold";
  }
  return "self";
}

std::optional<FeedbackSource> parse_feedback_source(std::string_view s) {
  if (s == "frontier") return FeedbackSource::frontier;
  if (s == "self") return FeedbackSource::self;
  if (s == "gold") return FeedbackSource::gold;
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

std::optional<Values> preset_values(std::string_view name) {
  auto it = presets().find(name);
  if (it == presets().end()) return std::nullopt;
  return it->second;
}

RoundConfig config_from_values(const Values& values, const fs::path& base_dir) {
  for (const auto& [key, _] : values)
    if (!defaults().count(key)) bad(key, "unknown configuration key");

  Values v = defaults();
  std::string preset = values.count("run.preset") ? values.at("run.preset") : "";
  if (!preset.empty()) {
    auto p = preset_values(preset);
    if (!p) bad("run.preset", "unknown preset '" + preset + "'");
    for (const auto& [key, value] : *p) v[key] = value;
  }
  for (const auto& [key, value] : values) v[key] = value;

  RoundConfig c;
  c.effective = v;
  c.round_index = parse_integer<std::int64_t>("run.round_index", v["run.round_index"]);
  c.problems = resolve(base_dir, v["run.problems"]);
  c.out_dir = resolve(base_dir, v["run.out_dir"]);
  c.seed = parse_integer<std::uint64_t>("run.seed", v["run.seed"]);
  if (v["run.prompt_source"] == "fixed") c.prompt_source = PromptSource::fixed;
  else if (v["run.prompt_source"] == "fresh") c.prompt_source = PromptSource::fresh;
  else bad("run.prompt_source", "expected fixed or fresh");
  c.num_splits = parse_integer<std::int64_t>("run.num_splits", v["run.num_splits"]);
  c.feedback_order = parse_order("run.feedback_order", v["run.feedback_order"]);
  if (!v["run.feedback"].empty()) {
    c.feedback = parse_feedback_source(v["run.feedback"]);
    if (!c.feedback) bad("run.feedback", "expected frontier, self or gold");
  }
  c.outcome_pairs = parse_flag("run.outcome_pairs", v["run.outcome_pairs"]);
  c.process_pairs = parse_flag("run.process_pairs", v["run.process_pairs"]);
  c.parallelism = parse_integer<std::size_t>("run.parallelism", v["run.parallelism"]);

  c.k_sc = parse_integer<std::int64_t>("sampling.k_sc", v["sampling.k_sc"]);
  c.k_dpo = parse_integer<std::int64_t>("sampling.k_dpo", v["sampling.k_dpo"]);
  c.num_inputs = parse_integer<std::int64_t>("sampling.num_inputs", v["sampling.num_inputs"]);
  c.decoding.temperature = parse_real("sampling.temperature", v["sampling.temperature"]);
  c.decoding.max_tokens = parse_integer<std::int64_t>("sampling.max_tokens", v["sampling.max_tokens"]);
  c.template_dir = v["sampling.templates"].empty() ? default_template_dir()
                                                  : resolve(base_dir, v["sampling.templates"]);

  auto tie = parse_tie_policy(v["vote.tie_policy"]);
  if (!tie) bad("vote.tie_policy", "expected discard_input or first_seen");
  c.vote.tie_policy = *tie;
  c.vote.min_pool = parse_integer<std::int64_t>("vote.min_pool", v["vote.min_pool"]);

  c.pairs.epsilon = parse_fraction("pairs.epsilon", v["pairs.epsilon"]);
  c.pairs.sigma = parse_fraction("pairs.sigma", v["pairs.sigma"]);
  if (v["pairs.max_pairs_per_problem"] != "unlimited")
    c.pairs.max_pairs_per_problem =
        parse_integer<std::int64_t>("pairs.max_pairs_per_problem", v["pairs.max_pairs_per_problem"]);
  c.pairs.dedupe = parse_flag("pairs.dedupe", v["pairs.dedupe"]);

  if (v["prefix.mode"] == "ratio") c.prefix.mode = PrefixMode::ratio;
  else if (v["prefix.mode"] == "fixed") c.prefix.mode = PrefixMode::fixed;
  else bad("prefix.mode", "expected ratio or fixed");
  c.prefix.ratio = parse_fraction("prefix.ratio", v["prefix.ratio"]);
  c.prefix.fixed_count = parse_integer<std::int64_t>("prefix.fixed_count", v["prefix.fixed_count"]);
  c.prefix.completions = parse_integer<std::int64_t>("prefix.completions", v["prefix.completions"]);

  auto runner = runner_preset(v["exec.runner"]);
  if (!runner) bad("exec.runner", "unknown runner profile '" + v["exec.runner"] + "'");
  c.runner = *runner;
  if (v["exec.io_mode"] == "stdin_stdout") c.runner.io_mode = IoMode::stdin_stdout;
  else if (v["exec.io_mode"] == "call_based") c.runner.io_mode = IoMode::call_based;
  else bad("exec.io_mode", "expected stdin_stdout or call_based");
  c.runner.limits.wall_time_seconds = parse_real("exec.wall_time_seconds", v["exec.wall_time_seconds"]);
  c.runner.limits.memory_bytes = parse_integer<std::int64_t>("exec.memory_bytes", v["exec.memory_bytes"]);
  c.runner.limits.output_bytes = parse_integer<std::int64_t>("exec.output_bytes", v["exec.output_bytes"]);
  if (!v["exec.guard"].empty()) c.runner = with_guard(c.runner, resolve(base_dir, v["exec.guard"]).string());
  if (v["exec.normalization"] == "exact_canonical") c.normalization.mode = NormalizationMode::exact_canonical;
  else if (v["exec.normalization"] == "token_float") c.normalization.mode = NormalizationMode::token_float;
  else bad("exec.normalization", "expected exact_canonical or token_float");
  c.normalization.float_tolerance = parse_real("exec.float_tolerance", v["exec.float_tolerance"]);
  c.spawn_failure_budget =
      parse_integer<std::size_t>("exec.spawn_failure_budget", v["exec.spawn_failure_budget"]);

  c.dpo.beta = parse_real("dpo.beta", v["dpo.beta"]);
  c.dpo.alpha = parse_real("dpo.alpha", v["dpo.alpha"]);

  auto extraction = extraction_preset(v["answer.extraction"]);
  if (!extraction) bad("answer.extraction", "unknown extraction preset '" + v["answer.extraction"] + "'");
  c.extraction = *extraction;
  if (!v["answer.strict"].empty()) c.extraction.strict = parse_flag("answer.strict", v["answer.strict"]);

  c.policy_backend = parse_backend(v, "policy", base_dir, c.seed);
  c.frontier_backend = parse_backend(v, "frontier", base_dir, c.seed);
  if (!v["backend.inputs_kind"].empty()) c.inputs_backend = parse_backend(v, "inputs", base_dir, c.seed);

  c.prefix.rng_seed = derive_seed(c, "prefix");

  if (c.round_index < 0) bad("run.round_index", "must be >= 0");
  if (c.num_splits < 1) bad("run.num_splits", "must be >= 1");
  if (c.prompt_source == PromptSource::fresh && c.round_index >= c.num_splits)
    bad("run.round_index", "fresh prompts need round_index < num_splits");
  if (c.parallelism < 1) bad("run.parallelism", "must be >= 1");
  if (c.k_dpo < 2) bad("sampling.k_dpo", "a pair needs at least two solutions");
  if (c.num_inputs < 1) bad("sampling.num_inputs", "must be >= 1");
  if (auto e = validate_vote_policy(c.vote)) bad("vote", *e);
  if (c.k_sc < c.vote.min_pool) bad("sampling.k_sc", "k_sc must be >= vote.min_pool");
  if (auto e = validate_pair_policy(c.pairs)) bad("pairs", *e);
  if (auto e = validate_prefix_policy(c.prefix)) bad("prefix", *e);
  if (auto e = validate_dpo_hyper(c.dpo)) bad("dpo", *e);
  if (auto e = validate_profile(c.runner)) bad("exec", *e);
  if (auto e = validate_normalization(c.normalization)) bad("exec", *e);
  if (auto e = validate_extraction(c.extraction)) bad("answer", *e);
  if (c.decoding.max_tokens < 1) bad("sampling.max_tokens", "must be >= 1");
  return c;
}

RoundConfig load_config(const fs::path& file, const Values& overrides) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(file.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("bad_config", file.string(), e.what());
  }
  Values values;
  for (const auto& [section, node] : tree) {
    if (node.empty()) bad(section, "keys must live inside a section");
    for (const auto& [key, leaf] : node) values[section + "." + key] = leaf.data();
  }
  for (const auto& [key, value] : overrides) values[key] = value;
  return config_from_values(values, file.parent_path());
}

FeedbackSource feedback_for_round(const RoundConfig& config) {
  if (config.feedback) return *config.feedback;
  auto i = static_cast<std::size_t>(config.round_index);
  return config.feedback_order[std::min(i, config.feedback_order.size() - 1)];
}

std::uint64_t derive_seed(const RoundConfig& config, std::string_view stream) {
  return stable_hash(std::string(stream) + "#" + std::to_string(config.round_index), config.seed);
}

std::unique_ptr<Backend> make_backend(const BackendSpec& spec, const RoundConfig& config) {
  switch (spec.kind) {
    case BackendKind::mock: {
      Json script = Json::object();
      if (!spec.script.empty()) {
        std::ifstream in(spec.script);
        if (!in) throw Error("io_error", "cannot read mock script " + spec.script.string());
        script = Json::parse(in, nullptr, false);
        if (script.is_discarded())
          throw ValidationError("bad_script", spec.script.string(), "mock script is not valid JSON");
      }
      return std::make_unique<MockBackend>(spec.seed, std::move(script), spec.tag);
    }
    case BackendKind::replay:
      return std::make_unique<ReplayBackend>(spec.path, spec.tag);
    case BackendKind::provider: {
      ProviderConfig pc;
      pc.base_url = spec.base_url;
      pc.model = spec.model;
      pc.tag = spec.tag;
      pc.in_flight = config.parallelism;
      pc.templates = load_templates(config.template_dir);
      return std::make_unique<ProviderBackend>(provider_from_env(std::move(pc)));
    }
  }
  throw Error("internal", "unreachable backend kind");
}

MatrixOptions matrix_options(const RoundConfig& config) {
  MatrixOptions o;
  o.parallelism = config.parallelism;
  o.spawn_failure_budget = config.spawn_failure_budget;
  return o;
}

}  // namespace ffg
