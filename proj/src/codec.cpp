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

#include "ffg/codec.hpp"

#include "ffg/digest.hpp"

namespace ffg {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("decode_error", path, message);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Typed, path-tracking access to one JSON object.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const Json& at(const char* key) const {
    if (!j_.contains(key)) fail(join(path_, key), "missing field");
    return j_.at(key);
  }

  std::string str(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) fail(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> opt_str(const char* key) const {
    if (!has(key)) return std::nullopt;
    return str(key);
  }

  std::int64_t integer(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail(join(path_, key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t uinteger(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(join(path_, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  double number(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number()) fail(join(path_, key), "expected a number");
    return v.get<double>();
  }

  Rational rational(const char* key) const {
    try {
      return decode<Rational>(at(key));
    } catch (const ValidationError&) {
      fail(join(path_, key), "expected a rational");
    }
  }

  const Json& array(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array()) fail(join(path_, key), "expected an array");
    return v;
  }

  std::map<std::string, std::string> string_map(const char* key) const {
    std::map<std::string, std::string> out;
    if (!has(key)) return out;
    const Json& v = at(key);
    if (!v.is_object()) fail(join(path_, key), "expected an object");
    for (const auto& [k, val] : v.items()) {
      if (!val.is_string()) fail(join(join(path_, key), k), "expected a string");
      out.emplace(k, val.get<std::string>());
    }
    return out;
  }

  Reader child(const char* key) const { return Reader(at(key), join(path_, key)); }

 private:
  const Json& j_;
  std::string path_;
};

template <typename T>
T checked(T value) {
  ensure(validate(value));
  return value;
}

Json encode_side(const PairSide& side) {
  Json ref = {{"sample_index", side.ref.sample_index}};
  if (side.ref.step_count) ref["step_count"] = *side.ref.step_count;
  return {{"ref", ref}, {"text", side.text}};
}

PairSide decode_side(const Reader& r) {
  PairSide side;
  Reader ref = r.child("ref");
  side.ref.sample_index = ref.integer("sample_index");
  if (ref.has("step_count")) side.ref.step_count = ref.integer("step_count");
  side.text = r.str("text");
  return side;
}

TestSuite decode_suite(const Reader& r) {
  TestSuite s;
  s.problem_id = r.has("problem_id") ? r.str("problem_id") : std::string();
  auto prov = parse_provenance(r.str("provenance"));
  if (!prov) fail(join(r.path(), "provenance"), "unknown provenance");
  s.provenance = *prov;
  s.pool_size = r.has("pool_size") ? r.integer("pool_size") : 0;
  const Json& cases = r.array("cases");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    Reader c(cases[i], join(r.path(), "cases[" + std::to_string(i) + "]"));
    TestCase tc;
    tc.input = c.str("input");
    tc.output = c.str("output");
    tc.confidence = c.has("confidence") ? c.rational("confidence") : Rational(1);
    s.cases.push_back(std::move(tc));
  }
  return s;
}

}  // namespace

Json encode(const Rational& value) { return value.str(); }

Json encode(const TestCase& value) {
  return {{"input", value.input}, {"output", value.output}, {"confidence", encode(value.confidence)}};
}

Json encode(const TestSuite& value) {
  Json cases = Json::array();
  for (const auto& c : value.cases) cases.push_back(encode(c));
  return {{"problem_id", value.problem_id},
          {"cases", cases},
          {"provenance", to_string(value.provenance)},
          {"pool_size", value.pool_size}};
}

Json encode(const Problem& value) {
  Json j = {{"id", value.id}, {"kind", to_string(value.kind)}, {"prompt", value.prompt}};
  if (value.gold_suite) {
    Json suite = encode(*value.gold_suite);
    suite.erase("problem_id");
    j["gold_suite"] = suite;
  }
  if (value.runner_profile) j["runner_profile"] = *value.runner_profile;
  if (!value.metadata.empty()) j["metadata"] = value.metadata;
  return j;
}

Json encode(const CandidateSolution& value) {
  Json j = {{"problem_id", value.problem_id},
            {"sample_index", value.sample_index},
            {"text", value.text},
            {"model_tag", value.model_tag},
            {"decoding",
             {{"temperature", value.decoding.temperature},
              {"seed", value.decoding.seed},
              {"max_tokens", value.decoding.max_tokens}}}};
  j["payload"] = value.payload ? Json(*value.payload) : Json(nullptr);
  return j;
}

Json encode(const FeedbackScore& value) {
  Json verdicts = Json::array();
  for (Verdict v : value.per_case) verdicts.push_back(to_string(v));
  return {{"problem_id", value.problem_id}, {"sample_index", value.sample_index},
          {"r", encode(value.r)},           {"passed", value.passed},
          {"total", value.total},           {"per_case", verdicts},
          {"suite_digest", value.suite_digest}};
}

Json encode(const SolutionPrefix& value) {
  Json j = {{"problem_id", value.problem_id},
            {"parent_sample_index", value.parent_sample_index},
            {"step_count", value.step_count},
            {"parent_steps", value.parent_steps},
            {"text", value.text},
            {"completion_count", value.completion_count}};
  j["expected_return"] = value.expected_return ? encode(*value.expected_return) : Json(nullptr);
  return j;
}

Json encode(const PreferencePair& value) {
  return {{"problem_id", value.problem_id}, {"chosen", encode_side(value.chosen)},
          {"rejected", encode_side(value.rejected)}, {"kind", to_string(value.kind)},
          {"r_w", encode(value.r_w)}, {"r_l", encode(value.r_l)}};
}

Json encode(const RunManifest& value) {
  return {{"round_index", value.round_index}, {"config", value.config},
          {"inputs", value.inputs},           {"outputs", value.outputs},
          {"model_tag", value.model_tag},     {"started_at", value.started_at},
          {"finished_at", value.finished_at}};
}

Json encode(const ExecutionRecord& value, bool with_timing) {
  Json j = {{"problem_id", value.problem_id}, {"sample_index", value.sample_index},
            {"case_index", value.case_index}, {"status", to_string(value.status)},
            {"input", value.input},           {"model_tag", value.model_tag}};
  if (value.stdout_canonical) j["stdout_canonical"] = *value.stdout_canonical;
  if (with_timing) j["wall_time_used"] = value.wall_time_used;
  return j;
}

template <>
Rational decode<Rational>(const Json& j) {
  std::optional<Rational> r;
  if (j.is_string()) r = Rational::parse(j.get<std::string>());
  else if (j.is_number_integer()) r = Rational(j.get<std::int64_t>());
  else if (j.is_number()) r = Rational::parse(j.dump());
  if (!r) fail("", "expected a rational");
  return *r;
}

template <>
TestCase decode<TestCase>(const Json& j) {
  Reader r(j, "");
  TestCase tc{r.str("input"), r.str("output"), r.has("confidence") ? r.rational("confidence") : Rational(1)};
  return checked(std::move(tc));
}

template <>
TestSuite decode<TestSuite>(const Json& j) {
  return checked(decode_suite(Reader(j, "")));
}

template <>
Problem decode<Problem>(const Json& j) {
  Reader r(j, "");
  Problem p;
  p.id = r.str("id");
  auto kind = parse_problem_kind(r.str("kind"));
  if (!kind) fail("kind", "expected math or code");
  p.kind = *kind;
  p.prompt = r.str("prompt");
  if (r.has("gold_suite")) {
    p.gold_suite = decode_suite(r.child("gold_suite"));
    p.gold_suite->problem_id = p.id;
  }
  p.runner_profile = r.opt_str("runner_profile");
  p.metadata = r.string_map("metadata");
  return checked(std::move(p));
}

template <>
CandidateSolution decode<CandidateSolution>(const Json& j) {
  Reader r(j, "");
  CandidateSolution s;
  s.problem_id = r.str("problem_id");
  s.sample_index = r.integer("sample_index");
  s.text = r.str("text");
  s.payload = r.opt_str("payload");
  s.model_tag = r.has("model_tag") ? r.str("model_tag") : std::string();
  if (r.has("decoding")) {
    Reader d = r.child("decoding");
    s.decoding.temperature = d.number("temperature");
    s.decoding.seed = d.uinteger("seed");
    s.decoding.max_tokens = d.integer("max_tokens");
  }
  return checked(std::move(s));
}

template <>
FeedbackScore decode<FeedbackScore>(const Json& j) {
  Reader r(j, "");
  FeedbackScore s;
  s.problem_id = r.str("problem_id");
  s.sample_index = r.integer("sample_index");
  s.r = r.rational("r");
  s.passed = r.integer("passed");
  s.total = r.integer("total");
  const Json& verdicts = r.array("per_case");
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    auto v = verdicts[i].is_string() ? parse_verdict(verdicts[i].get<std::string>()) : std::nullopt;
    if (!v) fail("per_case[" + std::to_string(i) + "]", "expected pass, fail or error");
    s.per_case.push_back(*v);
  }
  s.suite_digest = r.has("suite_digest") ? r.str("suite_digest") : std::string();
  return checked(std::move(s));
}

template <>
SolutionPrefix decode<SolutionPrefix>(const Json& j) {
  Reader r(j, "");
  SolutionPrefix p;
  p.problem_id = r.str("problem_id");
  p.parent_sample_index = r.integer("parent_sample_index");
  p.step_count = r.integer("step_count");
  p.parent_steps = r.has("parent_steps") ? r.integer("parent_steps") : 0;
  p.text = r.str("text");
  if (r.has("expected_return")) p.expected_return = r.rational("expected_return");
  p.completion_count = r.has("completion_count") ? r.integer("completion_count") : 0;
  return checked(std::move(p));
}

template <>
PreferencePair decode<PreferencePair>(const Json& j) {
  Reader r(j, "");
  PreferencePair p;
  p.problem_id = r.str("problem_id");
  p.chosen = decode_side(r.child("chosen"));
  p.rejected = decode_side(r.child("rejected"));
  auto kind = parse_pair_kind(r.str("kind"));
  if (!kind) fail("kind", "expected outcome or process");
  p.kind = *kind;
  p.r_w = r.rational("r_w");
  p.r_l = r.rational("r_l");
  return p;
}

template <>
RunManifest decode<RunManifest>(const Json& j) {
  Reader r(j, "");
  RunManifest m;
  m.round_index = r.integer("round_index");
  m.config = r.string_map("config");
  m.inputs = r.string_map("inputs");
  m.outputs = r.string_map("outputs");
  m.model_tag = r.has("model_tag") ? r.str("model_tag") : std::string();
  m.started_at = r.has("started_at") ? r.str("started_at") : std::string();
  m.finished_at = r.has("finished_at") ? r.str("finished_at") : std::string();
  return m;
}

template <>
ExecutionRecord decode<ExecutionRecord>(const Json& j) {
  Reader r(j, "");
  ExecutionRecord rec;
  rec.problem_id = r.str("problem_id");
  rec.sample_index = r.integer("sample_index");
  rec.case_index = r.integer("case_index");
  auto st = parse_exec_status(r.str("status"));
  if (!st) fail("status", "unknown status");
  rec.status = *st;
  rec.stdout_canonical = r.opt_str("stdout_canonical");
  if (r.has("wall_time_used")) rec.wall_time_used = r.number("wall_time_used");
  rec.input = r.has("input") ? r.str("input") : std::string();
  rec.model_tag = r.has("model_tag") ? r.str("model_tag") : std::string();
  if ((rec.status == ExecStatus::ok) != rec.stdout_canonical.has_value())
    throw ValidationError("stdout_presence", "stdout_canonical",
                          "stdout_canonical must be present exactly when status is ok");
  return rec;
}

std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
}

std::string suite_digest(const TestSuite& suite) { return sha256_digest(encode(suite).dump()); }

}  // namespace ffg
