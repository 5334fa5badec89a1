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

#include "ffg/answer.hpp"

#include <cctype>
#include <regex>

namespace ffg {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Contents of the last \boxed{...}, honoring nested braces. An empty
// string means the anchor was found but unbalanced or empty.
std::optional<std::string> last_boxed(std::string_view text) {
  static constexpr std::string_view kAnchor = "\\boxed{";
  auto pos = text.rfind(kAnchor);
  if (pos == std::string_view::npos) return std::nullopt;
  std::size_t i = pos + kAnchor.size();
  int depth = 1;
  std::size_t start = i;
  for (; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) return trim(text.substr(start, i - start));
  }
  return std::string();
}

std::string strip_clause(std::string s) {
  s = trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';')) s.pop_back();
  s = trim(s);
  if (s.size() >= 2 && s.front() == '$' && s.back() == '$') s = trim(s.substr(1, s.size() - 2));
  if (auto boxed = last_boxed(s); boxed && !boxed->empty()) return *boxed;
  return s;
}

std::optional<std::string> answer_is_clause(std::string_view text) {
  static const std::regex kAnswerIs(R"(answer\s+is\s*:?\s*([^\n]*))", std::regex::icase);
  std::string s(text);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kAnswerIs); it != std::sregex_iterator(); ++it)
    last = strip_clause((*it)[1].str());
  return last;
}

std::optional<std::string> last_number(std::string_view text) {
  static const std::regex kNumber(R"(-?\d+(?:,\d{3})*(?:\.\d+)?(?:/\d+)?%?)");
  std::string s(text);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kNumber); it != std::sregex_iterator(); ++it)
    last = it->str();
  return last;
}

std::string strip_markers(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c) || c == '$') continue;
    if (c == '\\' && i + 1 < s.size() && s[i + 1] == '$') continue;
    out.push_back(s[i]);
  }
  for (std::string_view marker : {"€", "£", "¥", "\\!"}) {
    for (auto p = out.find(marker); p != std::string::npos; p = out.find(marker))
      out.erase(p, marker.size());
  }
  return out;
}

// "1,234,567" -> "1234567"; only well-formed thousands groups are touched.
std::string drop_thousands(const std::string& s) {
  static const std::regex kGrouped(R"(^-?\d{1,3}(,\d{3})+(\.\d+)?%?$)");
  if (!std::regex_match(s, kGrouped)) return s;
  std::string out;
  for (char c : s)
    if (c != ',') out.push_back(c);
  return out;
}

}  // namespace

std::optional<ExtractionPolicy> extraction_preset(std::string_view name) {
  if (name == "boxed-first") return ExtractionPolicy{};
  if (name == "boxed-only") return ExtractionPolicy{{ExtractionRule::boxed}, true};
  return std::nullopt;
}

std::optional<std::string> validate_extraction(const ExtractionPolicy& policy) {
  if (policy.rules.empty()) return "extraction policy needs at least one rule";
  return std::nullopt;
}

std::string to_string(ExtractionRule rule) {
  switch (rule) {
    case ExtractionRule::boxed: return "boxed";
    case ExtractionRule::answer_is: return "answer_is";
    case ExtractionRule::last_number: return "last_number";
  }
  return "boxed";
}

std::optional<ExtractionRule> parse_extraction_rule(std::string_view s) {
  if (s == "boxed") return ExtractionRule::boxed;
  if (s == "answer_is") return ExtractionRule::answer_is;
  if (s == "last_number") return ExtractionRule::last_number;
  return std::nullopt;
}

std::optional<std::string> extract_answer(std::string_view text, const ExtractionPolicy& policy) {
  for (ExtractionRule rule : policy.rules) {
    std::optional<std::string> hit;
    switch (rule) {
      case ExtractionRule::boxed: hit = last_boxed(text); break;
      case ExtractionRule::answer_is: hit = answer_is_clause(text); break;
      case ExtractionRule::last_number: hit = last_number(text); break;
    }
    if (!hit) continue;
    if (!hit->empty()) return hit;
    if (policy.strict) return std::nullopt;
  }
  return std::nullopt;
}

std::string canonical_answer(std::string_view answer) {
  std::string s = drop_thousands(strip_markers(answer));
  if (auto value = Rational::parse(s)) return value->str();
  return s;
}

bool answers_equivalent(std::string_view a, std::string_view b) {
  return canonical_answer(a) == canonical_answer(b);
}

FeedbackScore verify_single(const CandidateSolution& solution, std::string_view pseudo_label,
                            const ExtractionPolicy& policy) {
  auto answer = solution.payload ? solution.payload : extract_answer(solution.text, policy);
  bool pass = answer && !answer->empty() && answers_equivalent(*answer, pseudo_label);
  FeedbackScore score;
  score.problem_id = solution.problem_id;
  score.sample_index = solution.sample_index;
  score.total = 1;
  score.passed = pass ? 1 : 0;
  score.r = Rational(score.passed, 1);
  score.per_case = {answer ? (pass ? Verdict::pass : Verdict::fail) : Verdict::error};
  return score;
}

}  // namespace ffg
