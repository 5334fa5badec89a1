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

// Math answer extraction, canonicalization and single-case verification.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffg/model.hpp"

namespace ffg {

enum class ExtractionRule { boxed, answer_is, last_number };

struct ExtractionPolicy {
  std::vector<ExtractionRule> rules{ExtractionRule::boxed, ExtractionRule::answer_is,
                                    ExtractionRule::last_number};
  // When a rule's anchor is present but yields nothing usable, strict
  // extraction stops with no answer instead of trying the next rule.
  bool strict = false;
};

// Named presets; "boxed-first" is the default policy.
std::optional<ExtractionPolicy> extraction_preset(std::string_view name);
std::optional<std::string> validate_extraction(const ExtractionPolicy& policy);
std::string to_string(ExtractionRule rule);
std::optional<ExtractionRule> parse_extraction_rule(std::string_view s);

// nullopt is the NoAnswer value.
std::optional<std::string> extract_answer(std::string_view text, const ExtractionPolicy& policy);

// Canonical key of an answer: "p/q" or "p" when it parses as a number
// (decimals, fractions, percents, thousands separators, currency markers),
// else the answer with whitespace and currency markers removed.
std::string canonical_answer(std::string_view answer);

bool answers_equivalent(std::string_view a, std::string_view b);

// Single-test-case score: r = 1 iff the solution's extracted answer is
// equivalent to the label.
FeedbackScore verify_single(const CandidateSolution& solution, std::string_view pseudo_label,
                            const ExtractionPolicy& policy);

}  // namespace ffg
