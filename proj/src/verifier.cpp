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

#include "ffg/verifier.hpp"

#include "ffg/codec.hpp"
#include "ffg/errors.hpp"

namespace ffg {

FeedbackScore score_from_verdicts(const std::string& problem_id, std::int64_t sample_index,
                                  std::vector<Verdict> verdicts) {
  if (verdicts.empty()) throw EmptySuiteError("cannot score against an empty suite");
  FeedbackScore s;
  s.problem_id = problem_id;
  s.sample_index = sample_index;
  s.total = static_cast<std::int64_t>(verdicts.size());
  for (Verdict v : verdicts) s.passed += v == Verdict::pass ? 1 : 0;
  s.r = Rational(s.passed, s.total);
  s.per_case = std::move(verdicts);
  return s;
}

FeedbackScore score(const std::string& problem_id, std::int64_t sample_index,
                    const std::map<std::string, ExecutionRecord>& records, const TestSuite& suite,
                    const NormalizationPolicy& normalization) {
  if (suite.cases.empty()) throw EmptySuiteError("suite for " + problem_id + " has no cases");
  std::vector<Verdict> verdicts;
  verdicts.reserve(suite.cases.size());
  for (const auto& tc : suite.cases) {
    auto it = records.find(tc.input);
    if (it == records.end())
      throw MissingRecordsError("no execution of sample " + std::to_string(sample_index) +
                                " of " + problem_id + " on a suite input");
    const ExecutionRecord& rec = it->second;
    if (rec.status != ExecStatus::ok || !rec.stdout_canonical) {
      verdicts.push_back(Verdict::error);
    } else {
      verdicts.push_back(outputs_equal(*rec.stdout_canonical, tc.output, normalization)
                             ? Verdict::pass
                             : Verdict::fail);
    }
  }
  FeedbackScore s = score_from_verdicts(problem_id, sample_index, std::move(verdicts));
  s.suite_digest = suite_digest(suite);
  return s;
}

FeedbackScore score(const CandidateSolution& solution, const TestSuite& suite,
                    const ExtractionPolicy& extraction) {
  if (suite.cases.empty())
    throw EmptySuiteError("suite for " + solution.problem_id + " has no cases");
  FeedbackScore s = verify_single(solution, suite.cases.front().output, extraction);
  s.suite_digest = suite_digest(suite);
  return s;
}

}  // namespace ffg
