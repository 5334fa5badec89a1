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

// Scores solutions against gold or pseudo suites as the uniform pass
// fraction over the suite's cases.

#include <map>
#include <string>
#include <vector>

#include "ffg/answer.hpp"
#include "ffg/exec.hpp"
#include "ffg/model.hpp"

namespace ffg {

// Builds a score from ordered verdicts; r = passes / verdicts.size().
FeedbackScore score_from_verdicts(const std::string& problem_id, std::int64_t sample_index,
                                  std::vector<Verdict> verdicts);

// Code path. `records` holds one solution's executions keyed by input
// text. A non-ok status is an error verdict; every case is evaluated.
// Throws EmptySuiteError or MissingRecordsError.
FeedbackScore score(const std::string& problem_id, std::int64_t sample_index,
                    const std::map<std::string, ExecutionRecord>& records, const TestSuite& suite,
                    const NormalizationPolicy& normalization);

// Math path: single case, delegated to verify_single against the suite's
// one output.
FeedbackScore score(const CandidateSolution& solution, const TestSuite& suite,
                    const ExtractionPolicy& extraction);

}  // namespace ffg
