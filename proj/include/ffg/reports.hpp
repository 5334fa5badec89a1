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

// Analysis artifacts over run outputs: suite quality against an oracle,
// suite sizes, confidence histograms and the accumulated accuracy curve.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffg/exec.hpp"
#include "ffg/model.hpp"

namespace ffg {

struct SeriesPoint {
  double x = 0;
  double y = 0;
  std::int64_t n = 0;  // observations behind the point
};

struct Report {
  std::string metric;
  std::map<std::string, double> scalars;
  std::vector<SeriesPoint> series;  // x strictly increasing
  std::map<std::string, std::map<std::string, double>> groups;
  std::map<std::string, std::string> provenance;  // input name -> digest
};

std::optional<std::string> validate_report(const Report& report);

nlohmann::json encode(const Report& report);

// Plain-text rendering: scalars, then groups, then the series.
std::string render_table(const Report& report);

// Runs each problem's oracle on its pseudo inputs. A pseudo case is valid
// when the oracle output equals the pseudo output. Scalars: pass_rate
// (percent), valid, total, excluded (problems whose oracle could not be
// launched).
Report pass_rate_vs_oracle(const std::vector<TestSuite>& suites,
                           const std::map<std::string, std::string>& oracle_programs,
                           const RunnerProfile& profile, const NormalizationPolicy& normalization,
                           const MatrixOptions& options = {});

// Mean cases per suite overall and per provenance.
Report suite_stats(const std::vector<TestSuite>& suites);

struct LabeledPrediction {
  std::string problem_id;
  double confidence = 0;
  bool correct = false;
};

// y(x) = fraction correct among predictions with confidence <= x, one
// point per distinct confidence.
Report accumulated_accuracy_curve(const std::vector<LabeledPrediction>& predictions);

// Step-function value of a series at x (last point with x_i <= x); NaN
// before the first point.
double series_at(const Report& report, double x);

// Predictions from pseudo suites checked against gold suites. Math suites
// give one prediction per problem; code suites give one per pseudo case
// whose input also appears in the gold suite.
std::vector<LabeledPrediction> predictions_from_suites(const std::vector<TestSuite>& pseudo,
                                                       const std::vector<Problem>& problems,
                                                       const NormalizationPolicy& normalization);

// Histogram of suite confidence in `bins` equal-width bins over [0, 1],
// grouped by the problem metadata value under `group_key` ("all" when the
// key is absent).
Report confidence_histogram(const std::vector<TestSuite>& suites,
                            const std::vector<Problem>& problems, int bins = 10,
                            const std::string& group_key = "difficulty");

}  // namespace ffg
