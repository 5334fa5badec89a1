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

#include "ffg/reports.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ffg/answer.hpp"
#include "ffg/errors.hpp"
#include "ffg/vote.hpp"

namespace ffg {

std::optional<std::string> validate_report(const Report& report) {
  for (std::size_t i = 1; i < report.series.size(); ++i)
    if (!(report.series[i - 1].x < report.series[i].x))
      return "series x values must be strictly increasing";
  return std::nullopt;
}

nlohmann::json encode(const Report& report) {
  nlohmann::json series = nlohmann::json::array();
  for (const auto& p : report.series) series.push_back({{"x", p.x}, {"y", p.y}, {"n", p.n}});
  return {{"metric", report.metric},
          {"scalars", report.scalars},
          {"series", series},
          {"groups", report.groups},
          {"provenance", report.provenance}};
}

std::string render_table(const Report& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "metric: " << report.metric << "\n";
  for (const auto& [k, v] : report.scalars) out << "  " << std::left << std::setw(24) << k << v << "\n";
  for (const auto& [group, values] : report.groups) {
    out << "[" << group << "]\n";
    for (const auto& [k, v] : values) out << "  " << std::left << std::setw(24) << k << v << "\n";
  }
  if (!report.series.empty()) {
    out << std::right << std::setw(10) << "x" << std::setw(10) << "y" << std::setw(8) << "n" << "\n";
    for (const auto& p : report.series)
      out << std::setw(10) << p.x << std::setw(10) << p.y << std::setw(8) << p.n << "\n";
  }
  return out.str();
}

Report pass_rate_vs_oracle(const std::vector<TestSuite>& suites,
                           const std::map<std::string, std::string>& oracle_programs,
                           const RunnerProfile& profile, const NormalizationPolicy& normalization,
                           const MatrixOptions& options) {
  for (const auto& suite : suites)
    if (!oracle_programs.count(suite.problem_id))
      throw ValidationError("missing_oracle", suite.problem_id, "no oracle program for problem");

  std::int64_t valid = 0, total = 0, excluded = 0;
  Report report;
  report.metric = "pass-rate";
  for (const auto& suite : suites) {
    std::vector<std::string> inputs;
    for (const auto& c : suite.cases) inputs.push_back(c.input);
    std::vector<ProgramRef> oracle{{suite.problem_id, 0, "oracle", oracle_programs.at(suite.problem_id)}};
    ExecutionGrid grid;
    try {
      grid = execute_matrix(oracle, inputs, profile, options);
    } catch (const HarnessBudgetError&) {
      ++excluded;
      continue;
    }
    std::int64_t problem_valid = 0;
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
      const auto& rec = grid.at(0, i);
      if (rec.status == ExecStatus::ok &&
          outputs_equal(*rec.stdout_canonical, suite.cases[i].output, normalization))
        ++problem_valid;
    }
    valid += problem_valid;
    total += static_cast<std::int64_t>(suite.cases.size());
    report.groups[to_string(suite.provenance)]["valid"] += static_cast<double>(problem_valid);
    report.groups[to_string(suite.provenance)]["total"] += static_cast<double>(suite.cases.size());
  }
  for (auto& [_, g] : report.groups) g["pass_rate"] = g["total"] > 0 ? 100.0 * g["valid"] / g["total"] : 0.0;
  report.scalars["valid"] = static_cast<double>(valid);
  report.scalars["total"] = static_cast<double>(total);
  report.scalars["excluded"] = static_cast<double>(excluded);
  report.scalars["pass_rate"] = total > 0 ? 100.0 * static_cast<double>(valid) / static_cast<double>(total) : 0.0;
  return report;
}

Report suite_stats(const std::vector<TestSuite>& suites) {
  if (suites.empty()) throw ValidationError("empty_input", "suites", "suite_stats needs at least one suite");
  Report report;
  report.metric = "suite-stats";
  double cases = 0;
  for (const auto& suite : suites) {
    cases += static_cast<double>(suite.cases.size());
    auto& g = report.groups[to_string(suite.provenance)];
    g["suites"] += 1;
    g["cases"] += static_cast<double>(suite.cases.size());
    if (!suite.cases.empty()) g["confidence_sum"] += suite_confidence(suite).to_double();
  }
  for (auto& [_, g] : report.groups) {
    g["mean_cases"] = g["cases"] / g["suites"];
    g["mean_confidence"] = g["confidence_sum"] / g["suites"];
    g.erase("confidence_sum");
  }
  report.scalars["suites"] = static_cast<double>(suites.size());
  report.scalars["mean_cases"] = cases / static_cast<double>(suites.size());
  return report;
}

Report accumulated_accuracy_curve(const std::vector<LabeledPrediction>& predictions) {
  std::vector<LabeledPrediction> sorted = predictions;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.confidence < b.confidence; });
  Report report;
  report.metric = "confidence-curve";
  std::int64_t seen = 0, correct = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++seen;
    correct += sorted[i].correct ? 1 : 0;
    if (i + 1 < sorted.size() && sorted[i + 1].confidence == sorted[i].confidence) continue;
    report.series.push_back({sorted[i].confidence, static_cast<double>(correct) / static_cast<double>(seen), seen});
  }
  report.scalars["predictions"] = static_cast<double>(seen);
  report.scalars["accuracy"] = seen > 0 ? static_cast<double>(correct) / static_cast<double>(seen) : 0.0;
  return report;
}

double series_at(const Report& report, double x) {
  double y = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : report.series) {
    if (p.x > x) break;
    y = p.y;
  }
  return y;
}

std::vector<LabeledPrediction> predictions_from_suites(const std::vector<TestSuite>& pseudo,
                                                       const std::vector<Problem>& problems,
                                                       const NormalizationPolicy& normalization) {
  std::map<std::string, const Problem*> by_id;
  for (const auto& p : problems) by_id[p.id] = &p;
  std::vector<LabeledPrediction> out;
  for (const auto& suite : pseudo) {
    auto it = by_id.find(suite.problem_id);
    if (it == by_id.end() || !it->second->gold_suite) continue;
    const Problem& problem = *it->second;
    if (problem.kind == ProblemKind::math) {
      if (suite.cases.size() != 1 || problem.gold_suite->cases.size() != 1) continue;
      out.push_back({suite.problem_id, suite.cases[0].confidence.to_double(),
                     answers_equivalent(suite.cases[0].output, problem.gold_suite->cases[0].output)});
      continue;
    }
    std::map<std::string, std::string> gold;
    for (const auto& c : problem.gold_suite->cases) gold[canonical_input(c.input)] = c.output;
    for (const auto& c : suite.cases) {
      auto g = gold.find(canonical_input(c.input));
      if (g == gold.end()) continue;
      out.push_back({suite.problem_id, c.confidence.to_double(), outputs_equal(c.output, g->second, normalization)});
    }
  }
  return out;
}

Report confidence_histogram(const std::vector<TestSuite>& suites,
                            const std::vector<Problem>& problems, int bins,
                            const std::string& group_key) {
  if (bins < 1) throw ValidationError("bad_bins", "bins", "need at least one bin");
  std::map<std::string, std::string> group_of;
  for (const auto& p : problems) {
    auto it = p.metadata.find(group_key);
    group_of[p.id] = it == p.metadata.end() ? "all" : it->second;
  }
  Report report;
  report.metric = "confidence-hist";
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  auto label = [bins](int b) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << static_cast<double>(b) / bins << "-"
      << static_cast<double>(b + 1) / bins;
    return s.str();
  };
  for (const auto& suite : suites) {
    if (suite.cases.empty()) continue;
    const Rational exact = suite_confidence(suite);
    const double c = exact.to_double();
    const int b = static_cast<int>(std::min<std::int64_t>(bins - 1, exact.num() * bins / exact.den()));
    ++counts[static_cast<std::size_t>(b)];
    auto g = group_of.find(suite.problem_id);
    auto& group = report.groups[g == group_of.end() ? "all" : g->second];
    group[label(b)] += 1;
    group["suites"] += 1;
    group["confidence_sum"] += c;
  }
  for (auto& [_, g] : report.groups) {
    g["mean_confidence"] = g["confidence_sum"] / g["suites"];
    g.erase("confidence_sum");
  }
  std::int64_t n = 0;
  for (int b = 0; b < bins; ++b) {
    n += counts[static_cast<std::size_t>(b)];
    report.series.push_back({static_cast<double>(b + 1) / bins, static_cast<double>(counts[static_cast<std::size_t>(b)]),
                             counts[static_cast<std::size_t>(b)]});
  }
  report.scalars["suites"] = static_cast<double>(n);
  return report;
}

}  // namespace ffg
