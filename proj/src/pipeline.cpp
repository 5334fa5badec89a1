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

#include "ffg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>

#include "ffg/codec.hpp"
#include "ffg/digest.hpp"
#include "ffg/errors.hpp"
#include "ffg/pairs.hpp"
#include "ffg/parallel.hpp"
#include "ffg/reports.hpp"
#include "ffg/verifier.hpp"

namespace ffg {
namespace {

namespace fs = std::filesystem;

template <typename T, typename Key>
std::vector<std::string> ordered_ids(const std::vector<T>& items, Key key) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& item : items)
    if (seen.insert(key(item)).second) ids.push_back(key(item));
  return ids;
}

std::map<std::string, const TestSuite*> index_suites(const std::vector<TestSuite>& suites) {
  std::map<std::string, const TestSuite*> out;
  for (const auto& s : suites) out[s.problem_id] = &s;
  return out;
}

std::map<std::string, const Problem*> index_problems(const std::vector<Problem>& problems) {
  std::map<std::string, const Problem*> out;
  for (const auto& p : problems) out[p.id] = &p;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  out << text;
}

Json encode_inputs(const GeneratedInputs& g) {
  return {{"problem_id", g.problem_id}, {"inputs", g.inputs}, {"empty", g.empty}};
}

Json encode_exclusion(const Exclusion& e) { return {{"problem_id", e.problem_id}, {"reason", e.reason}}; }

Json encode_audit(const VoteAudit& a) {
  Json counts = Json::array();
  for (const auto& [value, n] : a.tally.counts) counts.push_back({{"value", value}, {"count", n}});
  Json j = {{"problem_id", a.problem_id},
            {"input", a.input},
            {"candidates", counts},
            {"failures", a.tally.failures}};
  if (const auto* out = std::get_if<PseudoOutput>(&a.outcome)) {
    j["outcome"] = "pseudo_output";
    j["value"] = out->value;
    j["confidence"] = encode(out->confidence);
  } else {
    j["outcome"] = to_string(std::get<NoConsensus>(a.outcome).reason);
  }
  return j;
}

}  // namespace

std::string timestamp_now() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  else
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<Problem> round_problems(const std::vector<Problem>& problems, const RoundConfig& config) {
  if (config.prompt_source == PromptSource::fixed) return problems;
  const auto n = static_cast<std::int64_t>(problems.size());
  const auto begin = n * config.round_index / config.num_splits;
  const auto end = n * (config.round_index + 1) / config.num_splits;
  return {problems.begin() + begin, problems.begin() + end};
}

std::vector<CandidateSolution> stage_sample(const std::vector<Problem>& problems, std::int64_t n,
                                            Decoding decoding, std::uint64_t base_seed,
                                            Backend& backend, const ExtractionPolicy& extraction,
                                            std::size_t parallelism) {
  std::vector<std::vector<CandidateSolution>> per(problems.size());
  parallel_for(problems.size(), parallelism, [&](std::size_t i) {
    Decoding d = decoding;
    d.seed = stable_hash(problems[i].id, base_seed);
    per[i] = sample_solutions(problems[i], n, d, backend, extraction);
  });
  std::vector<CandidateSolution> out;
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

std::vector<GeneratedInputs> stage_gen_inputs(const std::vector<Problem>& problems, std::int64_t k,
                                              Backend& backend, const PromptTemplate& tmpl,
                                              std::size_t parallelism) {
  std::vector<const Problem*> code;
  for (const auto& p : problems)
    if (p.kind == ProblemKind::code) code.push_back(&p);
  std::vector<GeneratedInputs> out(code.size());
  parallel_for(code.size(), parallelism,
               [&](std::size_t i) { out[i] = generate_test_inputs(*code[i], k, backend, tmpl); });
  return out;
}

std::vector<ExecutionRecord> stage_exec(const std::vector<CandidateSolution>& solutions,
                                        const std::map<std::string, std::vector<std::string>>& inputs,
                                        const RunnerProfile& profile, const MatrixOptions& options) {
  std::vector<ExecutionRecord> out;
  for (const auto& id : ordered_ids(solutions, [](const auto& s) { return s.problem_id; })) {
    auto in = inputs.find(id);
    if (in == inputs.end() || in->second.empty()) continue;
    std::vector<ProgramRef> programs;
    for (const auto& s : solutions)
      if (s.problem_id == id) programs.push_back({s.problem_id, s.sample_index, s.model_tag, s.payload});
    auto grid = execute_matrix(programs, in->second, profile, options);
    out.insert(out.end(), grid.cells().begin(), grid.cells().end());
  }
  return out;
}

VoteStageResult stage_vote(const std::vector<ExecutionRecord>& records, const VoteStageOptions& options) {
  if (auto e = validate_vote_policy(options.policy)) throw ValidationError("bad_policy", "vote", *e);
  std::vector<const ExecutionRecord*> pool;
  for (const auto& r : records) {
    if (options.pool_tag && r.model_tag != *options.pool_tag) continue;
    if (options.max_pool && r.sample_index >= *options.max_pool) continue;
    pool.push_back(&r);
  }
  VoteStageResult result;
  for (const auto& id : ordered_ids(pool, [](const auto* r) { return r->problem_id; })) {
    std::set<std::int64_t> rows;
    std::map<std::int64_t, std::string> cols;
    std::set<std::string> tags;
    for (const auto* r : pool) {
      if (r->problem_id != id) continue;
      rows.insert(r->sample_index);
      tags.insert(r->model_tag);
      auto [it, fresh] = cols.emplace(r->case_index, r->input);
      if (!fresh && it->second != r->input)
        throw ValidationError("inconsistent_records", id, "case " + std::to_string(r->case_index) + " has two inputs");
    }
    if (tags.size() != 1)
      throw ValidationError("mixed_pool", id, "records from several model tags; select one pool tag");
    std::vector<std::int64_t> row_ids(rows.begin(), rows.end());
    std::vector<std::string> inputs;
    std::map<std::int64_t, std::size_t> col_of;
    for (const auto& [c, input] : cols) {
      col_of[c] = inputs.size();
      inputs.push_back(input);
    }
    ExecutionGrid grid(row_ids.size(), inputs.size());
    std::vector<bool> filled(row_ids.size() * inputs.size(), false);
    for (const auto* r : pool) {
      if (r->problem_id != id) continue;
      auto row = static_cast<std::size_t>(std::lower_bound(row_ids.begin(), row_ids.end(), r->sample_index) - row_ids.begin());
      auto col = col_of[r->case_index];
      grid.at(row, col) = *r;
      filled[row * inputs.size() + col] = true;
    }
    if (std::find(filled.begin(), filled.end(), false) != filled.end())
      throw MissingRecordsError("pool for " + id + " does not cover every (solution, input) cell");
    try {
      result.suites.push_back(build_pseudo_suite(id, inputs, grid, options.policy,
                                                 pool_provenance(*tags.begin(), options.frontier_tag),
                                                 &result.audit));
    } catch (const EmptySuiteError&) {
      result.excluded.push_back({id, "no_consensus"});
    }
  }
  return result;
}

VoteStageResult stage_label(const std::vector<CandidateSolution>& solutions,
                            const VoteStageOptions& options) {
  if (auto e = validate_vote_policy(options.policy)) throw ValidationError("bad_policy", "vote", *e);
  VoteStageResult result;
  for (const auto& id : ordered_ids(solutions, [](const auto& s) { return s.problem_id; })) {
    std::vector<std::optional<std::string>> answers;
    std::string tag;
    for (const auto& s : solutions) {
      if (s.problem_id != id) continue;
      if (options.pool_tag && s.model_tag != *options.pool_tag) continue;
      if (options.max_pool && s.sample_index >= *options.max_pool) continue;
      answers.push_back(s.payload);
      tag = s.model_tag;
    }
    if (answers.empty()) continue;
    auto outcome = majority_answer_label(answers, options.policy);
    VoteAudit audit{id, "", {}, outcome};
    result.audit.push_back(audit);
    if (const auto* out = std::get_if<PseudoOutput>(&outcome)) {
      TestSuite suite;
      suite.problem_id = id;
      suite.cases.push_back({"", out->value, out->confidence});
      suite.provenance = pool_provenance(tag, options.frontier_tag);
      suite.pool_size = static_cast<std::int64_t>(answers.size());
      result.suites.push_back(std::move(suite));
    } else {
      result.excluded.push_back({id, to_string(std::get<NoConsensus>(outcome).reason)});
    }
  }
  return result;
}

VoteStageResult stage_gold(const std::vector<Problem>& problems) {
  VoteStageResult result;
  for (const auto& p : problems) {
    if (!p.gold_suite || p.gold_suite->cases.empty()) {
      result.excluded.push_back({p.id, "no_gold_suite"});
      continue;
    }
    TestSuite suite = *p.gold_suite;
    suite.problem_id = p.id;
    result.suites.push_back(std::move(suite));
  }
  return result;
}

std::vector<FeedbackScore> stage_verify(const std::vector<Problem>& problems,
                                        const std::vector<CandidateSolution>& solutions,
                                        const std::vector<TestSuite>& suites,
                                        const std::vector<ExecutionRecord>& records,
                                        const NormalizationPolicy& normalization,
                                        const ExtractionPolicy& extraction) {
  auto by_problem = index_problems(problems);
  auto by_suite = index_suites(suites);
  std::map<std::tuple<std::string, std::string, std::int64_t>, std::map<std::string, ExecutionRecord>> cells;
  for (const auto& r : records) cells[{r.problem_id, r.model_tag, r.sample_index}][r.input] = r;

  std::vector<FeedbackScore> out;
  for (const auto& s : solutions) {
    auto suite = by_suite.find(s.problem_id);
    if (suite == by_suite.end()) continue;
    auto problem = by_problem.find(s.problem_id);
    if (problem == by_problem.end())
      throw ValidationError("unknown_problem", s.problem_id, "solution refers to an unknown problem");
    if (problem->second->kind == ProblemKind::math) {
      out.push_back(score(s, *suite->second, extraction));
      continue;
    }
    auto it = cells.find({s.problem_id, s.model_tag, s.sample_index});
    static const std::map<std::string, ExecutionRecord> none;
    out.push_back(score(s.problem_id, s.sample_index, it == cells.end() ? none : it->second,
                        *suite->second, normalization));
  }
  return out;
}

std::vector<PreferencePair> stage_pairs(const std::vector<FeedbackScore>& scores,
                                        const std::vector<CandidateSolution>& solutions,
                                        const PairPolicy& policy) {
  if (auto e = validate_pair_policy(policy)) throw ValidationError("bad_policy", "pairs", *e);
  std::map<std::pair<std::string, std::int64_t>, const CandidateSolution*> text_of;
  for (const auto& s : solutions) text_of[{s.problem_id, s.sample_index}] = &s;
  std::vector<PreferencePair> out;
  auto ids = ordered_ids(scores, [](const auto& s) { return s.problem_id; });
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    std::vector<ScoredSolution> scored;
    for (const auto& sc : scores) {
      if (sc.problem_id != id) continue;
      auto t = text_of.find({sc.problem_id, sc.sample_index});
      if (t == text_of.end())
        throw MissingRecordsError("no solution text for " + id + "#" + std::to_string(sc.sample_index));
      scored.push_back({sc, t->second->text});
    }
    auto pairs = build_outcome_pairs(scored, policy);
    out.insert(out.end(), pairs.begin(), pairs.end());
  }
  return out;
}

PrefixStageResult stage_prefix_pairs(const std::vector<Problem>& problems,
                                     const std::vector<CandidateSolution>& solutions,
                                     const std::vector<TestSuite>& suites, Backend& backend,
                                     const RoundConfig& config) {
  auto by_problem = index_problems(problems);
  auto by_suite = index_suites(suites);
  const std::uint64_t seed = derive_seed(config, "complete");
  PrefixStageResult result;
  for (const auto& id : ordered_ids(solutions, [](const auto& s) { return s.problem_id; })) {
    auto suite_it = by_suite.find(id);
    auto problem_it = by_problem.find(id);
    if (suite_it == by_suite.end() || problem_it == by_problem.end()) continue;
    const Problem& problem = *problem_it->second;
    const TestSuite& suite = *suite_it->second;

    std::vector<SolutionPrefix> prefixes;
    std::vector<std::vector<CandidateSolution>> completions;
    for (const auto& s : solutions) {
      if (s.problem_id != id || count_steps(s.text) < 2) continue;
      for (auto& prefix : sample_prefixes(s, config.prefix)) {
        Decoding d = config.decoding;
        d.seed = stable_hash(id + "#" + std::to_string(s.sample_index) + "#" + std::to_string(prefix.step_count), seed);
        completions.push_back(
            sample_completions(problem, prefix, config.prefix.completions, d, backend, config.extraction));
        prefixes.push_back(std::move(prefix));
      }
    }

    std::vector<std::vector<FeedbackScore>> scores(prefixes.size());
    if (problem.kind == ProblemKind::math) {
      for (std::size_t i = 0; i < prefixes.size(); ++i)
        for (const auto& c : completions[i]) scores[i].push_back(score(c, suite, config.extraction));
    } else {
      std::vector<std::string> inputs;
      for (const auto& c : suite.cases) inputs.push_back(c.input);
      std::vector<ProgramRef> programs;
      for (std::size_t i = 0; i < prefixes.size(); ++i)
        for (const auto& c : completions[i])
          programs.push_back({id, static_cast<std::int64_t>(programs.size()), c.model_tag, c.payload});
      auto grid = execute_matrix(programs, inputs, config.runner, matrix_options(config));
      std::size_t row = 0;
      for (std::size_t i = 0; i < prefixes.size(); ++i)
        for (std::size_t j = 0; j < completions[i].size(); ++j, ++row) {
          std::map<std::string, ExecutionRecord> cells;
          for (std::size_t col = 0; col < inputs.size(); ++col) cells[inputs[col]] = grid.at(row, col);
          scores[i].push_back(score(id, static_cast<std::int64_t>(j), cells, suite, config.normalization));
        }
    }
    for (std::size_t i = 0; i < prefixes.size(); ++i)
      prefixes[i] = estimate_prefix_return(std::move(prefixes[i]), scores[i]);
    auto pairs = build_process_pairs(prefixes, config.pairs);
    result.pairs.insert(result.pairs.end(), pairs.begin(), pairs.end());
    result.prefixes.insert(result.prefixes.end(), prefixes.begin(), prefixes.end());
  }
  return result;
}

void write_pairs(const fs::path& path, const std::vector<PreferencePair>& pairs,
                 const std::string& digest) {
  write_jsonl(path, pairs, [&](const PreferencePair& p) {
    Json j = encode(p);
    if (!digest.empty()) j["run_digest"] = digest;
    return j;
  });
}

std::string run_digest(const RunManifest& manifest) {
  Json j = {{"round_index", manifest.round_index}, {"config", manifest.config}, {"inputs", manifest.inputs}};
  return sha256_digest(j.dump());
}

RoundResult run_round(const RoundConfig& config) {
  RoundResult result;
  result.run_dir = config.out_dir / std::to_string(config.round_index);
  const fs::path dir = result.run_dir;
  fs::create_directories(dir / "reports");
  fs::remove(dir / "FAILED");

  RunManifest& m = result.manifest;
  m.round_index = config.round_index;
  m.config = config.effective;
  m.started_at = timestamp_now();

  std::vector<std::string> written;
  auto emit = [&](const std::string& name, auto&&... args) {
    write_jsonl(dir / name, std::forward<decltype(args)>(args)...);
    written.push_back(name);
  };

  try {
    if (config.problems.empty()) throw ValidationError("bad_config", "run.problems", "no problem file configured");
    m.inputs[config.problems.string()] = file_digest(config.problems);
    for (const auto* spec : {&config.policy_backend, &config.frontier_backend})
      for (const auto* p : {&spec->path, &spec->script})
        if (!p->empty()) m.inputs[p->string()] = file_digest(*p);
    if (config.inputs_backend)
      for (const auto* p : {&config.inputs_backend->path, &config.inputs_backend->script})
        if (!p->empty()) m.inputs[p->string()] = file_digest(*p);

    auto all = read_jsonl<Problem>(config.problems);
    ensure(validate_problem_set(all));
    const auto problems = round_problems(all, config);
    emit("problems.jsonl", problems);

    const FeedbackSource feedback = feedback_for_round(config);
    auto policy = make_backend(config.policy_backend, config);
    m.model_tag = policy->tag();
    std::unique_ptr<Backend> frontier;
    std::unique_ptr<Backend> inputs_backend;
    auto frontier_backend = [&]() -> Backend& {
      if (!frontier) frontier = make_backend(config.frontier_backend, config);
      return *frontier;
    };
    auto input_source = [&]() -> Backend& {
      if (!config.inputs_backend) return frontier_backend();
      if (!inputs_backend) inputs_backend = make_backend(*config.inputs_backend, config);
      return *inputs_backend;
    };

    std::vector<Problem> math, code;
    for (const auto& p : problems) (p.kind == ProblemKind::math ? math : code).push_back(p);

    const std::int64_t policy_n = feedback == FeedbackSource::self ? std::max(config.k_sc, config.k_dpo) : config.k_dpo;
    auto solutions = stage_sample(problems, policy_n, config.decoding, derive_seed(config, "policy"), *policy,
                                  config.extraction, config.parallelism);
    emit("solutions.jsonl", solutions);

    const MatrixOptions mopts = matrix_options(config);
    VoteStageOptions vopts;
    vopts.policy = config.vote;
    vopts.frontier_tag = config.frontier_backend.tag;
    vopts.max_pool = config.k_sc;

    VoteStageResult votes;
    std::vector<ExecutionRecord> records;
    auto absorb = [&](VoteStageResult&& v) {
      votes.suites.insert(votes.suites.end(), v.suites.begin(), v.suites.end());
      votes.excluded.insert(votes.excluded.end(), v.excluded.begin(), v.excluded.end());
      votes.audit.insert(votes.audit.end(), v.audit.begin(), v.audit.end());
    };

    if (feedback == FeedbackSource::gold) {
      absorb(stage_gold(problems));
    } else {
      std::vector<CandidateSolution> pool = solutions;
      if (feedback == FeedbackSource::frontier) {
        pool = stage_sample(problems, config.k_sc, config.decoding, derive_seed(config, "frontier"),
                            frontier_backend(), config.extraction, config.parallelism);
        emit("frontier_solutions.jsonl", pool);
      }
      vopts.pool_tag = pool.empty() ? std::string() : pool.front().model_tag;
      std::vector<CandidateSolution> math_pool;
      for (const auto& s : pool)
        if (std::any_of(math.begin(), math.end(), [&](const Problem& p) { return p.id == s.problem_id; }))
          math_pool.push_back(s);
      absorb(stage_label(math_pool, vopts));

      if (!code.empty()) {
        auto generated = stage_gen_inputs(code, config.num_inputs, input_source(),
                                          load_template(config.template_dir, "test_inputs"), config.parallelism);
        emit("inputs.jsonl", generated, encode_inputs);
        std::map<std::string, std::vector<std::string>> inputs;
        for (const auto& g : generated) {
          if (g.empty) votes.excluded.push_back({g.problem_id, "empty_inputs"});
          else inputs[g.problem_id] = g.inputs;
        }
        std::vector<CandidateSolution> code_pool;
        for (const auto& s : pool)
          if (inputs.count(s.problem_id)) code_pool.push_back(s);
        records = stage_exec(code_pool, inputs, config.runner, mopts);
        absorb(stage_vote(records, vopts));
      }
    }
    emit("suites.jsonl", votes.suites);
    emit("excluded.jsonl", votes.excluded, encode_exclusion);
    emit("audit.jsonl", votes.audit, encode_audit);
    result.excluded = votes.excluded;

    std::vector<CandidateSolution> dpo;
    for (const auto& s : solutions)
      if (s.sample_index < config.k_dpo) dpo.push_back(s);

    if (feedback != FeedbackSource::self) {
      std::map<std::string, std::vector<std::string>> suite_inputs;
      for (const auto& suite : votes.suites)
        if (std::any_of(code.begin(), code.end(), [&](const Problem& p) { return p.id == suite.problem_id; }))
          for (const auto& c : suite.cases) suite_inputs[suite.problem_id].push_back(c.input);
      auto scored = stage_exec(dpo, suite_inputs, config.runner, mopts);
      records.insert(records.end(), scored.begin(), scored.end());
    }
    emit("records.jsonl", records);

    auto scores = stage_verify(problems, dpo, votes.suites, records, config.normalization, config.extraction);
    emit("scores.jsonl", scores);

    std::vector<PreferencePair> outcome, process;
    if (config.outcome_pairs) outcome = stage_pairs(scores, dpo, config.pairs);
    if (config.process_pairs) {
      auto pre = stage_prefix_pairs(problems, dpo, votes.suites, *policy, config);
      process = std::move(pre.pairs);
      emit("prefixes.jsonl", pre.prefixes);
    }
    auto pairs = merge_pairs(outcome, process);
    const std::string digest = run_digest(m);
    write_pairs(dir / "pairs.jsonl", pairs, digest);
    written.push_back("pairs.jsonl");
    result.pair_count = pairs.size();

    auto write_report = [&](const Report& report) {
      const std::string base = "reports/" + report.metric;
      write_text(dir / (base + ".json"), encode(report).dump(2) + "\n");
      write_text(dir / (base + ".txt"), render_table(report));
      written.push_back(base + ".json");
      written.push_back(base + ".txt");
    };
    if (!votes.suites.empty()) {
      Report stats = suite_stats(votes.suites);
      stats.provenance["suites.jsonl"] = file_digest(dir / "suites.jsonl");
      write_report(stats);
      Report hist = confidence_histogram(votes.suites, problems);
      hist.provenance["suites.jsonl"] = stats.provenance["suites.jsonl"];
      write_report(hist);
      if (feedback != FeedbackSource::gold) {
        auto predictions = predictions_from_suites(votes.suites, problems, config.normalization);
        if (!predictions.empty()) {
          Report curve = accumulated_accuracy_curve(predictions);
          curve.provenance["suites.jsonl"] = stats.provenance["suites.jsonl"];
          write_report(curve);
        }
      }
    }

    for (const auto& name : written) m.outputs[name] = file_digest(dir / name);
    m.finished_at = timestamp_now();
    write_text(dir / "manifest.json", encode(m).dump(2) + "\n");
  } catch (const std::exception& e) {
    for (const auto& name : written)
      if (fs::exists(dir / name)) m.outputs[name] = file_digest(dir / name);
    m.finished_at = timestamp_now();
    write_text(dir / "manifest.json", encode(m).dump(2) + "\n");
    write_text(dir / "FAILED", std::string(e.what()) + "\n");
    throw;
  }
  return result;
}

std::vector<std::string> verify_manifest(const fs::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw Error("io_error", "no manifest in " + run_dir.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("decode_error", "manifest.json", "invalid JSON");
  auto m = decode<RunManifest>(j);
  std::vector<std::string> bad;
  for (const auto& [name, digest] : m.outputs)
    if (!fs::exists(run_dir / name) || file_digest(run_dir / name) != digest) bad.push_back(name);
  for (const auto& [path, digest] : m.inputs)
    if (!fs::exists(path) || file_digest(path) != digest) bad.push_back(path);
  return bad;
}

}  // namespace ffg
