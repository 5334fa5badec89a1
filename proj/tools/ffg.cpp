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

// ffg: command-line front end. `run` executes a whole round; the other
// subcommands run one stage each over JSON Lines files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffg/codec.hpp"
#include "ffg/config.hpp"
#include "ffg/digest.hpp"
#include "ffg/errors.hpp"
#include "ffg/pipeline.hpp"
#include "ffg/reports.hpp"
#include "ffg/select.hpp"

namespace fs = std::filesystem;
using namespace ffg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitBudget = 4;

struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", file, "round configuration (INI)");
    cmd->add_option("--set", sets, "override, section.key=value")->take_all();
  }

  RoundConfig load() const {
    std::map<std::string, std::string> overrides;
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ValidationError("bad_override", s, "expected section.key=value");
      overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (file.empty()) return config_from_values(overrides, fs::current_path());
    return load_config(file, overrides);
  }
};

std::vector<Json> read_json_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ValidationError("decode_error", path.filename().string() + ":" + std::to_string(lineno),
                            "expected a JSON object");
    out.push_back(std::move(j));
  }
  return out;
}

std::string string_field(const Json& j, const char* key, const fs::path& file) {
  if (!j.contains(key) || !j[key].is_string())
    throw ValidationError("decode_error", file.filename().string(), std::string("missing string field ") + key);
  return j[key].get<std::string>();
}

std::map<std::string, std::vector<std::string>> read_inputs(const fs::path& path) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& j : read_json_lines(path)) {
    if (j.value("empty", false)) continue;
    if (!j.contains("inputs") || !j["inputs"].is_array())
      throw ValidationError("decode_error", path.filename().string(), "missing inputs array");
    std::vector<std::string> inputs;
    for (const auto& item : j["inputs"])
      if (item.is_string()) inputs.push_back(item.get<std::string>());
    out[string_field(j, "problem_id", path)] = std::move(inputs);
  }
  return out;
}

Backend& backend_for(const RoundConfig& config, const std::string& role, std::unique_ptr<Backend>& holder) {
  if (role == "policy") holder = make_backend(config.policy_backend, config);
  else if (role == "frontier") holder = make_backend(config.frontier_backend, config);
  else if (role == "inputs")
    holder = make_backend(config.inputs_backend ? *config.inputs_backend : config.frontier_backend, config);
  else throw ValidationError("bad_role", "--role", "expected policy, frontier or inputs");
  return *holder;
}

VotePolicy named_vote_policy(const std::string& name, const RoundConfig& config) {
  if (name == "config") return config.vote;
  VotePolicy p;
  if (name == "default") return p;
  if (name == "first-seen" || name == "first_seen") {
    p.tie_policy = TiePolicy::first_seen;
    return p;
  }
  throw ValidationError("bad_policy", "--policy", "expected default, first-seen or config");
}

fs::path sibling(const fs::path& file, const std::string& name) {
  return file.has_parent_path() ? file.parent_path() / name : fs::path(name);
}

void print_report(const Report& report, const std::string& out_dir) {
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (report.metric + ".json")) << encode(report).dump(2) << "\n";
    std::ofstream(fs::path(out_dir) / (report.metric + ".txt")) << render_table(report);
  }
  std::cout << render_table(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-feedback preference data toolkit"};
  app.require_subcommand(1);

  // run
  ConfigArgs run_cfg;
  auto* run = app.add_subcommand("run", "run one full round");
  run_cfg.add(run);
  run->get_option("--config")->required();

  // gen-inputs
  ConfigArgs gen_cfg;
  std::string gen_problems, gen_out, gen_role = "inputs";
  std::optional<std::int64_t> gen_k;
  auto* gen = app.add_subcommand("gen-inputs", "synthesize test inputs for code problems");
  gen_cfg.add(gen);
  gen->add_option("--problems", gen_problems)->required();
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--k", gen_k, "inputs per problem");
  gen->add_option("--role", gen_role, "backend role from the config");

  // sample
  ConfigArgs sample_cfg;
  std::string sample_problems, sample_out, sample_role = "policy";
  std::optional<std::int64_t> sample_n;
  auto* sample = app.add_subcommand("sample", "sample solutions");
  sample_cfg.add(sample);
  sample->add_option("--problems", sample_problems)->required();
  sample->add_option("--out", sample_out)->required();
  sample->add_option("--n", sample_n, "solutions per problem");
  sample->add_option("--role", sample_role, "policy or frontier");

  // exec
  ConfigArgs exec_cfg;
  std::string exec_solutions, exec_inputs, exec_suites, exec_out;
  std::optional<std::int64_t> exec_limit;
  bool exec_append = false, exec_timing = false;
  auto* exec = app.add_subcommand("exec", "execute solutions on test inputs");
  exec_cfg.add(exec);
  exec->add_option("--solutions", exec_solutions)->required();
  auto* exec_in = exec->add_option("--inputs", exec_inputs, "inputs.jsonl from gen-inputs");
  exec->add_option("--suites", exec_suites, "run on the inputs of these suites")->excludes(exec_in);
  exec->add_option("--out", exec_out)->required();
  exec->add_option("--limit-index", exec_limit, "only solutions with sample_index below this");
  exec->add_flag("--append", exec_append, "append to --out");
  exec->add_flag("--timing", exec_timing, "include wall_time_used");

  // vote
  ConfigArgs vote_cfg;
  std::string vote_records, vote_solutions, vote_out, vote_policy = "default", vote_audit, vote_frontier;
  std::optional<std::string> vote_pool_tag;
  std::optional<std::int64_t> vote_max_pool;
  auto* vote = app.add_subcommand("vote", "build pseudo suites by majority vote");
  vote_cfg.add(vote);
  auto* vote_rec = vote->add_option("--records", vote_records, "records.jsonl (code)");
  vote->add_option("--solutions", vote_solutions, "solutions.jsonl (math labels)")->excludes(vote_rec);
  vote->add_option("--out", vote_out, "suites.jsonl");
  vote->add_option("--policy", vote_policy, "default, first-seen or config");
  vote->add_option("--audit", vote_audit, "write per-input vote audit");
  vote->add_option("--pool-tag", vote_pool_tag);
  vote->add_option("--frontier-tag", vote_frontier);
  vote->add_option("--max-pool", vote_max_pool);

  // verify
  ConfigArgs verify_cfg;
  std::string verify_problems, verify_solutions, verify_suites, verify_records, verify_out;
  std::optional<std::int64_t> verify_limit;
  auto* verify = app.add_subcommand("verify", "score solutions against suites");
  verify_cfg.add(verify);
  verify->add_option("--problems", verify_problems)->required();
  verify->add_option("--solutions", verify_solutions)->required();
  verify->add_option("--suites", verify_suites)->required();
  verify->add_option("--records", verify_records);
  verify->add_option("--out", verify_out)->required();
  verify->add_option("--limit-index", verify_limit);

  // pairs
  ConfigArgs pairs_cfg;
  std::string pairs_scores, pairs_solutions, pairs_out, pairs_digest;
  std::optional<std::string> pairs_eps, pairs_sigma;
  std::optional<std::int64_t> pairs_cap;
  bool pairs_dedupe = false;
  auto* pairs = app.add_subcommand("pairs", "build outcome preference pairs");
  pairs_cfg.add(pairs);
  pairs->add_option("--scores", pairs_scores)->required();
  pairs->add_option("--solutions", pairs_solutions, "defaults to solutions.jsonl next to --scores");
  pairs->add_option("--out", pairs_out, "defaults to pairs.jsonl next to --scores");
  pairs->add_option("--epsilon", pairs_eps);
  pairs->add_option("--sigma", pairs_sigma);
  pairs->add_option("--max-pairs", pairs_cap);
  pairs->add_flag("--dedupe", pairs_dedupe);
  pairs->add_option("--run-digest", pairs_digest);

  // prefix-pairs
  ConfigArgs pre_cfg;
  std::string pre_problems, pre_solutions, pre_suites, pre_out, pre_prefixes, pre_role = "policy", pre_digest;
  std::optional<std::string> pre_ratio, pre_eps, pre_sigma;
  std::optional<std::int64_t> pre_m, pre_fixed, pre_limit;
  auto* pre = app.add_subcommand("prefix-pairs", "build process preference pairs from prefixes");
  pre_cfg.add(pre);
  pre->add_option("--problems", pre_problems)->required();
  pre->add_option("--solutions", pre_solutions)->required();
  pre->add_option("--suites", pre_suites)->required();
  pre->add_option("--out", pre_out)->required();
  pre->add_option("--prefixes", pre_prefixes, "also write prefixes with returns");
  auto* ratio_opt = pre->add_option("--ratio", pre_ratio);
  pre->add_option("--fixed", pre_fixed)->excludes(ratio_opt);
  pre->add_option("--m", pre_m, "completions per prefix");
  pre->add_option("--epsilon", pre_eps);
  pre->add_option("--sigma", pre_sigma);
  pre->add_option("--limit-index", pre_limit);
  pre->add_option("--role", pre_role);
  pre->add_option("--run-digest", pre_digest);

  // select
  ConfigArgs sel_cfg;
  std::string sel_records, sel_solutions, sel_rewards, sel_problems, sel_out, sel_policy = "default";
  auto* sel = app.add_subcommand("select", "inference-time selection");
  sel_cfg.add(sel);
  auto* sel_rec = sel->add_option("--records", sel_records, "program pools (S.C.-P)");
  sel->add_option("--solutions", sel_solutions, "math answers (weighted best-of-N)")->excludes(sel_rec);
  sel->add_option("--rewards", sel_rewards, "jsonl of {problem_id, sample_index, score}");
  sel->add_option("--problems", sel_problems, "gold suites for the S.C.-T check");
  sel->add_option("--policy", sel_policy);
  sel->add_option("--out", sel_out)->required();

  // report
  ConfigArgs rep_cfg;
  std::string rep_metric, rep_suites, rep_problems, rep_oracles, rep_out_dir, rep_group = "difficulty";
  int rep_bins = 10;
  auto* rep = app.add_subcommand("report", "analysis reports");
  rep_cfg.add(rep);
  rep->add_option("--metric", rep_metric)
      ->required()
      ->check(CLI::IsMember({"pass-rate", "suite-stats", "confidence-curve", "confidence-hist"}));
  rep->add_option("--suites", rep_suites)->required();
  rep->add_option("--problems", rep_problems);
  rep->add_option("--oracles", rep_oracles, "jsonl of {problem_id, program}");
  rep->add_option("--out-dir", rep_out_dir, "write <metric>.json and .txt here");
  rep->add_option("--group-key", rep_group);
  rep->add_option("--bins", rep_bins);

  // verify-manifest
  std::string vm_dir;
  auto* vm = app.add_subcommand("verify-manifest", "recompute the digests listed in a manifest");
  vm->add_option("run_dir", vm_dir)->required();

  // presets
  auto* presets = app.add_subcommand("presets", "list configuration presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) {
      auto result = run_round(run_cfg.load());
      std::cout << "run directory: " << result.run_dir.string() << "\n"
                << "pairs: " << result.pair_count << "\n"
                << "excluded problems: " << result.excluded.size() << "\n";
    } else if (*gen) {
      auto config = gen_cfg.load();
      std::unique_ptr<Backend> holder;
      auto problems = read_jsonl<Problem>(gen_problems);
      auto generated = stage_gen_inputs(problems, gen_k.value_or(config.num_inputs),
                                        backend_for(config, gen_role, holder),
                                        load_template(config.template_dir, "test_inputs"), config.parallelism);
      write_jsonl(gen_out, generated, [](const GeneratedInputs& g) {
        return Json{{"problem_id", g.problem_id}, {"inputs", g.inputs}, {"empty", g.empty}};
      });
    } else if (*sample) {
      auto config = sample_cfg.load();
      std::unique_ptr<Backend> holder;
      auto problems = read_jsonl<Problem>(sample_problems);
      ensure(validate_problem_set(problems));
      auto out = stage_sample(round_problems(problems, config),
                              sample_n.value_or(sample_role == "frontier" ? config.k_sc : config.k_dpo),
                              config.decoding, derive_seed(config, sample_role),
                              backend_for(config, sample_role, holder), config.extraction, config.parallelism);
      write_jsonl(sample_out, out);
    } else if (*exec) {
      auto config = exec_cfg.load();
      auto solutions = read_jsonl<CandidateSolution>(exec_solutions);
      if (exec_limit)
        std::erase_if(solutions, [&](const auto& s) { return s.sample_index >= *exec_limit; });
      std::map<std::string, std::vector<std::string>> inputs;
      if (!exec_inputs.empty()) {
        inputs = read_inputs(exec_inputs);
      } else if (!exec_suites.empty()) {
        for (const auto& suite : read_jsonl<TestSuite>(exec_suites))
          for (const auto& c : suite.cases) inputs[suite.problem_id].push_back(c.input);
      } else {
        throw ValidationError("missing_option", "exec", "one of --inputs or --suites is required");
      }
      std::erase_if(solutions, [&](const auto& s) { return !inputs.count(s.problem_id); });
      auto records = stage_exec(solutions, inputs, config.runner, matrix_options(config));
      if (exec_append) {
        auto existing = read_jsonl<ExecutionRecord>(exec_out);
        existing.insert(existing.end(), records.begin(), records.end());
        records = std::move(existing);
      }
      write_jsonl(exec_out, records, [&](const ExecutionRecord& r) { return encode(r, exec_timing); });
    } else if (*vote) {
      auto config = vote_cfg.load();
      VoteStageOptions opts;
      opts.policy = named_vote_policy(vote_policy, config);
      opts.pool_tag = vote_pool_tag;
      opts.frontier_tag = vote_frontier.empty() ? config.frontier_backend.tag : vote_frontier;
      opts.max_pool = vote_max_pool;
      VoteStageResult result;
      fs::path source;
      if (!vote_records.empty()) {
        source = vote_records;
        result = stage_vote(read_jsonl<ExecutionRecord>(vote_records), opts);
      } else if (!vote_solutions.empty()) {
        source = vote_solutions;
        result = stage_label(read_jsonl<CandidateSolution>(vote_solutions), opts);
      } else {
        throw ValidationError("missing_option", "vote", "one of --records or --solutions is required");
      }
      write_jsonl(vote_out.empty() ? sibling(source, "suites.jsonl") : fs::path(vote_out), result.suites);
      if (!vote_audit.empty())
        write_jsonl(vote_audit, result.audit, [](const VoteAudit& a) {
          Json counts = Json::array();
          for (const auto& [value, n] : a.tally.counts) counts.push_back({{"value", value}, {"count", n}});
          Json j = {{"problem_id", a.problem_id}, {"input", a.input}, {"candidates", counts},
                    {"failures", a.tally.failures}};
          if (const auto* o = std::get_if<PseudoOutput>(&a.outcome)) {
            j["outcome"] = "pseudo_output";
            j["value"] = o->value;
            j["confidence"] = encode(o->confidence);
          } else {
            j["outcome"] = to_string(std::get<NoConsensus>(a.outcome).reason);
          }
          return j;
        });
      for (const auto& e : result.excluded) std::cerr << "excluded " << e.problem_id << ": " << e.reason << "\n";
    } else if (*verify) {
      auto config = verify_cfg.load();
      auto solutions = read_jsonl<CandidateSolution>(verify_solutions);
      if (verify_limit)
        std::erase_if(solutions, [&](const auto& s) { return s.sample_index >= *verify_limit; });
      std::vector<ExecutionRecord> records;
      if (!verify_records.empty()) records = read_jsonl<ExecutionRecord>(verify_records);
      auto scores = stage_verify(read_jsonl<Problem>(verify_problems), solutions, read_jsonl<TestSuite>(verify_suites),
                                 records, config.normalization, config.extraction);
      write_jsonl(verify_out, scores);
    } else if (*pairs) {
      auto config = pairs_cfg.load();
      PairPolicy policy = config.pairs;
      if (pairs_eps) {
        auto r = Rational::parse(*pairs_eps);
        if (!r) throw ValidationError("bad_option", "--epsilon", "not a number");
        policy.epsilon = *r;
      }
      if (pairs_sigma) {
        auto r = Rational::parse(*pairs_sigma);
        if (!r) throw ValidationError("bad_option", "--sigma", "not a number");
        policy.sigma = *r;
      }
      if (pairs_cap) policy.max_pairs_per_problem = *pairs_cap;
      if (pairs_dedupe) policy.dedupe = true;
      fs::path scores_path = pairs_scores;
      auto solutions = read_jsonl<CandidateSolution>(
          pairs_solutions.empty() ? sibling(scores_path, "solutions.jsonl") : fs::path(pairs_solutions));
      auto out = stage_pairs(read_jsonl<FeedbackScore>(scores_path), solutions, policy);
      write_pairs(pairs_out.empty() ? sibling(scores_path, "pairs.jsonl") : fs::path(pairs_out), out, pairs_digest);
      std::cout << "pairs: " << out.size() << "\n";
    } else if (*pre) {
      auto config = pre_cfg.load();
      if (pre_ratio) {
        auto r = Rational::parse(*pre_ratio);
        if (!r) throw ValidationError("bad_option", "--ratio", "not a number");
        config.prefix.mode = PrefixMode::ratio;
        config.prefix.ratio = *r;
      }
      if (pre_fixed) {
        config.prefix.mode = PrefixMode::fixed;
        config.prefix.fixed_count = *pre_fixed;
      }
      if (pre_m) config.prefix.completions = *pre_m;
      if (pre_eps) {
        auto r = Rational::parse(*pre_eps);
        if (!r) throw ValidationError("bad_option", "--epsilon", "not a number");
        config.pairs.epsilon = *r;
      }
      if (pre_sigma) {
        auto r = Rational::parse(*pre_sigma);
        if (!r) throw ValidationError("bad_option", "--sigma", "not a number");
        config.pairs.sigma = *r;
      }
      if (auto e = validate_prefix_policy(config.prefix)) throw ValidationError("bad_policy", "prefix", *e);
      if (auto e = validate_pair_policy(config.pairs)) throw ValidationError("bad_policy", "pairs", *e);
      auto solutions = read_jsonl<CandidateSolution>(pre_solutions);
      if (pre_limit) std::erase_if(solutions, [&](const auto& s) { return s.sample_index >= *pre_limit; });
      std::unique_ptr<Backend> holder;
      auto result = stage_prefix_pairs(read_jsonl<Problem>(pre_problems), solutions,
                                       read_jsonl<TestSuite>(pre_suites), backend_for(config, pre_role, holder),
                                       config);
      write_pairs(pre_out, result.pairs, pre_digest);
      if (!pre_prefixes.empty()) write_jsonl(pre_prefixes, result.prefixes);
      std::cout << "prefixes: " << result.prefixes.size() << "\npairs: " << result.pairs.size() << "\n";
    } else if (*sel) {
      auto config = sel_cfg.load();
      const VotePolicy policy = named_vote_policy(sel_policy, config);
      std::vector<Json> lines;
      if (!sel_records.empty()) {
        std::map<std::string, const Problem*> gold;
        std::vector<Problem> problems;
        if (!sel_problems.empty()) problems = read_jsonl<Problem>(sel_problems);
        for (const auto& p : problems) gold[p.id] = &p;
        auto records = read_jsonl<ExecutionRecord>(sel_records);
        VoteStageOptions opts;
        opts.policy = policy;
        auto votes = stage_vote(records, opts);
        std::map<std::string, const TestSuite*> pseudo;
        for (const auto& s : votes.suites) pseudo[s.problem_id] = &s;
        std::vector<std::string> ids;
        for (const auto& r : records)
          if (ids.empty() || ids.back() != r.problem_id) ids.push_back(r.problem_id);
        for (const auto& id : ids) {
          std::vector<ExecutionRecord> mine;
          for (const auto& r : records)
            if (r.problem_id == id) mine.push_back(r);
          std::map<std::int64_t, std::size_t> row_of;
          std::map<std::int64_t, std::size_t> col_of;
          for (const auto& r : mine) {
            row_of.emplace(r.sample_index, 0);
            col_of.emplace(r.case_index, 0);
          }
          std::size_t i = 0;
          for (auto& [_, v] : row_of) v = i++;
          i = 0;
          for (auto& [_, v] : col_of) v = i++;
          ExecutionGrid grid(row_of.size(), col_of.size());
          for (const auto& r : mine) grid.at(row_of[r.sample_index], col_of[r.case_index]) = r;
          Json line = {{"problem_id", id}};
          try {
            auto result = select_program_sc(grid, policy);
            line["chosen_sample_index"] =
                result.chosen_sample_index ? Json(*result.chosen_sample_index) : Json(nullptr);
            line["confidence"] = encode(result.confidence);
            line["matched_counts"] = result.matched_counts;
            line["consensus_inputs"] = result.consensus_inputs;
            auto g = gold.find(id);
            auto p = pseudo.find(id);
            if (g != gold.end() && g->second->gold_suite && p != pseudo.end()) {
              try {
                line["passed"] = verify_pseudo_outputs_sct(*p->second, *g->second->gold_suite, config.normalization);
              } catch (const InputMismatchError& e) {
                line["passed"] = nullptr;
                line["note"] = e.what();
              }
            }
          } catch (const EmptySuiteError&) {
            line["chosen_sample_index"] = nullptr;
            line["note"] = "no input reached consensus";
          }
          lines.push_back(std::move(line));
        }
      } else if (!sel_solutions.empty()) {
        auto solutions = read_jsonl<CandidateSolution>(sel_solutions);
        std::map<std::pair<std::string, std::int64_t>, double> rewards;
        if (!sel_rewards.empty())
          for (const auto& j : read_json_lines(sel_rewards)) {
            if (!j.contains("sample_index") || !j["sample_index"].is_number_integer() || !j.contains("score") ||
                !j["score"].is_number())
              throw ValidationError("decode_error", sel_rewards, "reward lines need sample_index and score");
            rewards[{string_field(j, "problem_id", sel_rewards), j["sample_index"].get<std::int64_t>()}] =
                j["score"].get<double>();
          }
        std::vector<std::string> ids;
        for (const auto& s : solutions)
          if (ids.empty() || ids.back() != s.problem_id) ids.push_back(s.problem_id);
        for (const auto& id : ids) {
          std::vector<std::optional<std::string>> answers;
          std::vector<double> scores;
          for (const auto& s : solutions) {
            if (s.problem_id != id) continue;
            answers.push_back(s.payload);
            auto r = rewards.find({id, s.sample_index});
            scores.push_back(sel_rewards.empty() ? 1.0 : (r == rewards.end() ? 0.0 : r->second));
          }
          auto best = weighted_best_of_n(answers, scores, policy.tie_policy);
          lines.push_back({{"problem_id", id}, {"answer", best ? Json(*best) : Json(nullptr)}});
        }
      } else {
        throw ValidationError("missing_option", "select", "one of --records or --solutions is required");
      }
      write_jsonl(sel_out, lines, [](const Json& j) { return j; });
    } else if (*rep) {
      auto config = rep_cfg.load();
      auto suites = read_jsonl<TestSuite>(rep_suites);
      std::vector<Problem> problems;
      if (!rep_problems.empty()) problems = read_jsonl<Problem>(rep_problems);
      Report report;
      if (rep_metric == "pass-rate") {
        if (rep_oracles.empty()) throw ValidationError("missing_option", "--oracles", "pass-rate needs oracle programs");
        std::map<std::string, std::string> oracles;
        for (const auto& j : read_json_lines(rep_oracles))
          oracles[string_field(j, "problem_id", rep_oracles)] = string_field(j, "program", rep_oracles);
        report = pass_rate_vs_oracle(suites, oracles, config.runner, config.normalization, matrix_options(config));
        report.provenance[rep_oracles] = file_digest(rep_oracles);
      } else if (rep_metric == "suite-stats") {
        report = suite_stats(suites);
      } else if (rep_metric == "confidence-curve") {
        if (problems.empty()) throw ValidationError("missing_option", "--problems", "confidence-curve needs gold problems");
        report = accumulated_accuracy_curve(predictions_from_suites(suites, problems, config.normalization));
      } else {
        report = confidence_histogram(suites, problems, rep_bins, rep_group);
      }
      report.provenance[rep_suites] = file_digest(rep_suites);
      if (!rep_problems.empty()) report.provenance[rep_problems] = file_digest(rep_problems);
      print_report(report, rep_out_dir);
    } else if (*vm) {
      auto bad = verify_manifest(vm_dir);
      for (const auto& name : bad) std::cout << "mismatch: " << name << "\n";
      if (!bad.empty()) return kExitValidation;
      std::cout << "ok\n";
    } else if (*presets) {
      for (const auto& name : preset_names()) {
        std::cout << name << "\n";
        const auto values = preset_values(name);
        for (const auto& [k, v] : *values) std::cout << "  " << k << " = " << v << "\n";
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error [" << e.code() << "]: " << e.what() << "\n";
    return kExitValidation;
  } catch (const BackendError& e) {
    std::cerr << "backend error [" << e.code() << "]: " << e.what() << "\n";
    return kExitBackend;
  } catch (const HarnessBudgetError& e) {
    std::cerr << "harness error [" << e.code() << "]: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
