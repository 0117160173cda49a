// Copyright 2026 The predrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// predrace command-line front end.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "predrace/error.hpp"
#include "predrace/generator.hpp"
#include "predrace/oracle.hpp"
#include "predrace/relations.hpp"
#include "predrace/report.hpp"
#include "predrace/trace_io.hpp"
#include "predrace/vindication.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace predrace;

namespace {

struct Config {
  std::string trace_path;
  std::string deps_path;
  std::string relations = "HB,WCP,SDP,DC,WDP";
  bool json_out = false;
  bool fast_path = false;
  bool vindicate = false;
  std::size_t max_vindications = 10;
  std::string witness_dir = ".";
  std::uint64_t seed = 1;
  std::vector<EventId> pair;
  std::string witness_path;
  std::size_t budget = kOracleBudget;
  GenOptions gen;
};

BranchDeps load_deps(const Config& c, const Trace& t) {
  return c.deps_path.empty() ? BranchDeps::conservative() : read_deps_file(c.deps_path, t);
}

RelationSet parse_relations(const std::string& text) {
  RelationSet set;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto r = parse_relation(item);
    if (!r) throw CLI::ValidationError("--relations", "unknown relation '" + item + "'");
    set.insert(*r);
  }
  if (set.empty()) throw CLI::ValidationError("--relations", "no relation given");
  return set;
}

std::optional<EventPair> pair_of(const Config& c, const Trace& t) {
  if (c.pair.empty()) return std::nullopt;
  for (EventId e : c.pair)
    if (e >= t.size()) throw Error(ErrorKind::BadIndex, e, "no such event");
  return EventPair{c.pair[0], c.pair[1]};
}

VindicationStatus status_of(Outcome o) {
  switch (o) {
    case Outcome::PredictableRace: return VindicationStatus::Verified;
    case Outcome::NoPredictableRace: return VindicationStatus::NoRace;
    case Outcome::DontKnow: return VindicationStatus::Unknown;
  }
  return VindicationStatus::Unknown;
}

// Per static race: the five earliest dynamic instances, then five random ones,
// until one is verified.
void vindicate(RaceReport& report, const Trace& trace, const BranchDeps& deps, const Config& c) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < report.races.size(); ++i) {
    const RaceRecord& r = report.races[i];
    if (r.relations.contains(RelationId::WDP) && !r.relations.contains(RelationId::SDP))
      groups[r.static_key].push_back(i);
  }
  if (groups.empty()) return;
  const ConstraintGraph graph = build_constraint_graph(trace, deps);
  std::mt19937_64 rng(c.seed);
  const std::string stem = fs::path(c.trace_path).stem().string();

  for (auto& [key, list] : groups) {
    const std::size_t early = std::min<std::size_t>(list.size(), c.max_vindications / 2 + c.max_vindications % 2);
    std::vector<std::size_t> order(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(early));
    std::vector<std::size_t> rest(list.begin() + static_cast<std::ptrdiff_t>(early), list.end());
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t i = 0; i < rest.size() && order.size() < c.max_vindications; ++i)
      order.push_back(rest[i]);

    for (std::size_t idx : order) {
      RaceRecord& r = report.races[idx];
      Vindication v = check_wdp_race(graph, r.e1, r.e2, trace, deps);
      r.vindication = status_of(v.outcome);
      if (v.outcome != Outcome::PredictableRace) continue;
      r.witness = v.witness;
      fs::path out = fs::path(c.witness_dir) /
                     (stem + "." + std::to_string(r.e1) + "-" + std::to_string(r.e2) + ".witness");
      fs::create_directories(c.witness_dir);
      std::ofstream f(out);
      f << "# witness for " << r.e1 << " " << r.e2 << " in " << c.trace_path << "\n"
        << serialize_witness(trace, v.witness);
      if (!f) throw std::runtime_error("cannot write " + out.string());
      std::cerr << "witness: " << out.string() << "\n";
      break;
    }
  }
}

int cmd_analyze(const Config& c) {
  Trace trace = read_trace_file(c.trace_path);
  BranchDeps deps = load_deps(c, trace);
  AnalysisOptions options;
  options.relations = parse_relations(c.relations);
  options.fast_path = c.fast_path;
  AnalysisResult result = analyze(trace, deps, options);
  RaceReport report = result.report(c.trace_path);
  if (c.vindicate) vindicate(report, trace, deps, c);
  std::cout << emit_report(report, c.json_out ? ReportFormat::Json : ReportFormat::Text);
  return 0;
}

int cmd_oracle(const Config& c) {
  Trace trace = read_trace_file(c.trace_path);
  BranchDeps deps = load_deps(c, trace);
  OracleResult r = has_predictable_race(trace, deps, pair_of(c, trace), c.budget);
  json out;
  out["trace"] = c.trace_path;
  out["has_race"] = r.has_race;
  out["racy_pairs"] = json::array();
  for (const auto& [p, w] : r.racy_pairs)
    out["racy_pairs"].push_back({{"e1", p.first}, {"e2", p.second}, {"witness", w}});
  out["has_deadlock"] = r.has_deadlock;
  if (r.has_deadlock) out["deadlock_witness"] = r.deadlock_witness;
  out["sequences"] = r.sequences;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_check(const Config& c) {
  Trace trace = read_trace_file(c.trace_path);
  BranchDeps deps = load_deps(c, trace);
  std::vector<EventId> seq = read_witness_file(c.witness_path, trace);
  Verdict v = check_predictable_trace(trace, seq, deps);
  if (!v.valid()) {
    std::cout << "Invalid: " << to_string(v.rule) << " rule at";
    for (EventId e : v.offending) std::cout << ' ' << e;
    std::cout << "\n";
    return 0;
  }
  if (auto p = pair_of(c, trace)) {
    auto at = std::find(seq.begin(), seq.end(), p->first);
    bool adjacent = at != seq.end() && ((at + 1 != seq.end() && at[1] == p->second) ||
                                        (at != seq.begin() && at[-1] == p->second));
    if (!trace.conflicts(p->first, p->second)) {
      std::cout << "Invalid: events " << p->first << " and " << p->second << " do not conflict\n";
      return 0;
    }
    if (!adjacent) {
      std::cout << "Invalid: events " << p->first << " and " << p->second << " are not consecutive\n";
      return 0;
    }
  }
  std::cout << "Valid\n";
  return 0;
}

int cmd_gen(const Config& c) {
  GenOptions g = c.gen;
  g.seed = c.seed;
  std::cout << serialize_trace(generate_trace(g));
  return 0;
}

int cmd_stats(const Config& c) {
  Trace trace = read_trace_file(c.trace_path);
  BranchDeps deps = load_deps(c, trace);
  std::map<std::string, std::size_t> ops;
  for (const Event& e : trace.events()) {
    std::string k = op_keyword(e.op);
    if (e.op == Op::Acquire || e.op == Op::Release) k = "acq/rel";
    ++ops[k];
  }
  std::vector<bool> mask = fast_path_filter(trace, deps);
  const auto skipped = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  json out;
  out["trace"] = c.trace_path;
  out["events"] = trace.size();
  out["analyzed_events"] = trace.size() - skipped;
  out["threads"] = trace.thread_count();
  out["locks"] = trace.lock_count();
  out["vars"] = trace.var_count();
  out["ops"] = ops;
  if (c.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "events " << trace.size() << " (analyzed " << trace.size() - skipped << ")\n"
              << "threads " << trace.thread_count() << ", locks " << trace.lock_count()
              << ", vars " << trace.var_count() << "\n";
    for (const auto& [k, n] : ops) std::cout << k << ": " << n << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive data race detection over recorded traces"};
  app.require_subcommand(1);
  Config c;

  auto add_deps = [&](CLI::App* s) {
    s->add_option("--deps", c.deps_path, "Branch dependence file")->check(CLI::ExistingFile);
  };
  auto add_pair = [&](CLI::App* s) {
    s->add_option("--pair", c.pair, "Event pair e1 e2")->expected(2);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Report races under each relation");
  analyze_cmd->add_option("trace", c.trace_path)->required()->check(CLI::ExistingFile);
  add_deps(analyze_cmd);
  analyze_cmd->add_option("--relations", c.relations, "Comma-separated relations");
  analyze_cmd->add_flag("--json", c.json_out, "JSON report");
  analyze_cmd->add_flag("--fast-path", c.fast_path, "Skip redundant events");
  analyze_cmd->add_flag("--vindicate", c.vindicate, "Verify WDP-only races");
  analyze_cmd->add_option("--max-vindications", c.max_vindications,
                          "Dynamic instances tried per static race");
  analyze_cmd->add_option("--witness-dir", c.witness_dir, "Where witnesses are written");
  analyze_cmd->add_option("--seed", c.seed, "Seed for instance sampling");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive search on a small trace");
  oracle_cmd->add_option("trace", c.trace_path)->required()->check(CLI::ExistingFile);
  add_deps(oracle_cmd);
  add_pair(oracle_cmd);
  oracle_cmd->add_option("--budget", c.budget, "Maximum trace size");

  auto* check_cmd = app.add_subcommand("check", "Check a reordered trace");
  check_cmd->add_option("trace", c.trace_path)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("witness", c.witness_path)->required()->check(CLI::ExistingFile);
  add_deps(check_cmd);
  add_pair(check_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "Print a random well-formed trace");
  gen_cmd->add_option("--threads", c.gen.threads)->check(CLI::Range(1u, 1000u));
  gen_cmd->add_option("--events", c.gen.events);
  gen_cmd->add_option("--locks", c.gen.locks);
  gen_cmd->add_option("--vars", c.gen.vars);
  gen_cmd->add_option("--branch-rate", c.gen.branch_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--atomic-rate", c.gen.atomic_rate)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_flag("--forks", c.gen.forks, "Start threads with fork, allow joins");
  gen_cmd->add_option("--seed", c.seed);

  auto* stats_cmd = app.add_subcommand("stats", "Event counts");
  stats_cmd->add_option("trace", c.trace_path)->required()->check(CLI::ExistingFile);
  add_deps(stats_cmd);
  stats_cmd->add_flag("--json", c.json_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(c);
    if (*oracle_cmd) return cmd_oracle(c);
    if (*check_cmd) return cmd_check(c);
    if (*gen_cmd) return cmd_gen(c);
    if (*stats_cmd) return cmd_stats(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InternalInvariant ? 2 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
