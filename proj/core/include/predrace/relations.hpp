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

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "predrace/graph.hpp"
#include "predrace/relation.hpp"
#include "predrace/report.hpp"
#include "predrace/trace.hpp"
#include "predrace/vclock.hpp"

namespace predrace {

struct AnalysisOptions {
  RelationSet relations = RelationSet::all();
  /// Skip redundant events (see fast_path_filter).
  bool fast_path = false;
  /// Build the WDP constraint graph.
  bool build_graph = false;
  /// Keep every event's clock so that ordered() can be queried afterwards.
  bool record_clocks = false;
  /// After a race, add ordering so later races do not depend on it.
  bool repair_races = true;
};

/// Per-event clocks of one relation. epoch(e) is e's own-thread component and
/// a precedes b (different threads) iff epoch(a) <= snapshot(b)[tid(a)].
struct ClockLog {
  std::size_t threads = 0;
  std::vector<VectorClock::Value> epoch;
  std::vector<VectorClock::Value> snap;  // row-major, one row per event

  bool empty() const { return epoch.empty(); }
  VectorClock::Value at(EventId e, ThreadId t) const { return snap[e * threads + t]; }
};

struct AnalysisResult {
  std::vector<RaceRecord> races;  // sorted by (e2, e1)
  std::size_t event_count = 0;
  std::size_t analyzed_count = 0;
  RelationSet relations;
  std::vector<bool> redundant;           // fast-path mask, empty when disabled
  std::vector<std::uint32_t> lamport;    // per-event timestamps
  std::optional<ConstraintGraph> graph;  // WDP graph when requested
  std::array<ClockLog, kRelationCount> clocks;

  /// a precedes b under the relation united with program order. Requires
  /// record_clocks and no fast path.
  bool ordered(const Trace& trace, RelationId r, EventId a, EventId b) const;

  RaceReport report(const std::string& trace_name) const;
};

/// Streaming front end: feed events in trace order, then finish().
class Analyzer {
 public:
  Analyzer(const Trace& trace, const BranchDeps& deps, AnalysisOptions options = {});
  ~Analyzer();
  Analyzer(const Analyzer&) = delete;
  Analyzer& operator=(const Analyzer&) = delete;

  void step(EventId e);
  AnalysisResult finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

AnalysisResult analyze(const Trace& trace, const BranchDeps& deps,
                       const AnalysisOptions& options = {});

/// Marks reads/writes that repeat a same-thread, same-variable, same-mode
/// access with no synchronization in between, and branches with no read since
/// the thread's previous branch (conservative deps only). An access that some
/// later access by another thread conflicts with counts as synchronization.
std::vector<bool> fast_path_filter(const Trace& trace, const BranchDeps& deps);

/// ts(e) = 1 + max(ts of e's program-order predecessor, ts of the release,
/// fork, joined-thread end or atomic access it synchronizes with).
std::vector<std::uint32_t> lamport_timestamps(const Trace& trace);

/// Counts events whose timestamp lies strictly between two given timestamps.
class DistanceIndex {
 public:
  explicit DistanceIndex(const std::vector<std::uint32_t>& ts);
  std::uint64_t between(std::uint32_t a, std::uint32_t b) const;

 private:
  std::vector<std::uint64_t> prefix_;
};

/// Every conflicting pair (a, b), a before b, with no common lock and not
/// ordered by the relation. Quadratic; meant for small traces.
std::vector<std::pair<EventId, EventId>> race_pairs(const Trace& trace,
                                                    const AnalysisResult& result, RelationId r);

}  // namespace predrace
