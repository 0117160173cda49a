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

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "predrace/graph.hpp"
#include "predrace/trace.hpp"

namespace predrace {

/// Mutable copy of a constraint graph with adjacency lists. Duplicate edges
/// are dropped.
class WorkingGraph {
 public:
  explicit WorkingGraph(const ConstraintGraph& base);

  std::size_t node_count() const { return succ_.size(); }
  /// Returns false if the edge was already present.
  bool add_edge(EventId src, EventId dst, EdgeKind kind);
  bool has_edge(EventId src, EventId dst) const;
  const std::vector<EventId>& successors(EventId e) const { return succ_[e]; }
  const std::vector<EventId>& predecessors(EventId e) const { return pred_[e]; }
  /// Edges added since construction.
  const std::vector<Edge>& added() const { return added_; }

  /// Nodes with a path of length >= 1 to one of `targets`.
  std::vector<bool> reaching(const std::vector<EventId>& targets) const;
  /// Nodes reachable from `src`, src included.
  std::vector<bool> reachable_from(EventId src) const;
  /// Nodes that reach `dst`, dst included.
  std::vector<bool> reaching_reflexive(EventId dst) const;

 private:
  std::vector<std::vector<EventId>> succ_, pred_;
  std::unordered_set<std::uint64_t> edges_;
  std::vector<Edge> added_;
};

/// Reads that must keep their last writer in any witness for (e1, e2): those
/// causal among the events that reach e1 or e2, where the last writers of
/// causal reads are pulled in as well.
std::vector<bool> get_causal_reads(const WorkingGraph& g, EventId e1, EventId e2,
                                   const Trace& trace, const BranchDeps& deps);

/// Saturates g with consecutive, last-writer and lock constraints. Returns
/// false if an event that must precede the race lies on a cycle.
bool add_constraints(WorkingGraph& g, EventId e1, EventId e2, const Trace& trace,
                     const BranchDeps& deps);

struct Attempt {
  enum class Kind { Trace, MissingRelease, Failed };
  Kind kind = Kind::Failed;
  std::vector<EventId> events;    // the reordered trace, ending e1 e2
  EventId release = kNone;        // for MissingRelease
};

/// One backward pass building e1 e2 by prepending legal events.
Attempt attempt_to_construct_trace(const WorkingGraph& g, EventId e1, EventId e2,
                                   const Trace& trace, const BranchDeps& deps);

/// Retries with missing releases ordered before e1. Empty on failure.
std::vector<EventId> construct_reordered_trace(WorkingGraph& g, EventId e1, EventId e2,
                                               const Trace& trace, const BranchDeps& deps);

enum class Outcome { PredictableRace, NoPredictableRace, DontKnow };
const char* to_string(Outcome o);

struct Vindication {
  Outcome outcome = Outcome::DontKnow;
  std::vector<EventId> witness;  // set for PredictableRace
  std::size_t added_edges = 0;
};

/// WDP ordering graph without race repair, the input check_wdp_race expects.
ConstraintGraph build_constraint_graph(const Trace& trace, const BranchDeps& deps);

/// Decides a WDP race. A witness is checked before it is returned and a bad
/// one raises Error(InternalInvariant).
Vindication check_wdp_race(const ConstraintGraph& graph, EventId e1, EventId e2,
                           const Trace& trace, const BranchDeps& deps);

}  // namespace predrace
