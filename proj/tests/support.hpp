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

#include <set>
#include <string>
#include <utility>

#include "predrace/relations.hpp"
#include "predrace/trace.hpp"
#include "predrace/trace_io.hpp"

namespace predrace::test {

using PairSet = std::set<std::pair<EventId, EventId>>;

inline std::string fixture(const std::string& file) {
  return std::string(PREDRACE_FIXTURES) + "/" + file;
}

inline Trace load(const std::string& name) { return read_trace_file(fixture(name + ".trace")); }

/// Pairs reported by one relation in a default analysis.
inline PairSet reported(const Trace& trace, const BranchDeps& deps, RelationId r) {
  PairSet out;
  for (const RaceRecord& rc : analyze(trace, deps).races)
    if (rc.relations.contains(r)) out.emplace(rc.e1, rc.e2);
  return out;
}

/// Every conflicting pair the relation leaves unordered, without race repair.
inline PairSet unordered(const Trace& trace, const BranchDeps& deps, RelationId r) {
  AnalysisOptions o;
  o.relations = RelationSet{r};
  o.record_clocks = true;
  o.repair_races = false;
  const AnalysisResult result = analyze(trace, deps, o);
  const auto pairs = race_pairs(trace, result, r);
  return PairSet(pairs.begin(), pairs.end());
}

}  // namespace predrace::test
