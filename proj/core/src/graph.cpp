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

#include "predrace/graph.hpp"

#include <sstream>

namespace predrace {

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::PO: return "po";
    case EdgeKind::CS: return "cs";
    case EdgeKind::Br: return "br";
    case EdgeKind::RuleB: return "rule-b";
    case EdgeKind::Fork: return "fork";
    case EdgeKind::RaceRepair: return "race-repair";
    case EdgeKind::Consecutive: return "consecutive";
    case EdgeKind::LastWriter: return "lw";
    case EdgeKind::LockSemantics: return "ls";
    case EdgeKind::MissingRelease: return "missing-release";
  }
  return "?";
}

std::vector<bool> ConstraintGraph::reachable_from(EventId src) const {
  std::vector<std::vector<EventId>> out(nodes_);
  for (const Edge& e : edges_) out[e.src].push_back(e.dst);
  std::vector<bool> seen(nodes_, false);
  std::vector<EventId> stack(out[src].begin(), out[src].end());
  while (!stack.empty()) {
    EventId v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    for (EventId w : out[v])
      if (!seen[w]) stack.push_back(w);
  }
  return seen;
}

std::string ConstraintGraph::dump() const {
  std::ostringstream os;
  for (const Edge& e : edges_) os << e.src << " -> " << e.dst << ' ' << to_string(e.kind) << '\n';
  return os.str();
}

}  // namespace predrace
