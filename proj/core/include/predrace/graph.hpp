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
#include <vector>

#include "predrace/trace.hpp"

namespace predrace {

enum class EdgeKind : std::uint8_t {
  PO,              // consecutive events of one thread
  CS,              // lock-protected release to dependent branch
  Br,              // atomic write to dependent branch
  RuleB,           // release to release
  Fork,            // fork to child start, child end to join
  RaceRepair,      // racing write to dependent branch
  Consecutive,     // added by vindication
  LastWriter,      // added by vindication
  LockSemantics,   // added by vindication
  MissingRelease,  // added by vindication
};

const char* to_string(EdgeKind kind);

struct Edge {
  EventId src;
  EventId dst;
  EdgeKind kind;
};

/// Event-node digraph of ordering constraints. Append-only.
class ConstraintGraph {
 public:
  ConstraintGraph() = default;
  explicit ConstraintGraph(std::size_t nodes) : nodes_(nodes) {}

  std::size_t node_count() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  void add_edge(EventId src, EventId dst, EdgeKind kind) { edges_.push_back({src, dst, kind}); }

  /// Nodes reachable from `src` by a path of length >= 1.
  std::vector<bool> reachable_from(EventId src) const;

  /// One edge per line: `src -> dst kind`.
  std::string dump() const;

 private:
  std::size_t nodes_ = 0;
  std::vector<Edge> edges_;
};

}  // namespace predrace
