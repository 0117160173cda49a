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
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "predrace/trace.hpp"

namespace predrace {

inline constexpr std::size_t kOracleBudget = 14;

using EventPair = std::pair<EventId, EventId>;

struct OracleResult {
  bool has_race = false;
  /// Racy pair (lower index first) and one predictable trace ending with it.
  std::map<EventPair, std::vector<EventId>> racy_pairs;
  bool has_deadlock = false;
  std::vector<EventId> deadlock_witness;
  std::uint64_t sequences = 0;  // valid sequences visited
};

/// Calls visit on every predictable trace of `trace`, the empty one included.
/// Stops early when visit returns false. Throws Error(BudgetExceeded) above
/// `budget` events.
void enumerate_predictable(const Trace& trace, const BranchDeps& deps,
                           const std::function<bool(const std::vector<EventId>&)>& visit,
                           std::size_t budget = kOracleBudget);

/// Predictable races by brute force, optionally for one pair only. Deadlocks
/// are searched in the same pass.
OracleResult has_predictable_race(const Trace& trace, const BranchDeps& deps,
                                  std::optional<EventPair> pair = std::nullopt,
                                  std::size_t budget = kOracleBudget);

/// Some predictable trace leaves two or more threads each blocked on an
/// acquire of a lock held by the next.
bool has_predictable_deadlock(const Trace& trace, const BranchDeps& deps,
                              std::size_t budget = kOracleBudget);

/// Threads of a cyclic wait in the state after `seq`; empty if none.
std::vector<ThreadId> cyclic_wait(const Trace& trace, const std::vector<EventId>& seq);

}  // namespace predrace
