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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "predrace/error.hpp"

namespace predrace {

using ThreadId = std::uint32_t;
using EventId = std::uint32_t;

inline constexpr EventId kNone = 0xffffffffu;

enum class Op : std::uint8_t {
  Write,
  Read,
  Acquire,
  Release,
  Branch,
  Fork,
  Join,
  AtomicRead,
  AtomicWrite,
  AtomicRmw,
};

const char* op_keyword(Op op);

inline bool is_plain_access(Op op) { return op == Op::Read || op == Op::Write; }
inline bool is_atomic(Op op) {
  return op == Op::AtomicRead || op == Op::AtomicWrite || op == Op::AtomicRmw;
}
inline bool has_var(Op op) { return is_plain_access(op) || is_atomic(op); }
inline bool has_lock(Op op) { return op == Op::Acquire || op == Op::Release; }
inline bool has_thread(Op op) { return op == Op::Fork || op == Op::Join; }
// Atomic reads and read-modify-writes count as reads for last-writer purposes.
inline bool reads(Op op) {
  return op == Op::Read || op == Op::AtomicRead || op == Op::AtomicRmw;
}
inline bool writes(Op op) {
  return op == Op::Write || op == Op::AtomicWrite || op == Op::AtomicRmw;
}

struct Event {
  EventId index = 0;
  ThreadId tid = 0;
  Op op = Op::Branch;
  std::uint32_t target = 0;  // variable, lock or child thread, depending on op
  std::uint32_t loc = 0;     // interned static location
};

class Trace;

/// Appends events and interns names. build() validates and freezes.
class TraceBuilder {
 public:
  ThreadId thread(std::string_view name);
  std::uint32_t var(std::string_view name);
  std::uint32_t lock(std::string_view name);
  std::uint32_t loc(std::string_view text);

  /// Adds an event; an empty loc means the rendered op text.
  EventId add(ThreadId tid, Op op, std::uint32_t target, std::string_view loc = {});
  /// Convenience form: add("T0", Op::Write, "x").
  EventId add(std::string_view thread_name, Op op, std::string_view operand = {},
              std::string_view loc = {});

  std::size_t size() const;

  Trace build();

 private:
  struct Names {
    std::vector<std::string> list;
    std::unordered_map<std::string, std::uint32_t> index;
    std::uint32_t intern(std::string_view s);
  };
  Names threads_, vars_, locks_, locs_;
  std::unordered_map<std::uint64_t, std::uint32_t> default_loc_;
  std::vector<Event> events_;

  friend class Trace;
};

/// A validated execution trace. Immutable once built.
class Trace {
 public:
  Trace() = default;

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](EventId e) const { return events_[e]; }
  std::span<const Event> events() const { return events_; }

  std::size_t thread_count() const { return threads_.size(); }
  std::size_t var_count() const { return vars_.size(); }
  std::size_t lock_count() const { return locks_.size(); }
  const std::string& thread_name(ThreadId t) const { return threads_[t]; }
  const std::string& var_name(std::uint32_t x) const { return vars_[x]; }
  const std::string& lock_name(std::uint32_t m) const { return locks_[m]; }
  const std::string& loc_name(std::uint32_t l) const { return locs_[l]; }
  const std::string& loc_of(EventId e) const { return locs_[events_[e].loc]; }

  /// Rendered op text, e.g. "wr x" or "fork T1".
  std::string render(EventId e) const;

  /// Last same-variable write before a read in trace order, or kNone.
  EventId last_writer(EventId read) const { return last_writer_[read]; }
  /// Matching release of an acquire or acquire of a release; kNone if the
  /// critical section is never closed.
  EventId matching(EventId e) const { return matching_[e]; }
  /// Acquires of every critical section containing e, outermost first. An
  /// acquire and its release both lie inside their own critical section.
  std::span<const EventId> enclosing(EventId e) const;
  /// Locks held by e's thread at e (the locks of enclosing(e)).
  std::span<const std::uint32_t> lockset(EventId e) const;
  bool share_lock(EventId a, EventId b) const;

  const std::vector<EventId>& thread_events(ThreadId t) const { return per_thread_[t]; }
  std::uint32_t thread_pos(EventId e) const { return thread_pos_[e]; }
  EventId po_prev(EventId e) const;
  EventId po_next(EventId e) const;
  bool po_before(EventId a, EventId b) const {
    return a < b && events_[a].tid == events_[b].tid;
  }

  EventId fork_of(ThreadId child) const { return fork_of_[child]; }
  EventId join_of(ThreadId child) const { return join_of_[child]; }

  /// Plain accesses to one variable by different threads, at least one a write.
  bool conflicts(EventId a, EventId b) const;

  /// All (acquire, release) pairs; open critical sections are omitted.
  std::vector<std::pair<EventId, EventId>> cs_pairs() const;

 private:
  friend class TraceBuilder;
  friend void validate(Trace& trace);

  std::vector<Event> events_;
  std::vector<std::string> threads_, vars_, locks_, locs_;

  std::vector<EventId> last_writer_;
  std::vector<EventId> matching_;
  std::vector<std::uint32_t> segment_;
  std::vector<std::uint32_t> seg_offset_;
  std::vector<EventId> seg_acquires_;
  std::vector<std::uint32_t> seg_locks_;
  std::vector<std::vector<EventId>> per_thread_;
  std::vector<std::uint32_t> thread_pos_;
  std::vector<EventId> fork_of_, join_of_;
};

/// Checks well-formedness and fills the derived tables. Throws
/// Error(WellFormedness) naming the first offending event.
void validate(Trace& trace);

/// Read/branch dependence. Conservative mode makes every branch depend on all
/// earlier reads of its thread; precise mode overrides listed branches.
class BranchDeps {
 public:
  BranchDeps() = default;
  static BranchDeps conservative() { return BranchDeps(); }

  bool precise() const { return precise_; }
  /// Marks the deps as precise and sets the reads a branch depends on.
  void set(EventId branch, std::vector<EventId> reads);
  bool listed(EventId branch) const { return map_.count(branch) != 0; }
  const std::vector<EventId>* reads_of(EventId branch) const;

  /// brDepsOn(b, r): r is a read PO-before b that b depends on.
  bool depends(const Trace& trace, EventId branch, EventId read) const;

  const std::unordered_map<EventId, std::vector<EventId>>& entries() const { return map_; }

 private:
  bool precise_ = false;
  std::unordered_map<EventId, std::vector<EventId>> map_;
};

/// Events of S that are causal per the recursive reading of the causal-event
/// definition: reads feeding a branch in S, writes that are the last writer of
/// a causal read in S, and reads program-ordered before a causal write in S.
/// `in_set` is indexed by event id.
std::vector<bool> causal_closure(const Trace& trace, const std::vector<bool>& in_set,
                                 const BranchDeps& deps);

bool is_causal(const Trace& trace, const std::vector<EventId>& set, EventId e,
               const BranchDeps& deps);

enum class Rule { None, PO, LW, LS };
const char* to_string(Rule rule);

struct Verdict {
  Rule rule = Rule::None;
  std::vector<EventId> offending;
  bool valid() const { return rule == Rule::None; }
};

/// Decides whether `reordered` is a predictable trace of `trace`. Fork and join
/// constraints are reported under the PO rule.
Verdict check_predictable_trace(const Trace& trace, const std::vector<EventId>& reordered,
                                const BranchDeps& deps);

}  // namespace predrace
