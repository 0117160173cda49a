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


#include "predrace/oracle.hpp"

#include <algorithm>

#include "predrace/error.hpp"

namespace predrace {

namespace {

class Search {
 public:
  Search(const Trace& trace, const BranchDeps& deps,
         const std::function<bool(const std::vector<EventId>&)>& visit)
      : trace_(trace),
        deps_(deps),
        visit_(visit),
        next_(trace.thread_count(), 0),
        holder_(trace.lock_count(), kNone),
        placed_(trace.size(), false) {}

  void run() { dfs(); }

 private:
  bool enabled(ThreadId t) const {
    const auto& list = trace_.thread_events(t);
    if (next_[t] >= list.size()) return false;
    const EventId e = list[next_[t]];
    if (next_[t] == 0) {
      EventId f = trace_.fork_of(t);
      if (f != kNone && !placed_[f]) return false;
    }
    const Event& ev = trace_[e];
    if (ev.op == Op::Join && next_[ev.target] != trace_.thread_events(ev.target).size())
      return false;
    if (ev.op == Op::Acquire && holder_[ev.target] != kNone) return false;
    return true;
  }

  bool last_writers_ok() const {
    std::vector<bool> causal = causal_closure(trace_, placed_, deps_);
    std::vector<EventId> last(trace_.var_count(), kNone);
    for (EventId e : seq_) {
      const Event& ev = trace_[e];
      if (reads(ev.op) && causal[e] && last[ev.target] != trace_.last_writer(e)) return false;
      if (writes(ev.op)) last[ev.target] = e;
    }
    return true;
  }

  // Returns false once the visitor asks to stop.
  bool dfs() {
    if (!last_writers_ok()) return true;
    if (!visit_(seq_)) return false;
    for (ThreadId t = 0; t < trace_.thread_count(); ++t) {
      if (!enabled(t)) continue;
      const EventId e = trace_.thread_events(t)[next_[t]];
      const Event& ev = trace_[e];
      EventId saved_holder = kNone;
      if (has_lock(ev.op)) {
        saved_holder = holder_[ev.target];
        holder_[ev.target] = ev.op == Op::Acquire ? e : kNone;
      }
      placed_[e] = true;
      ++next_[t];
      seq_.push_back(e);
      bool go_on = dfs();
      seq_.pop_back();
      --next_[t];
      placed_[e] = false;
      if (has_lock(ev.op)) holder_[ev.target] = saved_holder;
      if (!go_on) return false;
    }
    return true;
  }

  const Trace& trace_;
  const BranchDeps& deps_;
  const std::function<bool(const std::vector<EventId>&)>& visit_;
  std::vector<std::uint32_t> next_;
  std::vector<EventId> holder_;
  std::vector<bool> placed_;
  std::vector<EventId> seq_;
};

}  // namespace

void enumerate_predictable(const Trace& trace, const BranchDeps& deps,
                           const std::function<bool(const std::vector<EventId>&)>& visit,
                           std::size_t budget) {
  if (trace.size() > budget)
    throw Error(ErrorKind::BudgetExceeded, Error::npos,
                "oracle limited to " + std::to_string(budget) + " events, trace has " +
                    std::to_string(trace.size()));
  Search(trace, deps, visit).run();
}

std::vector<ThreadId> cyclic_wait(const Trace& trace, const std::vector<EventId>& seq) {
  const std::size_t T = trace.thread_count();
  std::vector<std::uint32_t> next(T, 0);
  std::vector<ThreadId> holder(trace.lock_count(), kNone);
  for (EventId e : seq) {
    const Event& ev = trace[e];
    ++next[ev.tid];
    if (ev.op == Op::Acquire) holder[ev.target] = ev.tid;
    if (ev.op == Op::Release) holder[ev.target] = kNone;
  }
  // waits[t]: the thread holding the lock t blocks on
  std::vector<ThreadId> waits(T, kNone);
  for (ThreadId t = 0; t < T; ++t) {
    const auto& list = trace.thread_events(t);
    if (next[t] >= list.size()) continue;
    const Event& ev = trace[list[next[t]]];
    if (ev.op != Op::Acquire) continue;
    if (next[t] == 0 && trace.fork_of(t) != kNone &&
        std::find(seq.begin(), seq.end(), trace.fork_of(t)) == seq.end())
      continue;
    ThreadId h = holder[ev.target];
    if (h != kNone && h != t) waits[t] = h;
  }
  for (ThreadId start = 0; start < T; ++start) {
    // Walk at most T steps; a repeat means a cycle.
    std::vector<int> seen(T, -1);
    ThreadId t = start;
    for (int step = 0; t != kNone; ++step) {
      if (seen[t] >= 0) {
        std::vector<ThreadId> cycle;
        ThreadId u = t;
        do {
          cycle.push_back(u);
          u = waits[u];
        } while (u != t);
        std::sort(cycle.begin(), cycle.end());
        return cycle;
      }
      seen[t] = step;
      t = waits[t];
    }
  }
  return {};
}

OracleResult has_predictable_race(const Trace& trace, const BranchDeps& deps,
                                  std::optional<EventPair> pair, std::size_t budget) {
  if (pair && pair->first > pair->second) std::swap(pair->first, pair->second);
  OracleResult out;
  enumerate_predictable(
      trace, deps,
      [&](const std::vector<EventId>& seq) {
        ++out.sequences;
        const std::size_t k = seq.size();
        if (k >= 2 && trace.conflicts(seq[k - 2], seq[k - 1])) {
          EventPair p = std::minmax(seq[k - 2], seq[k - 1]);
          if (!pair || *pair == p) out.racy_pairs.try_emplace(p, seq);
        }
        if (!out.has_deadlock && !cyclic_wait(trace, seq).empty()) {
          out.has_deadlock = true;
          out.deadlock_witness = seq;
        }
        return true;
      },
      budget);
  out.has_race = !out.racy_pairs.empty();
  return out;
}

bool has_predictable_deadlock(const Trace& trace, const BranchDeps& deps, std::size_t budget) {
  bool found = false;
  enumerate_predictable(
      trace, deps,
      [&](const std::vector<EventId>& seq) {
        found = !cyclic_wait(trace, seq).empty();
        return !found;
      },
      budget);
  return found;
}

}  // namespace predrace
