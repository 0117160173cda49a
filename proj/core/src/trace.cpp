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

#include "predrace/trace.hpp"

#include <algorithm>

namespace predrace {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::WellFormedness: return "WellFormedness";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
  }
  return "?";
}

static std::string describe(ErrorKind kind, std::size_t where, const std::string& reason) {
  std::string s = to_string(kind);
  if (where != Error::npos) {
    s += kind == ErrorKind::Syntax ? " at line " : " at event ";
    s += std::to_string(where);
  }
  return s + ": " + reason;
}

Error::Error(ErrorKind kind, std::size_t where, const std::string& reason)
    : std::runtime_error(describe(kind, where, reason)),
      kind_(kind),
      where_(where),
      reason_(reason) {}

const char* op_keyword(Op op) {
  switch (op) {
    case Op::Write: return "wr";
    case Op::Read: return "rd";
    case Op::Acquire: return "acq";
    case Op::Release: return "rel";
    case Op::Branch: return "br";
    case Op::Fork: return "fork";
    case Op::Join: return "join";
    case Op::AtomicRead: return "ard";
    case Op::AtomicWrite: return "awr";
    case Op::AtomicRmw: return "rmw";
  }
  return "?";
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::None: return "none";
    case Rule::PO: return "PO";
    case Rule::LW: return "LW";
    case Rule::LS: return "LS";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// TraceBuilder

std::uint32_t TraceBuilder::Names::intern(std::string_view s) {
  auto it = index.find(std::string(s));
  if (it != index.end()) return it->second;
  auto id = static_cast<std::uint32_t>(list.size());
  list.emplace_back(s);
  index.emplace(list.back(), id);
  return id;
}

ThreadId TraceBuilder::thread(std::string_view name) { return threads_.intern(name); }
std::uint32_t TraceBuilder::var(std::string_view name) { return vars_.intern(name); }
std::uint32_t TraceBuilder::lock(std::string_view name) { return locks_.intern(name); }
std::uint32_t TraceBuilder::loc(std::string_view text) { return locs_.intern(text); }
std::size_t TraceBuilder::size() const { return events_.size(); }

EventId TraceBuilder::add(ThreadId tid, Op op, std::uint32_t target, std::string_view loc) {
  Event ev;
  ev.index = static_cast<EventId>(events_.size());
  ev.tid = tid;
  ev.op = op;
  ev.target = op == Op::Branch ? 0 : target;
  if (loc.empty()) {
    auto key = (static_cast<std::uint64_t>(op) << 32) | ev.target;
    auto it = default_loc_.find(key);
    if (it == default_loc_.end()) {
      std::string text = op_keyword(op);
      if (has_var(op)) text += " " + vars_.list[target];
      if (has_lock(op)) text += " " + locks_.list[target];
      if (has_thread(op)) text += " " + threads_.list[target];
      it = default_loc_.emplace(key, locs_.intern(text)).first;
    }
    ev.loc = it->second;
  } else {
    ev.loc = locs_.intern(loc);
  }
  events_.push_back(ev);
  return ev.index;
}

EventId TraceBuilder::add(std::string_view thread_name, Op op, std::string_view operand,
                          std::string_view loc) {
  ThreadId t = thread(thread_name);
  std::uint32_t target = 0;
  if (has_var(op)) target = var(operand);
  if (has_lock(op)) target = lock(operand);
  if (has_thread(op)) target = thread(operand);
  return add(t, op, target, loc);
}

Trace TraceBuilder::build() {
  Trace tr;
  tr.events_ = std::move(events_);
  tr.threads_ = std::move(threads_.list);
  tr.vars_ = std::move(vars_.list);
  tr.locks_ = std::move(locks_.list);
  tr.locs_ = std::move(locs_.list);
  *this = TraceBuilder();
  validate(tr);
  return tr;
}

// ---------------------------------------------------------------------------
// Trace

std::string Trace::render(EventId e) const {
  const Event& ev = events_[e];
  std::string s = op_keyword(ev.op);
  if (has_var(ev.op)) s += " " + vars_[ev.target];
  if (has_lock(ev.op)) s += " " + locks_[ev.target];
  if (has_thread(ev.op)) s += " " + threads_[ev.target];
  return s;
}

std::span<const EventId> Trace::enclosing(EventId e) const {
  std::uint32_t s = segment_[e];
  return {seg_acquires_.data() + seg_offset_[s], seg_offset_[s + 1] - seg_offset_[s]};
}

std::span<const std::uint32_t> Trace::lockset(EventId e) const {
  std::uint32_t s = segment_[e];
  return {seg_locks_.data() + seg_offset_[s], seg_offset_[s + 1] - seg_offset_[s]};
}

bool Trace::share_lock(EventId a, EventId b) const {
  for (auto m : lockset(a))
    for (auto n : lockset(b))
      if (m == n) return true;
  return false;
}

EventId Trace::po_prev(EventId e) const {
  std::uint32_t p = thread_pos_[e];
  return p == 0 ? kNone : per_thread_[events_[e].tid][p - 1];
}

EventId Trace::po_next(EventId e) const {
  const auto& list = per_thread_[events_[e].tid];
  std::uint32_t p = thread_pos_[e] + 1;
  return p < list.size() ? list[p] : kNone;
}

bool Trace::conflicts(EventId a, EventId b) const {
  const Event& x = events_[a];
  const Event& y = events_[b];
  return is_plain_access(x.op) && is_plain_access(y.op) && x.target == y.target &&
         x.tid != y.tid && (x.op == Op::Write || y.op == Op::Write);
}

std::vector<std::pair<EventId, EventId>> Trace::cs_pairs() const {
  std::vector<std::pair<EventId, EventId>> out;
  for (const Event& ev : events_)
    if (ev.op == Op::Acquire && matching_[ev.index] != kNone)
      out.emplace_back(ev.index, matching_[ev.index]);
  return out;
}

void validate(Trace& tr) {
  const std::size_t n = tr.events_.size();
  const std::size_t nt = tr.threads_.size();
  auto fail = [](EventId e, const std::string& why) {
    throw Error(ErrorKind::WellFormedness, e, why);
  };

  tr.last_writer_.assign(n, kNone);
  tr.matching_.assign(n, kNone);
  tr.segment_.assign(n, 0);
  tr.thread_pos_.assign(n, 0);
  tr.per_thread_.assign(nt, {});
  tr.fork_of_.assign(nt, kNone);
  tr.join_of_.assign(nt, kNone);
  tr.seg_offset_.assign(1, 0);
  tr.seg_acquires_.clear();
  tr.seg_locks_.clear();

  std::vector<EventId> holder(tr.locks_.size(), kNone);
  std::vector<EventId> last_write(tr.vars_.size(), kNone);
  std::vector<std::vector<EventId>> stack(nt);
  std::vector<std::uint32_t> seg(nt, 0);
  std::vector<bool> dirty(nt, true);

  auto open_segment = [&](ThreadId t) {
    for (EventId a : stack[t]) {
      tr.seg_acquires_.push_back(a);
      tr.seg_locks_.push_back(tr.events_[a].target);
    }
    tr.seg_offset_.push_back(static_cast<std::uint32_t>(tr.seg_acquires_.size()));
    seg[t] = static_cast<std::uint32_t>(tr.seg_offset_.size() - 2);
    dirty[t] = false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    Event& ev = tr.events_[i];
    const auto e = static_cast<EventId>(i);
    if (ev.index != e) fail(e, "event index out of order");
    const ThreadId t = ev.tid;
    if (t >= nt) fail(e, "unknown thread");
    if (tr.join_of_[t] != kNone)
      fail(e, "event of thread " + tr.threads_[t] + " after its join");

    tr.thread_pos_[e] = static_cast<std::uint32_t>(tr.per_thread_[t].size());
    tr.per_thread_[t].push_back(e);

    switch (ev.op) {
      case Op::Acquire: {
        const std::uint32_t m = ev.target;
        if (holder[m] != kNone) fail(e, "lock " + tr.locks_[m] + " already held");
        holder[m] = e;
        stack[t].push_back(e);
        dirty[t] = true;
        break;
      }
      case Op::Release: {
        const std::uint32_t m = ev.target;
        if (holder[m] == kNone || tr.events_[holder[m]].tid != t)
          fail(e, "lock " + tr.locks_[m] + " not held by " + tr.threads_[t]);
        if (stack[t].back() != holder[m])
          fail(e, "release of " + tr.locks_[m] + " is not well nested");
        tr.matching_[e] = holder[m];
        tr.matching_[holder[m]] = e;
        holder[m] = kNone;
        break;
      }
      case Op::Fork: {
        const ThreadId c = ev.target;
        if (c == t) fail(e, "thread forks itself");
        if (tr.fork_of_[c] != kNone) fail(e, "thread " + tr.threads_[c] + " forked twice");
        if (!tr.per_thread_[c].empty())
          fail(e, "thread " + tr.threads_[c] + " has events before its fork");
        tr.fork_of_[c] = e;
        break;
      }
      case Op::Join: {
        const ThreadId c = ev.target;
        if (c == t) fail(e, "thread joins itself");
        if (tr.join_of_[c] != kNone) fail(e, "thread " + tr.threads_[c] + " joined twice");
        tr.join_of_[c] = e;
        break;
      }
      default:
        break;
    }

    if (reads(ev.op)) tr.last_writer_[e] = last_write[ev.target];
    if (writes(ev.op)) last_write[ev.target] = e;

    if (dirty[t]) open_segment(t);
    tr.segment_[e] = seg[t];

    if (ev.op == Op::Release) {
      stack[t].pop_back();
      dirty[t] = true;
    }
  }
}

// ---------------------------------------------------------------------------
// Branch dependence

void BranchDeps::set(EventId branch, std::vector<EventId> reads_list) {
  precise_ = true;
  std::sort(reads_list.begin(), reads_list.end());
  reads_list.erase(std::unique(reads_list.begin(), reads_list.end()), reads_list.end());
  map_[branch] = std::move(reads_list);
}

const std::vector<EventId>* BranchDeps::reads_of(EventId branch) const {
  auto it = map_.find(branch);
  return it == map_.end() ? nullptr : &it->second;
}

bool BranchDeps::depends(const Trace& trace, EventId branch, EventId read) const {
  if (!trace.po_before(read, branch) || !reads(trace[read].op) ||
      trace[branch].op != Op::Branch)
    return false;
  if (const auto* list = reads_of(branch))
    return std::binary_search(list->begin(), list->end(), read);
  return true;
}

// ---------------------------------------------------------------------------
// Causality

std::vector<bool> causal_closure(const Trace& trace, const std::vector<bool>& in_set,
                                 const BranchDeps& deps) {
  const std::size_t n = trace.size();
  std::vector<bool> causal(n, false);
  // frontier[t]: every read of t before this thread position is causal
  std::vector<std::uint32_t> frontier(trace.thread_count(), 0);
  std::vector<EventId> work;

  auto mark = [&](EventId e) {
    if (!causal[e]) {
      causal[e] = true;
      work.push_back(e);
    }
  };
  auto advance = [&](ThreadId t, std::uint32_t pos) {
    const auto& list = trace.thread_events(t);
    for (std::uint32_t p = frontier[t]; p < pos; ++p)
      if (reads(trace[list[p]].op)) mark(list[p]);
    frontier[t] = std::max(frontier[t], pos);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<EventId>(i);
    if (!in_set[e] || trace[e].op != Op::Branch) continue;
    if (const auto* list = deps.reads_of(e)) {
      for (EventId r : *list) mark(r);
    } else {
      advance(trace[e].tid, trace.thread_pos(e));
    }
  }

  while (!work.empty()) {
    EventId e = work.back();
    work.pop_back();
    if (!in_set[e]) continue;
    const Event& ev = trace[e];
    if (reads(ev.op)) {
      EventId w = trace.last_writer(e);
      if (w != kNone) mark(w);
    }
    if (writes(ev.op)) advance(ev.tid, trace.thread_pos(e));
  }
  return causal;
}

bool is_causal(const Trace& trace, const std::vector<EventId>& set, EventId e,
               const BranchDeps& deps) {
  std::vector<bool> in_set(trace.size(), false);
  for (EventId x : set) in_set[x] = true;
  return causal_closure(trace, in_set, deps)[e];
}

// ---------------------------------------------------------------------------
// Predictable-trace checker

Verdict check_predictable_trace(const Trace& trace, const std::vector<EventId>& seq,
                                const BranchDeps& deps) {
  const std::size_t n = trace.size();
  std::vector<std::uint32_t> next(trace.thread_count(), 0);
  std::vector<bool> placed(n, false);

  for (EventId e : seq) {
    if (e >= n) return {Rule::PO, {e}};
    const Event& ev = trace[e];
    if (placed[e] || trace.thread_pos(e) != next[ev.tid]) return {Rule::PO, {e}};
    if (trace.thread_pos(e) == 0) {
      EventId f = trace.fork_of(ev.tid);
      if (f != kNone && !placed[f]) return {Rule::PO, {f, e}};
    }
    if (ev.op == Op::Join && next[ev.target] != trace.thread_events(ev.target).size())
      return {Rule::PO, {e}};
    placed[e] = true;
    ++next[ev.tid];
  }

  std::vector<EventId> holder(trace.lock_count(), kNone);
  for (EventId e : seq) {
    const Event& ev = trace[e];
    if (ev.op == Op::Acquire) {
      if (holder[ev.target] != kNone) return {Rule::LS, {holder[ev.target], e}};
      holder[ev.target] = e;
    } else if (ev.op == Op::Release) {
      holder[ev.target] = kNone;
    }
  }

  std::vector<bool> causal = causal_closure(trace, placed, deps);
  std::vector<EventId> last_write(trace.var_count(), kNone);
  for (EventId e : seq) {
    const Event& ev = trace[e];
    if (reads(ev.op) && causal[e] && last_write[ev.target] != trace.last_writer(e))
      return {Rule::LW, {e}};
    if (writes(ev.op)) last_write[ev.target] = e;
  }
  return {};
}

}  // namespace predrace
