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

#include <algorithm>

#include "engine.hpp"

namespace predrace {

namespace detail {

Engine::Engine(RelationId id, const Trace& trace, const AnalysisOptions& options)
    : trace_(trace),
      options_(options),
      threads_(trace.thread_count()),
      vars_(static_cast<std::uint32_t>(trace.var_count())),
      locks_(static_cast<std::uint32_t>(trace.lock_count())),
      id_(id) {
  if (options.record_clocks) {
    log_.threads = threads_;
    log_.epoch.assign(trace.size(), 0);
    log_.snap.assign(trace.size() * threads_, 0);
  }
}

void Engine::record(EventId e, VectorClock::Value epoch, const VectorClock& snap) {
  if (log_.epoch.empty()) return;
  log_.epoch[e] = epoch;
  VectorClock::Value* row = log_.snap.data() + std::size_t{e} * threads_;
  for (std::size_t t = 0; t < threads_; ++t) row[t] = snap[t];
}

bool Engine::report(RaceSink& sink, EventId e2, const std::vector<RaceHit>& hits) const {
  if (hits.empty()) return false;
  // A prior write wins over a prior read, then the latest. Events dropped by
  // the fast path repeat an earlier access of the same kind, so this choice
  // does not depend on whether they were analyzed.
  auto rank = [&](const RaceHit& h) {
    return std::pair(h.kind != RaceKind::RdWr, h.e1);
  };
  const RaceHit* best = &hits.front();
  for (const RaceHit& h : hits)
    if (rank(h) > rank(*best)) best = &h;
  sink.report(id_, best->e1, e2, best->kind);
  return true;
}

}  // namespace detail

using detail::AccessTable;
using detail::Engine;
using detail::RaceSink;
using detail::StepContext;

struct Analyzer::Impl final : RaceSink {
  struct Frame {
    std::uint32_t lock;
    std::vector<std::uint32_t> reads, writes;
  };

  Impl(const Trace& t, const BranchDeps& d, AnalysisOptions o)
      : trace(t),
        deps(d),
        options(o),
        last(t.var_count(), t.thread_count()),
        frames(t.thread_count()) {
    if (options.fast_path) {
      mask = fast_path_filter(trace, deps);
      options.build_graph = false;
    }
    if (options.build_graph && options.relations.contains(RelationId::WDP))
      graph.emplace(trace.size());
    const RelationSet& rs = options.relations;
    if (rs.contains(RelationId::HB)) engines.push_back(detail::make_hb(trace, options));
    if (rs.contains(RelationId::WCP)) engines.push_back(detail::make_wcp(trace, options, false));
    if (rs.contains(RelationId::SDP)) engines.push_back(detail::make_wcp(trace, options, true));
    if (rs.contains(RelationId::DC)) engines.push_back(detail::make_dc(trace, options));
    if (rs.contains(RelationId::WDP))
      engines.push_back(detail::make_wdp(trace, options, graph ? &*graph : nullptr));
  }

  void report(RelationId r, EventId e1, EventId e2, RaceKind kind) override {
    // Every report names the current event as e2, so duplicates sit at the tail.
    auto it = std::find_if(records.begin() + step_begin, records.end(),
                           [&](const RaceRecord& rec) { return rec.e1 == e1; });
    if (it == records.end()) {
      RaceRecord rec;
      rec.e1 = e1;
      rec.e2 = e2;
      rec.kind = kind;
      records.push_back(std::move(rec));
      it = records.end() - 1;
    }
    it->relations.insert(r);
  }

  void step(EventId e) {
    if (!mask.empty() && mask[e]) return;
    ++analyzed;
    const Event& ev = trace[e];
    auto& stack = frames[ev.tid];
    std::vector<std::uint32_t> rs, ws;

    switch (ev.op) {
      case Op::Acquire: stack.push_back({ev.target, {}, {}}); break;
      case Op::Release: {
        Frame f = std::move(stack.back());
        stack.pop_back();
        rs = std::move(f.reads);
        ws = std::move(f.writes);
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        std::sort(ws.begin(), ws.end());
        ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
        break;
      }
      case Op::Read:
        for (Frame& f : stack) f.reads.push_back(ev.target);
        break;
      case Op::Write:
        for (Frame& f : stack) f.writes.push_back(ev.target);
        break;
      default: break;
    }

    StepContext ctx{trace, deps, last, e, ev, trace.lockset(e), rs, ws};
    step_begin = records.size();
    for (auto& engine : engines) engine->step(ctx, *this);
    std::sort(records.begin() + step_begin, records.end(),
              [](const RaceRecord& a, const RaceRecord& b) { return a.e1 < b.e1; });

    if (is_plain_access(ev.op)) {
      const std::size_t slot = std::size_t{ev.target} * last.threads + ev.tid;
      if (ev.op == Op::Read) {
        last.rd[slot] = e;
      } else {
        last.wr[slot] = e;
        last.last_write[ev.target] = e;
      }
    }
  }

  AnalysisResult finish() {
    AnalysisResult result;
    result.event_count = trace.size();
    result.analyzed_count = analyzed;
    result.relations = options.relations;
    result.redundant = std::move(mask);
    result.lamport = lamport_timestamps(trace);
    result.graph = std::move(graph);
    for (auto& engine : engines) result.clocks[static_cast<std::size_t>(engine->id())] = engine->take_log();

    DistanceIndex distance(result.lamport);
    for (RaceRecord& r : records) {
      r.var = trace.var_name(trace[r.e2].target);
      r.distance = distance.between(result.lamport[r.e1], result.lamport[r.e2]);
      r.static_key = std::minmax(trace.loc_of(r.e1), trace.loc_of(r.e2));
    }
    result.races = std::move(records);
    return result;
  }

  const Trace& trace;
  const BranchDeps& deps;
  AnalysisOptions options;
  AccessTable last;
  std::vector<std::vector<Frame>> frames;
  std::vector<bool> mask;
  std::optional<ConstraintGraph> graph;
  std::vector<std::unique_ptr<Engine>> engines;
  std::vector<RaceRecord> records;
  std::size_t step_begin = 0;
  std::size_t analyzed = 0;
};

Analyzer::Analyzer(const Trace& trace, const BranchDeps& deps, AnalysisOptions options)
    : impl_(std::make_unique<Impl>(trace, deps, options)) {}

Analyzer::~Analyzer() = default;

void Analyzer::step(EventId e) { impl_->step(e); }

AnalysisResult Analyzer::finish() { return impl_->finish(); }

AnalysisResult analyze(const Trace& trace, const BranchDeps& deps, const AnalysisOptions& options) {
  Analyzer analyzer(trace, deps, options);
  for (EventId e = 0; e < trace.size(); ++e) analyzer.step(e);
  return analyzer.finish();
}

bool AnalysisResult::ordered(const Trace& trace, RelationId r, EventId a, EventId b) const {
  if (a >= b) return false;
  if (trace[a].tid == trace[b].tid) return true;
  const ClockLog& log = clocks[static_cast<std::size_t>(r)];
  if (log.empty())
    throw Error(ErrorKind::InternalInvariant, Error::npos,
                std::string("no clocks recorded for ") + to_string(r));
  return log.epoch[a] <= log.at(b, trace[a].tid);
}

RaceReport AnalysisResult::report(const std::string& trace_name) const {
  RaceReport out;
  out.trace_name = trace_name;
  out.event_count = event_count;
  out.analyzed_count = analyzed_count;
  out.relations = relations;
  out.races = races;
  return out;
}

std::vector<std::pair<EventId, EventId>> race_pairs(const Trace& trace,
                                                    const AnalysisResult& result, RelationId r) {
  std::vector<std::pair<EventId, EventId>> out;
  for (EventId b = 0; b < trace.size(); ++b) {
    if (!is_plain_access(trace[b].op)) continue;
    for (EventId a = 0; a < b; ++a)
      if (trace.conflicts(a, b) && !trace.share_lock(a, b) && !result.ordered(trace, r, a, b))
        out.emplace_back(a, b);
  }
  return out;
}

namespace {

// Threads of the two most recent accesses from distinct threads, so "is there
// one by a thread other than t" is answered by one of them.
struct TwoThreads {
  ThreadId a = kNone, b = kNone;
  void note(ThreadId t) {
    if (t == a) return;
    b = a;
    a = t;
  }
  bool other_than(ThreadId t) const { return (a != kNone && a != t) || (b != kNone && b != t); }
};

}  // namespace

std::vector<bool> fast_path_filter(const Trace& trace, const BranchDeps& deps) {
  std::vector<bool> mask(trace.size(), false);
  const std::size_t threads = trace.thread_count();
  const std::size_t vars = trace.var_count();

  // An access that another thread later conflicts with may be the source of
  // a race repair, which orders it but not the thread's later accesses. It
  // ends the thread's epoch like a synchronization does.
  std::vector<bool> ends_epoch(trace.size(), false);
  {
    std::vector<TwoThreads> later_writes(vars), later_accesses(vars);
    for (EventId e = trace.size(); e-- > 0;) {
      const Event& ev = trace[e];
      if (ev.op != Op::Read && ev.op != Op::Write) continue;
      const bool is_write = ev.op == Op::Write;
      ends_epoch[e] = (is_write ? later_accesses : later_writes)[ev.target].other_than(ev.tid);
      later_accesses[ev.target].note(ev.tid);
      if (is_write) later_writes[ev.target].note(ev.tid);
    }
  }

  // Per thread: slots (var * 2 + is_write) accessed in the current epoch.
  std::vector<std::vector<std::uint32_t>> seen(threads);
  std::vector<std::vector<bool>> flag(threads);
  std::vector<bool> read_since_branch(threads, false);
  std::vector<bool> had_branch(threads, false);
  auto end_epoch = [&](ThreadId t) {
    for (std::uint32_t slot : seen[t]) flag[t][slot] = false;
    seen[t].clear();
  };

  for (EventId e = 0; e < trace.size(); ++e) {
    const Event& ev = trace[e];
    const ThreadId t = ev.tid;
    if (ev.op == Op::Read || ev.op == Op::Write) {
      auto& f = flag[t];
      if (f.empty()) f.assign(vars * 2, false);
      const std::uint32_t slot = ev.target * 2 + (ev.op == Op::Write ? 1 : 0);
      if (f[slot]) {
        mask[e] = true;
      } else {
        f[slot] = true;
        seen[t].push_back(slot);
      }
      if (ends_epoch[e]) end_epoch(t);
    } else if (ev.op == Op::Branch) {
      if (!deps.precise() && had_branch[t] && !read_since_branch[t]) mask[e] = true;
      had_branch[t] = true;
      read_since_branch[t] = false;
    } else {
      end_epoch(t);
    }
    if (reads(ev.op)) read_since_branch[t] = true;
  }
  return mask;
}

std::vector<std::uint32_t> lamport_timestamps(const Trace& trace) {
  std::vector<std::uint32_t> ts(trace.size(), 0);
  std::vector<EventId> last_release(trace.lock_count(), kNone);
  std::vector<EventId> last_atomic(trace.var_count(), kNone);
  auto at = [&](EventId e) { return e == kNone ? 0u : ts[e]; };

  for (EventId e = 0; e < trace.size(); ++e) {
    const Event& ev = trace[e];
    std::uint32_t m = at(trace.po_prev(e));
    if (trace.po_prev(e) == kNone) m = std::max(m, at(trace.fork_of(ev.tid)));
    switch (ev.op) {
      case Op::Acquire: m = std::max(m, at(last_release[ev.target])); break;
      case Op::Release: last_release[ev.target] = e; break;
      case Op::Join: {
        const auto& child = trace.thread_events(ev.target);
        if (!child.empty()) m = std::max(m, ts[child.back()]);
        break;
      }
      case Op::AtomicRead:
      case Op::AtomicWrite:
      case Op::AtomicRmw:
        m = std::max(m, at(last_atomic[ev.target]));
        last_atomic[ev.target] = e;
        break;
      default: break;
    }
    ts[e] = m + 1;
  }
  return ts;
}

DistanceIndex::DistanceIndex(const std::vector<std::uint32_t>& ts) {
  std::uint32_t top = 0;
  for (std::uint32_t v : ts) top = std::max(top, v);
  prefix_.assign(std::size_t{top} + 1, 0);
  for (std::uint32_t v : ts) ++prefix_[v];
  for (std::size_t v = 1; v < prefix_.size(); ++v) prefix_[v] += prefix_[v - 1];
}

std::uint64_t DistanceIndex::between(std::uint32_t a, std::uint32_t b) const {
  if (a > b) std::swap(a, b);
  if (b <= a + 1 || prefix_.empty()) return 0;
  const std::size_t hi = std::min<std::size_t>(b - 1, prefix_.size() - 1);
  return hi < a ? 0 : prefix_[hi] - prefix_[a];
}

}  // namespace predrace
