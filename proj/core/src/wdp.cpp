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

// WDP: like DC but critical sections conflict only write-to-read, and the
// ordering from the writer's release lands on the first later branch that
// depends on the read rather than on the read itself. Races are judged with
// per-thread locksets, since same-lock accesses are not ordered.

#include <optional>

#include "engine.hpp"

namespace predrace::detail {

namespace {

struct Stamped {
  VectorClock clock;
  EventId src = kNone;
};

struct Pending {
  EventId read;
  VectorClock bound;
  std::vector<EventId> sources;
  EdgeKind kind;
};

class WdpEngine final : public Engine {
 public:
  WdpEngine(const Trace& trace, const AnalysisOptions& options, ConstraintGraph* graph)
      : Engine(RelationId::WDP, trace, options),
        graph_(graph),
        C_(threads_, VectorClock(threads_)),
        queues_(locks_),
        W_(std::size_t{vars_} * threads_, 0),
        R_(std::size_t{vars_} * threads_, 0),
        last_thread_(vars_, kNone),
        atomic_(vars_),
        pending_(threads_) {
    for (std::size_t t = 0; t < threads_; ++t) C_[t].set(t, 1);
  }

  void step(const StepContext& ctx, RaceSink& sink) override {
    const Event& ev = ctx.ev;
    const EventId e = ctx.e;
    const ThreadId t = ev.tid;
    VectorClock& C = C_[t];
    hits_.clear();

    if (graph_) {
      if (EventId p = trace_.po_prev(e); p != kNone) graph_->add_edge(p, e, EdgeKind::PO);
      else if (EventId f = trace_.fork_of(t); f != kNone) graph_->add_edge(f, e, EdgeKind::Fork);
    }

    switch (ev.op) {
      case Op::Acquire: acquire(t, ev.target); break;
      case Op::Release: release(e, t, ev.target, ctx.cs_writes); break;
      case Op::Fork: C_[ev.target].join(C); break;
      case Op::Join: {
        C.join(C_[ev.target]);
        const auto& child = trace_.thread_events(ev.target);
        if (graph_ && !child.empty()) graph_->add_edge(child.back(), e, EdgeKind::Fork);
        break;
      }
      case Op::Read: read(ctx); break;
      case Op::Write: write(ctx); break;
      case Op::Branch: branch(ctx); break;
      case Op::AtomicRead:
      case Op::AtomicWrite:
      case Op::AtomicRmw: {
        AtomicState& a = atomic_[ev.target];
        if (reads(ev.op) && a.thread != kNone && a.thread != t && !a.clock.leq(C))
          pending_[t].push_back({e, a.clock, {a.src}, EdgeKind::Br});
        if (writes(ev.op)) a = {C, e, t};
        break;
      }
    }

    record(e, C[t], C);
    if (!hits_.empty()) {
      report(sink, e, hits_);
      if (options_.repair_races && ev.op == Op::Read) {
        const EventId w = ctx.last.last_write[ev.target];
        for (const RaceHit& h : hits_) {
          if (h.e1 != w || last_wc_[ev.target].leq(C)) continue;
          pending_[t].push_back({e, last_wc_[ev.target], {w}, EdgeKind::RaceRepair});
          break;
        }
      }
    }

    if (is_plain_access(ev.op)) {
      const std::size_t slot = std::size_t{ev.target} * threads_ + t;
      if (ev.op == Op::Read) {
        R_[slot] = C[t];
      } else {
        W_[slot] = C[t];
        last_thread_[ev.target] = t;
        if (options_.repair_races) {
          if (last_wc_.empty()) last_wc_.resize(vars_);
          last_wc_[ev.target] = C;
        }
      }
    }
    C.increment(t);
  }

 private:
  struct LockQueues {
    std::vector<ClockQueue<VectorClock>> acq;
    std::vector<ClockQueue<Stamped>> rel;
  };

  struct AtomicState {
    VectorClock clock;  // clock of the last atomic write
    EventId src = kNone;
    ThreadId thread = kNone;
  };

  LockQueues& queues(std::uint32_t l) {
    auto& q = queues_[l];
    if (!q) {
      q = std::make_unique<LockQueues>();
      q->acq.resize(threads_ * threads_);
      q->rel.resize(threads_ * threads_);
    }
    return *q;
  }

  void acquire(ThreadId t, std::uint32_t l) {
    LockQueues& q = queues(l);
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t) q.acq[t * threads_ + u].enqueue(C_[t]);
  }

  void release(EventId e, ThreadId t, std::uint32_t l, std::span<const std::uint32_t> ws) {
    LockQueues& q = queues(l);
    VectorClock& C = C_[t];
    for (ThreadId u = 0; u < threads_; ++u) {
      if (u == t) continue;
      auto& acq = q.acq[u * threads_ + t];
      auto& rel = q.rel[u * threads_ + t];
      while (!acq.empty() && !rel.empty() && acq.front().leq(C)) {
        acq.dequeue();
        Stamped r = rel.dequeue();
        if (r.clock.leq(C)) continue;
        C.join(r.clock);
        if (graph_) graph_->add_edge(r.src, e, EdgeKind::RuleB);
      }
    }
    for (std::uint32_t x : ws) L_[key(l, x)] = {C, e};
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t) q.rel[t * threads_ + u].enqueue({C, e});
  }

  void collect(const StepContext& ctx, const std::vector<VectorClock::Value>& table,
               RaceKind kind) {
    const ThreadId t = ctx.ev.tid;
    const std::uint32_t x = ctx.ev.target;
    for (ThreadId u = 0; u < threads_; ++u) {
      if (u == t || table[std::size_t{x} * threads_ + u] <= C_[t][u]) continue;
      EventId prior = kind == RaceKind::RdWr ? ctx.last.read(x, u) : ctx.last.write(x, u);
      if (!trace_.share_lock(prior, ctx.e)) hits_.push_back({prior, kind});
    }
  }

  void read(const StepContext& ctx) {
    const ThreadId t = ctx.ev.tid;
    const std::uint32_t x = ctx.ev.target;
    collect(ctx, W_, RaceKind::WrRd);

    const ThreadId writer = last_thread_[x];
    if (writer == kNone || writer == t) return;
    const EventId w = ctx.last.last_write[x];
    std::optional<Pending> p;
    for (std::uint32_t l : trace_.lockset(w)) {
      if (std::find(ctx.locks.begin(), ctx.locks.end(), l) == ctx.locks.end()) continue;
      auto it = L_.find(key(l, x));
      if (it == L_.end()) continue;
      if (!p) p.emplace(Pending{ctx.e, VectorClock(threads_), {}, EdgeKind::CS});
      p->bound.join(it->second.clock);
      p->sources.push_back(it->second.src);
    }
    if (p && !p->bound.leq(C_[t])) pending_[t].push_back(std::move(*p));
  }

  void write(const StepContext& ctx) {
    collect(ctx, W_, RaceKind::WrWr);
    collect(ctx, R_, RaceKind::RdWr);
  }

  void branch(const StepContext& ctx) {
    const ThreadId t = ctx.ev.tid;
    auto& list = pending_[t];
    if (list.empty()) return;
    VectorClock& C = C_[t];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Pending& p = list[i];
      if (!ctx.deps.depends(trace_, ctx.e, p.read)) {
        if (keep != i) list[keep] = std::move(p);
        ++keep;
        continue;
      }
      if (p.bound.leq(C)) continue;
      C.join(p.bound);
      if (graph_)
        for (EventId s : p.sources) graph_->add_edge(s, ctx.e, p.kind);
    }
    list.resize(keep);
  }

  ConstraintGraph* graph_;
  std::vector<VectorClock> C_;
  std::vector<std::unique_ptr<LockQueues>> queues_;
  std::unordered_map<std::uint64_t, Stamped> L_;  // (lock, variable): last release writing it
  std::vector<VectorClock::Value> W_, R_;
  std::vector<ThreadId> last_thread_;  // T_x
  std::vector<VectorClock> last_wc_;   // clock of the last write, kept for race repair
  std::vector<AtomicState> atomic_;
  std::vector<std::vector<Pending>> pending_;  // D_t
};

}  // namespace

std::unique_ptr<Engine> make_wdp(const Trace& trace, const AnalysisOptions& options,
                                 ConstraintGraph* graph) {
  return std::make_unique<WdpEngine>(trace, options, graph);
}

}  // namespace predrace::detail
