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

// DC: conflicting critical sections order the earlier release to the later
// access, release-release ordering comes from the acquire/release queues, and
// program order is built in. No composition with HB.

#include "engine.hpp"

namespace predrace::detail {

namespace {

class DcEngine final : public Engine {
 public:
  DcEngine(const Trace& trace, const AnalysisOptions& options)
      : Engine(RelationId::DC, trace, options),
        C_(threads_, VectorClock(threads_)),
        queues_(locks_ + vars_),
        W_(std::size_t{vars_} * threads_, 0),
        R_(std::size_t{vars_} * threads_, 0) {
    for (std::size_t t = 0; t < threads_; ++t) C_[t].set(t, 1);
    if (options.repair_races) {
      Wc_.resize(W_.size());
      Rc_.resize(R_.size());
    }
  }

  void step(const StepContext& ctx, RaceSink& sink) override {
    const Event& ev = ctx.ev;
    const ThreadId t = ev.tid;
    hits_.clear();

    switch (ev.op) {
      case Op::Acquire: acquire(t, ev.target); break;
      case Op::Release: release(t, ev.target, ctx.cs_reads, ctx.cs_writes); break;
      case Op::Fork: C_[ev.target].join(C_[t]); break;
      case Op::Join: C_[t].join(C_[ev.target]); break;
      case Op::Read: read(ctx, t, ev.target, ctx.locks, true); break;
      case Op::Write: write(ctx, t, ev.target, ctx.locks, true); break;
      case Op::AtomicRead:
      case Op::AtomicWrite:
      case Op::AtomicRmw: atomic(ctx, t); break;
      case Op::Branch: break;
    }

    VectorClock& C = C_[t];
    record(ctx.e, C[t], C);
    if (!hits_.empty()) {
      report(sink, ctx.e, hits_);
      if (options_.repair_races)
        for (const RaceHit& h : hits_) {
          const std::size_t slot = std::size_t{ev.target} * threads_ + trace_[h.e1].tid;
          C.join(h.kind == RaceKind::RdWr ? Rc_[slot] : Wc_[slot]);
        }
    }

    if (is_plain_access(ev.op)) {
      const std::size_t slot = std::size_t{ev.target} * threads_ + t;
      (ev.op == Op::Read ? R_ : W_)[slot] = C[t];
      if (options_.repair_races) (ev.op == Op::Read ? Rc_ : Wc_)[slot] = C;
    }
    C.increment(t);
  }

 private:
  // Queues of one lock, indexed by owner * threads + target: acquires and
  // releases by `owner` not yet ordered to a release by `target`.
  struct LockQueues {
    std::vector<ClockQueue<>> acq, rel;
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

  void release(ThreadId t, std::uint32_t l, std::span<const std::uint32_t> rs,
               std::span<const std::uint32_t> ws) {
    LockQueues& q = queues(l);
    VectorClock& C = C_[t];
    for (ThreadId u = 0; u < threads_; ++u) {
      if (u == t) continue;
      auto& acq = q.acq[u * threads_ + t];
      auto& rel = q.rel[u * threads_ + t];
      while (!acq.empty() && !rel.empty() && acq.front().leq(C)) {
        acq.dequeue();
        C.join(rel.dequeue());
      }
    }
    for (std::uint32_t x : ws) L_[key(l, x)] = C;
    for (std::uint32_t x : rs) Lr_[key(l, x)].join(C);
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t) q.rel[t * threads_ + u].enqueue(C);
  }

  void join_from(VectorClock& into, const std::unordered_map<std::uint64_t, VectorClock>& table,
                 std::uint32_t l, std::uint32_t x) {
    auto it = table.find(key(l, x));
    if (it != table.end()) into.join(it->second);
  }

  void read(const StepContext& ctx, ThreadId t, std::uint32_t x,
            std::span<const std::uint32_t> held, bool check) {
    for (std::uint32_t l : held) join_from(C_[t], L_, l, x);
    if (check) collect(ctx, t, x, W_, RaceKind::WrRd);
  }

  void write(const StepContext& ctx, ThreadId t, std::uint32_t x,
             std::span<const std::uint32_t> held, bool check) {
    for (std::uint32_t l : held) {
      join_from(C_[t], L_, l, x);
      join_from(C_[t], Lr_, l, x);
    }
    if (!check) return;
    collect(ctx, t, x, W_, RaceKind::WrWr);
    collect(ctx, t, x, R_, RaceKind::RdWr);
  }

  void collect(const StepContext& ctx, ThreadId t, std::uint32_t x,
               const std::vector<VectorClock::Value>& table, RaceKind kind) {
    for (ThreadId u = 0; u < threads_; ++u) {
      if (u == t || table[std::size_t{x} * threads_ + u] <= C_[t][u]) continue;
      hits_.push_back({kind == RaceKind::RdWr ? ctx.last.read(x, u) : ctx.last.write(x, u), kind});
    }
  }

  void atomic(const StepContext& ctx, ThreadId t) {
    const std::uint32_t lam = locks_ + ctx.ev.target;
    const std::uint32_t x = vars_ + ctx.ev.target;
    const std::uint32_t held[] = {lam};
    acquire(t, lam);
    if (reads(ctx.ev.op)) read(ctx, t, x, held, false);
    if (writes(ctx.ev.op)) write(ctx, t, x, held, false);
    std::span<const std::uint32_t> none;
    std::span<const std::uint32_t> one(&x, 1);
    release(t, lam, reads(ctx.ev.op) ? one : none, writes(ctx.ev.op) ? one : none);
  }

  std::vector<VectorClock> C_;
  std::vector<std::unique_ptr<LockQueues>> queues_;
  std::unordered_map<std::uint64_t, VectorClock> L_, Lr_;  // (lock, variable)
  std::vector<VectorClock::Value> W_, R_;
  std::vector<VectorClock> Wc_, Rc_;
};

}  // namespace

std::unique_ptr<Engine> make_dc(const Trace& trace, const AnalysisOptions& options) {
  return std::make_unique<DcEngine>(trace, options);
}

}  // namespace predrace::detail
