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

// WCP and SDP. Both keep an HB clock H_t next to the relation clock C_t and
// judge races with C_t[t := H_t(t)], i.e. the relation united with program
// order. SDP drops write-write critical-section ordering and instead orders the
// earlier release to the writer thread's next read of the variable.

#include "engine.hpp"

namespace predrace::detail {

namespace {

class WcpEngine final : public Engine {
 public:
  WcpEngine(const Trace& trace, const AnalysisOptions& options, bool sdp)
      : Engine(sdp ? RelationId::SDP : RelationId::WCP, trace, options),
        sdp_(sdp),
        H_(threads_, VectorClock(threads_)),
        C_(threads_, VectorClock(threads_)),
        Hl_(locks_ + vars_, VectorClock(threads_)),
        Cl_(locks_ + vars_, VectorClock(threads_)),
        queues_(locks_ + vars_),
        W_(std::size_t{vars_} * threads_, 0),
        R_(std::size_t{vars_} * threads_, 0) {
    for (std::size_t t = 0; t < threads_; ++t) H_[t].set(t, 1);
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
      case Op::Fork:
        H_[ev.target].join(H_[t]);
        C_[ev.target].join(ch(t));
        break;
      case Op::Join:
        H_[t].join(H_[ev.target]);
        C_[t].join(ch(ev.target));
        break;
      case Op::Read: read(ctx, t, ev.target, ctx.locks, true); break;
      case Op::Write: write(ctx, t, ev.target, ctx.locks, true); break;
      case Op::AtomicRead:
      case Op::AtomicWrite:
      case Op::AtomicRmw: atomic(ctx, t); break;
      case Op::Branch: break;
    }

    record(ctx.e, H_[t][t], ch(t));
    if (!hits_.empty()) {
      report(sink, ctx.e, hits_);
      if (options_.repair_races) {
        for (const RaceHit& h : hits_) {
          if (sdp_ && h.kind == RaceKind::WrWr) continue;
          const VectorClock& c = full_clock(ctx, h);
          H_[t].join(c);
          C_[t].join(c);
        }
      }
    }

    if (is_plain_access(ev.op)) {
      const std::size_t slot = std::size_t{ev.target} * threads_ + t;
      (ev.op == Op::Read ? R_ : W_)[slot] = H_[t][t];
      if (options_.repair_races) (ev.op == Op::Read ? Rc_ : Wc_)[slot] = H_[t];
    }
    H_[t].increment(t);
  }

 private:
  struct LockQueues {
    std::vector<ClockQueue<>> acq, rel;  // indexed by the thread that must catch up
  };

  VectorClock ch(ThreadId t) const { return C_[t].with_component(t, H_[t][t]); }
  VectorClock::Value ch(ThreadId t, ThreadId u) const { return u == t ? H_[t][t] : C_[t][u]; }

  bool leq_ch(const VectorClock& c, ThreadId t) const {
    for (ThreadId u = 0; u < threads_; ++u)
      if (c[u] > ch(t, u)) return false;
    return true;
  }

  LockQueues& queues(std::uint32_t l) {
    auto& q = queues_[l];
    if (!q) {
      q = std::make_unique<LockQueues>();
      q->acq.resize(threads_);
      q->rel.resize(threads_);
    }
    return *q;
  }

  void acquire(ThreadId t, std::uint32_t l) {
    H_[t].join(Hl_[l]);
    C_[t].join(Cl_[l]);
    LockQueues& q = queues(l);
    VectorClock c = ch(t);
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t) q.acq[u].enqueue(c);
  }

  void release(ThreadId t, std::uint32_t l, std::span<const std::uint32_t> rs,
               std::span<const std::uint32_t> ws) {
    LockQueues& q = queues(l);
    while (!q.acq[t].empty() && !q.rel[t].empty() && leq_ch(q.acq[t].front(), t)) {
      q.acq[t].dequeue();
      C_[t].join(q.rel[t].dequeue());
    }
    for (std::uint32_t x : rs) Lr_[key(l, x)].join(H_[t]);
    for (std::uint32_t x : ws) Lw_[key(l, x)].join(H_[t]);
    Hl_[l] = H_[t];
    Cl_[l] = C_[t];
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t) q.rel[u].enqueue(H_[t]);
  }

  void join_from(VectorClock& into, const std::unordered_map<std::uint64_t, VectorClock>& table,
                 std::uint32_t a, std::uint32_t b) {
    auto it = table.find(key(a, b));
    if (it != table.end()) into.join(it->second);
  }

  void read(const StepContext& ctx, ThreadId t, std::uint32_t x,
            std::span<const std::uint32_t> held, bool check) {
    if (sdp_) join_from(C_[t], B_, t, x);
    for (std::uint32_t l : held) join_from(C_[t], Lw_, l, x);
    if (!check) return;
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t && W_[std::size_t{x} * threads_ + u] > C_[t][u])
        hits_.push_back({ctx.last.write(x, u), RaceKind::WrRd});
  }

  void write(const StepContext& ctx, ThreadId t, std::uint32_t x,
             std::span<const std::uint32_t> held, bool check) {
    for (std::uint32_t l : held) join_from(C_[t], Lr_, l, x);
    VectorClock lw;
    for (std::uint32_t l : held) join_from(sdp_ ? lw : C_[t], Lw_, l, x);
    if (check) {
      for (ThreadId u = 0; u < threads_; ++u) {
        if (u == t) continue;
        VectorClock::Value bound = C_[t][u];
        if (sdp_) bound = std::max(bound, lw[u]);
        if (W_[std::size_t{x} * threads_ + u] > bound)
          hits_.push_back({ctx.last.write(x, u), RaceKind::WrWr});
      }
    }
    if (sdp_ && lw.size() != 0) B_[key(t, x)].join(lw);
    if (!check) return;
    for (ThreadId u = 0; u < threads_; ++u)
      if (u != t && R_[std::size_t{x} * threads_ + u] > C_[t][u])
        hits_.push_back({ctx.last.read(x, u), RaceKind::RdWr});
  }

  // An atomic access behaves like a plain access inside a one-event critical
  // section on a lock private to the variable; it never races.
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

  const VectorClock& full_clock(const StepContext& ctx, const RaceHit& h) const {
    const std::size_t slot = std::size_t{ctx.ev.target} * threads_ + ctx.trace[h.e1].tid;
    return h.kind == RaceKind::RdWr ? Rc_[slot] : Wc_[slot];
  }

  const bool sdp_;
  std::vector<VectorClock> H_, C_;
  std::vector<VectorClock> Hl_, Cl_;
  std::vector<std::unique_ptr<LockQueues>> queues_;
  std::unordered_map<std::uint64_t, VectorClock> Lr_, Lw_;  // (lock, variable)
  std::unordered_map<std::uint64_t, VectorClock> B_;        // (thread, variable)
  std::vector<VectorClock::Value> W_, R_;
  std::vector<VectorClock> Wc_, Rc_;
};

}  // namespace

std::unique_ptr<Engine> make_wcp(const Trace& trace, const AnalysisOptions& options, bool sdp) {
  return std::make_unique<WcpEngine>(trace, options, sdp);
}

}  // namespace predrace::detail
