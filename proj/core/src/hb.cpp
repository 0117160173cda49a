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

// Happens-before: every release orders later acquires of the same lock.

#include "engine.hpp"

namespace predrace::detail {

namespace {

class HbEngine final : public Engine {
 public:
  HbEngine(const Trace& trace, const AnalysisOptions& options)
      : Engine(RelationId::HB, trace, options),
        H_(threads_, VectorClock(threads_)),
        Hl_(locks_ + vars_, VectorClock(threads_)),
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
    VectorClock& H = H_[t];
    hits_.clear();

    switch (ev.op) {
      case Op::Acquire: H.join(Hl_[ev.target]); break;
      case Op::Release: Hl_[ev.target] = H; break;
      case Op::Fork: H_[ev.target].join(H); break;
      case Op::Join: H.join(H_[ev.target]); break;
      case Op::AtomicRead:
      case Op::AtomicWrite:
      case Op::AtomicRmw: {
        VectorClock& lam = Hl_[locks_ + ev.target];
        H.join(lam);
        lam = H;
        break;
      }
      case Op::Read:
        check(ctx, W_, RaceKind::WrRd);
        break;
      case Op::Write:
        check(ctx, W_, RaceKind::WrWr);
        check(ctx, R_, RaceKind::RdWr);
        break;
      case Op::Branch: break;
    }

    record(ctx.e, H[t], H);
    if (!hits_.empty()) {
      report(sink, ctx.e, hits_);
      if (options_.repair_races)
        for (const RaceHit& h : hits_) H.join(full_clock(ctx, h));
    }

    if (is_plain_access(ev.op)) {
      const std::size_t slot = std::size_t{ev.target} * threads_ + t;
      auto& epochs = ev.op == Op::Read ? R_ : W_;
      epochs[slot] = H[t];
      if (options_.repair_races) (ev.op == Op::Read ? Rc_ : Wc_)[slot] = H;
    }
    H.increment(t);
  }

 private:
  void check(const StepContext& ctx, const std::vector<VectorClock::Value>& table, RaceKind kind) {
    const ThreadId t = ctx.ev.tid;
    const std::uint32_t x = ctx.ev.target;
    for (ThreadId u = 0; u < threads_; ++u) {
      if (u == t) continue;
      if (table[std::size_t{x} * threads_ + u] > H_[t][u]) {
        EventId e1 = kind == RaceKind::RdWr ? ctx.last.read(x, u) : ctx.last.write(x, u);
        hits_.push_back({e1, kind});
      }
    }
  }

  const VectorClock& full_clock(const StepContext& ctx, const RaceHit& h) const {
    const std::size_t slot = std::size_t{ctx.ev.target} * threads_ + ctx.trace[h.e1].tid;
    return h.kind == RaceKind::RdWr ? Rc_[slot] : Wc_[slot];
  }

  std::vector<VectorClock> H_;
  std::vector<VectorClock> Hl_;  // real locks, then one per atomic variable
  std::vector<VectorClock::Value> W_, R_;
  std::vector<VectorClock> Wc_, Rc_;
};

}  // namespace

std::unique_ptr<Engine> make_hb(const Trace& trace, const AnalysisOptions& options) {
  return std::make_unique<HbEngine>(trace, options);
}

}  // namespace predrace::detail
