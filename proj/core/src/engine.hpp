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

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "predrace/relations.hpp"

namespace predrace::detail {

/// Last access of each (variable, thread), shared by all engines.
struct AccessTable {
  std::size_t threads = 0;
  std::vector<EventId> wr, rd;
  std::vector<EventId> last_write;  // global, per variable

  AccessTable(std::size_t vars, std::size_t t)
      : threads(t), wr(vars * t, kNone), rd(vars * t, kNone), last_write(vars, kNone) {}
  EventId write(std::uint32_t x, ThreadId t) const { return wr[x * threads + t]; }
  EventId read(std::uint32_t x, ThreadId t) const { return rd[x * threads + t]; }
};

struct StepContext {
  const Trace& trace;
  const BranchDeps& deps;
  const AccessTable& last;
  EventId e;
  const Event& ev;
  std::span<const std::uint32_t> locks;      // locks held at e
  std::span<const std::uint32_t> cs_reads;   // at a release: variables read in the CS
  std::span<const std::uint32_t> cs_writes;  // at a release: variables written in the CS
};

struct RaceHit {
  EventId e1;
  RaceKind kind;
};

class RaceSink {
 public:
  virtual ~RaceSink() = default;
  virtual void report(RelationId r, EventId e1, EventId e2, RaceKind kind) = 0;
};

class Engine {
 public:
  Engine(RelationId id, const Trace& trace, const AnalysisOptions& options);
  virtual ~Engine() = default;

  RelationId id() const { return id_; }
  virtual void step(const StepContext& ctx, RaceSink& sink) = 0;
  ClockLog take_log() { return std::move(log_); }

 protected:
  void record(EventId e, VectorClock::Value epoch, const VectorClock& snap);
  /// Reports one hit, preferring a write as e1; false when there is none.
  bool report(RaceSink& sink, EventId e2, const std::vector<RaceHit>& hits) const;

  const Trace& trace_;
  const AnalysisOptions& options_;
  const std::size_t threads_;
  const std::uint32_t vars_;
  const std::uint32_t locks_;
  std::vector<RaceHit> hits_;  // scratch

 private:
  RelationId id_;
  ClockLog log_;
};

/// Key for (lock, variable) and (thread, variable) tables.
inline std::uint64_t key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::unique_ptr<Engine> make_hb(const Trace&, const AnalysisOptions&);
std::unique_ptr<Engine> make_wcp(const Trace&, const AnalysisOptions&, bool sdp);
std::unique_ptr<Engine> make_dc(const Trace&, const AnalysisOptions&);
std::unique_ptr<Engine> make_wdp(const Trace&, const AnalysisOptions&, ConstraintGraph* graph);

}  // namespace predrace::detail
