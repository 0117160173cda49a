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


#include "predrace/vindication.hpp"

#include <set>

#include "predrace/error.hpp"
#include "predrace/relations.hpp"

namespace predrace {

namespace {

std::uint64_t edge_key(EventId a, EventId b) { return (std::uint64_t{a} << 32) | b; }

// Marks everything that reaches a seed (seeds included) by walking predecessors.
void mark_backward(const WorkingGraph& g, std::vector<EventId> stack, std::vector<bool>& seen) {
  while (!stack.empty()) {
    EventId v = stack.back();
    stack.pop_back();
    for (EventId p : g.predecessors(v))
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
  }
}

// Kahn's algorithm on the subgraph induced by `nodes`.
bool has_cycle(const WorkingGraph& g, const std::vector<bool>& nodes) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> indeg(n, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!nodes[v]) continue;
    ++total;
    for (EventId w : g.successors(static_cast<EventId>(v)))
      if (nodes[w]) ++indeg[w];
  }
  std::vector<EventId> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (nodes[v] && indeg[v] == 0) ready.push_back(static_cast<EventId>(v));
  std::size_t removed = 0;
  while (!ready.empty()) {
    EventId v = ready.back();
    ready.pop_back();
    ++removed;
    for (EventId w : g.successors(v))
      if (nodes[w] && --indeg[w] == 0) ready.push_back(w);
  }
  return removed != total;
}

bool add_last_writer_edges(WorkingGraph& g, const std::vector<bool>& causal, const Trace& trace) {
  bool changed = false;
  for (std::size_t i = 0; i < causal.size(); ++i) {
    if (!causal[i]) continue;
    EventId w = trace.last_writer(static_cast<EventId>(i));
    if (w != kNone && g.add_edge(w, static_cast<EventId>(i), EdgeKind::LastWriter)) changed = true;
  }
  return changed;
}

// Every predecessor of e1 must precede e2 and vice versa.
bool add_consecutive(WorkingGraph& g, EventId e1, EventId e2, std::vector<Edge>& seeds) {
  bool changed = false;
  auto spread = [&](EventId from, EventId to) {
    std::vector<EventId> preds = g.predecessors(from);
    for (EventId p : preds)
      if (g.add_edge(p, to, EdgeKind::Consecutive)) {
        seeds.push_back({p, to, EdgeKind::Consecutive});
        changed = true;
      }
  };
  spread(e1, e2);
  spread(e2, e1);
  return changed;
}

}  // namespace

// ---------------------------------------------------------------------------

WorkingGraph::WorkingGraph(const ConstraintGraph& base)
    : succ_(base.node_count()), pred_(base.node_count()) {
  for (const Edge& e : base.edges())
    if (edges_.insert(edge_key(e.src, e.dst)).second) {
      succ_[e.src].push_back(e.dst);
      pred_[e.dst].push_back(e.src);
    }
}

bool WorkingGraph::add_edge(EventId src, EventId dst, EdgeKind kind) {
  if (!edges_.insert(edge_key(src, dst)).second) return false;
  succ_[src].push_back(dst);
  pred_[dst].push_back(src);
  added_.push_back({src, dst, kind});
  return true;
}

bool WorkingGraph::has_edge(EventId src, EventId dst) const {
  return edges_.count(edge_key(src, dst)) != 0;
}

std::vector<bool> WorkingGraph::reaching(const std::vector<EventId>& targets) const {
  std::vector<bool> seen(node_count(), false);
  mark_backward(*this, targets, seen);
  return seen;
}

std::vector<bool> WorkingGraph::reaching_reflexive(EventId dst) const {
  std::vector<bool> seen(node_count(), false);
  seen[dst] = true;
  mark_backward(*this, {dst}, seen);
  return seen;
}

std::vector<bool> WorkingGraph::reachable_from(EventId src) const {
  std::vector<bool> seen(node_count(), false);
  seen[src] = true;
  std::vector<EventId> stack{src};
  while (!stack.empty()) {
    EventId v = stack.back();
    stack.pop_back();
    for (EventId w : succ_[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

// ---------------------------------------------------------------------------

std::vector<bool> get_causal_reads(const WorkingGraph& g, EventId e1, EventId e2,
                                   const Trace& trace, const BranchDeps& deps) {
  std::vector<bool> in = g.reaching({e1, e2});
  in[e1] = in[e2] = true;
  for (;;) {
    std::vector<bool> causal = causal_closure(trace, in, deps);
    std::vector<EventId> missing;
    for (std::size_t i = 0; i < causal.size(); ++i) {
      const auto e = static_cast<EventId>(i);
      if (!causal[e] || !in[e] || !reads(trace[e].op)) continue;
      EventId w = trace.last_writer(e);
      if (w != kNone && !in[w]) {
        in[w] = true;
        missing.push_back(w);
      }
    }
    if (missing.empty()) {
      for (std::size_t i = 0; i < causal.size(); ++i)
        if (causal[i] && (!in[i] || !reads(trace[static_cast<EventId>(i)].op))) causal[i] = false;
      return causal;
    }
    mark_backward(g, std::move(missing), in);
  }
}

bool add_constraints(WorkingGraph& g, EventId e1, EventId e2, const Trace& trace,
                     const BranchDeps& deps) {
  std::vector<Edge> seeds;
  const std::size_t n = trace.size();
  for (;;) {
    bool changed = add_consecutive(g, e1, e2, seeds);
    if (add_last_writer_edges(g, get_causal_reads(g, e1, e2, trace, deps), trace)) changed = true;

    std::vector<bool> to_race = g.reaching({e1, e2});
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const Edge seed = seeds[s];
      std::vector<bool> before = g.reaching_reflexive(seed.src);
      std::vector<bool> after = g.reachable_from(seed.dst);
      // Critical sections partly before the seed and partly after it, both
      // opened before the race, must not overlap.
      std::vector<std::vector<EventId>> early(trace.lock_count()), late(trace.lock_count());
      for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<EventId>(i);
        const Event& ev = trace[e];
        if (ev.op == Op::Acquire && before[e] && to_race[e] && trace.matching(e) != kNone)
          early[ev.target].push_back(e);
        if (ev.op == Op::Release && after[e] && to_race[trace.matching(e)])
          late[ev.target].push_back(trace.matching(e));
      }
      for (std::size_t m = 0; m < early.size(); ++m)
        for (EventId a : early[m])
          for (EventId b : late[m]) {
            if (a == b) continue;
            EventId rel = trace.matching(a);
            if (g.add_edge(rel, b, EdgeKind::LockSemantics)) {
              seeds.push_back({rel, b, EdgeKind::LockSemantics});
              changed = true;
            }
          }
    }

    std::vector<bool> nodes = g.reaching({e1, e2});
    nodes[e1] = nodes[e2] = true;
    if (has_cycle(g, nodes)) return false;
    if (!changed) return true;
  }
}

// ---------------------------------------------------------------------------

namespace {

// Backward construction state: the suffix built so far.
class Suffix {
 public:
  Suffix(const Trace& trace, const std::vector<bool>& causal)
      : trace_(trace),
        causal_(causal),
        open_(trace.lock_count(), kNone),
        first_op_(trace.lock_count(), kNone),
        need_(trace.var_count()) {}

  bool legal(EventId e) const {
    for (EventId a : trace_.enclosing(e)) {
      const std::uint32_t m = trace_[a].target;
      if (open_[m] == a) continue;
      if (open_[m] != kNone) return false;  // another section's tail is below
      if (e == trace_.matching(a)) continue;
      // The section would stay unreleased, so nothing on m may follow.
      if (first_op_[m] != kNone) return false;
    }
    const Event& ev = trace_[e];
    if (writes(ev.op))
      for (EventId w : need_[ev.target])
        if (w != e) return false;
    return true;
  }

  void place(EventId e) {
    for (EventId a : trace_.enclosing(e)) {
      const std::uint32_t m = trace_[a].target;
      if (e == a) {
        open_[m] = kNone;
        first_op_[m] = e;
      } else {
        open_[m] = a;
        if (e == trace_.matching(a)) first_op_[m] = e;
      }
    }
    const Event& ev = trace_[e];
    if (writes(ev.op)) std::erase(need_[ev.target], e);
    if (reads(ev.op) && causal_[e]) need_[ev.target].push_back(trace_.last_writer(e));
    order_.push_back(e);
  }

  std::vector<EventId> take() {
    return std::vector<EventId>(order_.rbegin(), order_.rend());
  }

 private:
  const Trace& trace_;
  const std::vector<bool>& causal_;
  std::vector<EventId> open_;      // section with placed events but no placed acquire
  std::vector<EventId> first_op_;  // earliest placed acquire or release per lock
  std::vector<std::vector<EventId>> need_;  // writers owed to placed causal reads
  std::vector<EventId> order_;
};

}  // namespace

Attempt attempt_to_construct_trace(const WorkingGraph& g, EventId e1, EventId e2,
                                   const Trace& trace, const BranchDeps& deps) {
  Attempt out;
  const std::size_t n = trace.size();
  std::vector<bool> causal = get_causal_reads(g, e1, e2, trace, deps);
  std::vector<bool> need = g.reaching({e1, e2});
  if (need[e1] || need[e2]) return out;

  std::vector<std::uint32_t> pending(n, 0);
  std::set<EventId> ready;
  std::size_t remaining = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<EventId>(i);
    if (!need[e]) continue;
    ++remaining;
    for (EventId s : g.successors(e))
      if (need[s]) ++pending[e];
    if (pending[e] == 0) ready.insert(e);
  }

  Suffix suffix(trace, causal);
  for (EventId e : {e2, e1}) {
    if (!suffix.legal(e)) return out;
    suffix.place(e);
  }

  while (remaining > 0) {
    EventId pick = kNone;
    for (auto it = ready.rbegin(); it != ready.rend(); ++it)
      if (suffix.legal(*it)) {
        pick = *it;
        break;
      }
    if (pick == kNone) {
      for (EventId e : ready)
        for (EventId a : trace.enclosing(e)) {
          EventId r = trace.matching(a);
          if (r != kNone && !need[r] && r != e && suffix.legal(r)) {
            out.kind = Attempt::Kind::MissingRelease;
            out.release = r;
            return out;
          }
        }
      return out;
    }
    ready.erase(pick);
    suffix.place(pick);
    --remaining;
    for (EventId p : g.predecessors(pick))
      if (need[p] && --pending[p] == 0) ready.insert(p);
  }
  out.kind = Attempt::Kind::Trace;
  out.events = suffix.take();
  return out;
}

std::vector<EventId> construct_reordered_trace(WorkingGraph& g, EventId e1, EventId e2,
                                               const Trace& trace, const BranchDeps& deps) {
  for (;;) {
    while (add_last_writer_edges(g, get_causal_reads(g, e1, e2, trace, deps), trace)) {
    }
    Attempt at = attempt_to_construct_trace(g, e1, e2, trace, deps);
    if (at.kind == Attempt::Kind::Trace) return std::move(at.events);
    if (at.kind == Attempt::Kind::MissingRelease &&
        g.add_edge(at.release, e1, EdgeKind::MissingRelease))
      continue;
    return {};
  }
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::PredictableRace: return "predictable-race";
    case Outcome::NoPredictableRace: return "no-predictable-race";
    case Outcome::DontKnow: return "dont-know";
  }
  return "?";
}

ConstraintGraph build_constraint_graph(const Trace& trace, const BranchDeps& deps) {
  AnalysisOptions options;
  options.relations = RelationSet{RelationId::WDP};
  options.build_graph = true;
  options.repair_races = false;
  return std::move(*analyze(trace, deps, options).graph);
}

Vindication check_wdp_race(const ConstraintGraph& graph, EventId e1, EventId e2,
                           const Trace& trace, const BranchDeps& deps) {
  if (e1 >= trace.size() || e2 >= trace.size() || graph.node_count() != trace.size())
    throw Error(ErrorKind::BadIndex, std::max(e1, e2), "event out of range");
  if (e1 > e2) std::swap(e1, e2);
  if (!trace.conflicts(e1, e2))
    throw Error(ErrorKind::BadIndex, e2, "events do not conflict");

  Vindication v;
  WorkingGraph g(graph);
  if (!add_constraints(g, e1, e2, trace, deps)) {
    v.outcome = Outcome::NoPredictableRace;
    v.added_edges = g.added().size();
    return v;
  }
  std::vector<EventId> witness = construct_reordered_trace(g, e1, e2, trace, deps);
  v.added_edges = g.added().size();
  if (witness.empty()) return v;

  Verdict check = check_predictable_trace(trace, witness, deps);
  const std::size_t k = witness.size();
  if (!check.valid() || k < 2 || witness[k - 2] != e1 || witness[k - 1] != e2)
    throw Error(ErrorKind::InternalInvariant, e2,
                std::string("vindication built an invalid witness (") + to_string(check.rule) + ")");
  v.outcome = Outcome::PredictableRace;
  v.witness = std::move(witness);
  return v;
}

}  // namespace predrace
