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
#include <string>
#include <vector>

#include "doctest.h"
#include "predrace/error.hpp"
#include "predrace/oracle.hpp"
#include "predrace/trace_io.hpp"
#include "predrace/vindication.hpp"
#include "support.hpp"

using namespace predrace;
using predrace::test::load;

namespace {

const BranchDeps kConservative;

Vindication vindicate(const Trace& t, EventId e1, EventId e2) {
  return check_wdp_race(build_constraint_graph(t, kConservative), e1, e2, t, kConservative);
}

void check_witness(const Trace& t, EventId e1, EventId e2, const std::vector<EventId>& w) {
  REQUIRE(w.size() >= 2);
  CHECK(check_predictable_trace(t, w, kConservative).valid());
  CHECK(w[w.size() - 2] == e1);
  CHECK(w.back() == e2);
  CHECK(t.conflicts(e1, e2));
  CHECK_FALSE(t.share_lock(e1, e2));
}

// The race needs the read to keep its writer while the branch after it
// precedes the second read: a cycle.
constexpr const char* kCycle = "T1 wr x\nT0 rd x\nT0 br\nT0 rd x\n";

}  // namespace

TEST_SUITE("vindication") {

TEST_CASE("witnesses of the figures") {
  struct Case {
    const char* name;
    EventId e1, e2;
    std::vector<EventId> witness;
  };
  const std::vector<Case> cases = {
      {"fig1b", 2, 12, {4, 5, 6, 7, 8, 9, 10, 11, 0, 1, 2, 12}},
      {"fig2b", 1, 8, {5, 6, 7, 0, 1, 8}},
      {"fig3a", 2, 11, {4, 5, 6, 7, 8, 9, 10, 0, 1, 2, 11}},
      {"fig4a", 0, 7, {4, 5, 6, 0, 7}},
      {"fig4c", 0, 6, {4, 5, 0, 6}},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    Trace t = load(c.name);
    Vindication v = vindicate(t, c.e1, c.e2);
    REQUIRE(v.outcome == Outcome::PredictableRace);
    check_witness(t, c.e1, c.e2, v.witness);
    CHECK(v.witness == c.witness);
  }
}

TEST_CASE("races that are not predictable") {
  struct Case {
    const char* name;
    EventId e1, e2;
  };
  for (const Case& c : {Case{"fig2a", 3, 8}, Case{"fig1e", 3, 13}, Case{"wr-wr-extra", 5, 16}}) {
    CAPTURE(c.name);
    Trace t = load(c.name);
    CHECK(vindicate(t, c.e1, c.e2).outcome != Outcome::PredictableRace);
    CHECK(has_predictable_race(t, kConservative, EventPair{c.e1, c.e2}, 20).racy_pairs.empty());
  }
}

TEST_CASE("a constraint cycle means no predictable race") {
  Trace t = parse_trace(kCycle);
  WorkingGraph g(build_constraint_graph(t, kConservative));
  CHECK_FALSE(add_constraints(g, 0, 3, t, kConservative));
  CHECK(vindicate(t, 0, 3).outcome == Outcome::NoPredictableRace);
  CHECK(has_predictable_race(t, kConservative, EventPair{0, 3}).racy_pairs.empty());
  // The first read on its own does race.
  CHECK(vindicate(t, 0, 1).outcome == Outcome::PredictableRace);
}

TEST_CASE("causal reads") {
  SUBCASE("a branch before e1 makes its read causal") {
    Trace t = load("fig2a");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    std::vector<bool> m = get_causal_reads(g, 3, 8, t, kConservative);
    CHECK(m[1]);
    CHECK_FALSE(m[8]);
  }
  SUBCASE("no branches") {
    Trace t = parse_trace("T0 rd y\nT0 wr x\nT1 rd x\nT1 rd x\n");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    std::vector<bool> m = get_causal_reads(g, 1, 3, t, kConservative);
    CHECK(std::count(m.begin(), m.end(), true) == 0);
  }
  SUBCASE("a branch after the race does not count") {
    Trace t = parse_trace("T0 wr y\nT1 rd x\nT1 rd y\nT1 br\n");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    std::vector<bool> m = get_causal_reads(g, 0, 2, t, kConservative);
    CHECK_FALSE(m[1]);
  }
  SUBCASE("the writer of a causal read brings its own reads") {
    // T0's read of z precedes the write T1 reads before branching.
    Trace t = parse_trace("T2 wr z\nT0 rd z\nT0 wr x\nT1 rd x\nT1 br\nT1 wr y\nT2 wr y\n");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    std::vector<bool> m = get_causal_reads(g, 5, 6, t, kConservative);
    CHECK(m[3]);
    CHECK(m[1]);
  }
}

TEST_CASE("saturation") {
  SUBCASE("figure 2(b) stays acyclic") {
    Trace t = load("fig2b");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    CHECK(add_constraints(g, 1, 8, t, kConservative));
  }
  SUBCASE("adjacent events with no predecessors add nothing") {
    Trace t = parse_trace("T0 wr x\nT1 wr x\n");
    WorkingGraph g(build_constraint_graph(t, kConservative));
    CHECK(add_constraints(g, 0, 1, t, kConservative));
    CHECK(g.added().empty());
  }
  SUBCASE("last-writer edges end at causal reads") {
    for (const char* name : {"fig1b", "fig2a", "fig3a", "fig5", "missing-release"}) {
      CAPTURE(name);
      Trace t = load(name);
      AnalysisOptions o;
      o.relations = RelationSet{RelationId::WDP};
      for (const RaceRecord& rc : analyze(t, kConservative, o).races) {
        WorkingGraph g(build_constraint_graph(t, kConservative));
        add_constraints(g, rc.e1, rc.e2, t, kConservative);
        std::vector<bool> m = get_causal_reads(g, rc.e1, rc.e2, t, kConservative);
        for (const Edge& e : g.added()) {
          if (e.kind != EdgeKind::LastWriter) continue;
          CHECK(m[e.dst]);
          CHECK(t.last_writer(e.dst) == e.src);
        }
      }
    }
  }
}

TEST_CASE("missing release") {
  Trace t = load("missing-release");
  const EventId e1 = 6, e2 = 9;
  WorkingGraph g(build_constraint_graph(t, kConservative));
  REQUIRE(add_constraints(g, e1, e2, t, kConservative));
  Attempt first = attempt_to_construct_trace(g, e1, e2, t, kConservative);
  CHECK(first.kind == Attempt::Kind::MissingRelease);
  CHECK(first.release == 7);

  WorkingGraph h(build_constraint_graph(t, kConservative));
  REQUIRE(add_constraints(h, e1, e2, t, kConservative));
  std::vector<EventId> w = construct_reordered_trace(h, e1, e2, t, kConservative);
  check_witness(t, e1, e2, w);
  CHECK(std::find(w.begin(), w.end(), 7) != w.end());
  CHECK(h.has_edge(7, e1));
  CHECK(has_predictable_race(t, kConservative, EventPair{e1, e2}).racy_pairs.count({e1, e2}));
}

TEST_CASE("first attempt succeeds on figure 2(b)") {
  Trace t = load("fig2b");
  WorkingGraph g(build_constraint_graph(t, kConservative));
  REQUIRE(add_constraints(g, 1, 8, t, kConservative));
  Attempt a = attempt_to_construct_trace(g, 1, 8, t, kConservative);
  CHECK(a.kind == Attempt::Kind::Trace);
  check_witness(t, 1, 8, a.events);
}

TEST_CASE("bad pairs") {
  Trace t = load("fig2b");
  ConstraintGraph g = build_constraint_graph(t, kConservative);
  CHECK_THROWS_AS(check_wdp_race(g, 1, 80, t, kConservative), Error);
  try {
    check_wdp_race(g, 0, 8, t, kConservative);
    FAIL("accepted a non-conflicting pair");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadIndex);
  }
}

TEST_CASE("figure 5 depends on what the branches read") {
  Trace t = load("fig5");
  // Each branch after a critical section depends on the read of time there,
  // which ties T1's write of method to everything before T3's read.
  CHECK(vindicate(t, 0, 15).outcome == Outcome::NoPredictableRace);
  CHECK(has_predictable_race(t, kConservative, EventPair{0, 15}, 20).racy_pairs.empty());

  const BranchDeps independent = read_deps_file(predrace::test::fixture("fig5.deps"), t);
  Vindication v = check_wdp_race(build_constraint_graph(t, independent), 0, 15, t, independent);
  REQUIRE(v.outcome == Outcome::PredictableRace);
  CHECK(check_predictable_trace(t, v.witness, independent).valid());
  CHECK(v.witness.back() == 15);
  CHECK(has_predictable_race(t, independent, EventPair{0, 15}, 20).racy_pairs.size() == 1);
}

TEST_CASE("deterministic") {
  Trace t = load("fig3a");
  Vindication a = vindicate(t, 2, 11), b = vindicate(t, 2, 11);
  CHECK(a.outcome == b.outcome);
  CHECK(a.witness == b.witness);
  CHECK(a.added_edges == b.added_edges);
}

TEST_CASE("working graph") {
  ConstraintGraph base(4);
  base.add_edge(0, 1, EdgeKind::PO);
  base.add_edge(0, 1, EdgeKind::PO);
  base.add_edge(1, 2, EdgeKind::PO);
  WorkingGraph g(base);
  CHECK(g.successors(0).size() == 1);
  CHECK_FALSE(g.add_edge(1, 2, EdgeKind::LastWriter));
  CHECK(g.add_edge(3, 0, EdgeKind::LockSemantics));
  CHECK(g.added().size() == 1);
  CHECK(g.reachable_from(3) == std::vector<bool>{true, true, true, true});
  CHECK(g.reaching({2}) == std::vector<bool>{true, true, false, true});
  CHECK(g.reaching_reflexive(1) == std::vector<bool>{true, true, false, true});
}

TEST_CASE("outcome names") {
  CHECK(std::string(to_string(Outcome::PredictableRace)) == "predictable-race");
  CHECK(std::string(to_string(Outcome::NoPredictableRace)) == "no-predictable-race");
  CHECK(std::string(to_string(Outcome::DontKnow)) == "dont-know");
}

}  // TEST_SUITE
