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


#include <set>
#include <vector>

#include "doctest.h"
#include "predrace/error.hpp"
#include "predrace/oracle.hpp"
#include "predrace/trace_io.hpp"
#include "support.hpp"

using namespace predrace;
using predrace::test::load;

namespace {

const BranchDeps kConservative;

std::set<std::vector<EventId>> all_sequences(const Trace& t) {
  std::set<std::vector<EventId>> out;
  enumerate_predictable(t, kConservative, [&](const std::vector<EventId>& s) {
    CHECK(out.insert(s).second);
    return true;
  });
  return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("two independent events") {
  Trace t = parse_trace("T0 wr x\nT1 wr y\n");
  CHECK(all_sequences(t) == std::set<std::vector<EventId>>{{}, {0}, {1}, {0, 1}, {1, 0}});
}

TEST_CASE("every enumerated sequence passes the checker") {
  for (const char* name : {"fig2a", "fig2b", "fig4c"}) {
    Trace t = load(name);
    for (const auto& s : all_sequences(t)) CHECK(check_predictable_trace(t, s, kConservative).valid());
  }
}

TEST_CASE("figure 2(a) has no predictable race") {
  Trace t = load("fig2a");
  bool adjacent = false;
  enumerate_predictable(t, kConservative, [&](const std::vector<EventId>& s) {
    if (s.size() >= 2 && s[s.size() - 2] == 3 && s.back() == 8) adjacent = true;
    return true;
  });
  CHECK_FALSE(adjacent);
  CHECK_FALSE(has_predictable_race(t, kConservative).has_race);
  CHECK_FALSE(has_predictable_deadlock(t, kConservative));
}

TEST_CASE("figure 2(b) includes figure 2(c)") {
  Trace t = load("fig2b");
  CHECK(all_sequences(t).count({5, 6, 7, 0, 1, 8}));
  OracleResult r = has_predictable_race(t, kConservative);
  CHECK(r.has_race);
  CHECK(r.racy_pairs.count({1, 8}));
}

TEST_CASE("figure 1") {
  OracleResult b = has_predictable_race(load("fig1b"), kConservative);
  CHECK(b.has_race);
  CHECK(b.racy_pairs.count({2, 12}));
  CHECK_FALSE(has_predictable_race(load("fig1e"), kConservative).has_race);
}

TEST_CASE("witnesses end with their pair") {
  Trace t = load("fig3a");
  OracleResult r = has_predictable_race(t, kConservative);
  REQUIRE(r.has_race);
  for (const auto& [pair, w] : r.racy_pairs) {
    REQUIRE(w.size() >= 2);
    CHECK(w[w.size() - 2] == pair.first);
    CHECK(w.back() == pair.second);
    CHECK(check_predictable_trace(t, w, kConservative).valid());
  }
}

TEST_CASE("restricting to one pair") {
  Trace t = parse_trace("T0 wr x\nT1 wr x\nT1 wr y\nT0 rd y\n");
  OracleResult all = has_predictable_race(t, kConservative);
  CHECK(all.racy_pairs.size() == 2);
  OracleResult one = has_predictable_race(t, kConservative, EventPair{2, 3});
  CHECK(one.racy_pairs.size() == 1);
  CHECK(one.racy_pairs.count({2, 3}));
}

TEST_CASE("single thread never races") {
  Trace t = parse_trace("T0 wr x\nT0 rd x\nT0 br\nT0 wr x\n");
  CHECK_FALSE(has_predictable_race(t, kConservative).has_race);
}

TEST_CASE("deadlock") {
  Trace inversion = parse_trace(
      "T0 acq a\nT0 acq b\nT0 rel b\nT0 rel a\n"
      "T1 acq b\nT1 acq a\nT1 rel a\nT1 rel b\n");
  CHECK(has_predictable_deadlock(inversion, kConservative));
  OracleResult r = has_predictable_race(inversion, kConservative);
  CHECK(r.has_deadlock);
  CHECK(cyclic_wait(inversion, r.deadlock_witness).size() == 2);
  CHECK(cyclic_wait(inversion, {0, 4}).size() == 2);
  CHECK(cyclic_wait(inversion, {0}).empty());

  Trace lock_free = parse_trace("T0 wr x\nT1 rd x\nT1 br\n");
  CHECK_FALSE(has_predictable_deadlock(lock_free, kConservative));
}

TEST_CASE("budget") {
  Trace t = load("wr-wr-extra");
  try {
    has_predictable_race(t, kConservative);
    FAIL("no budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  OracleResult r = has_predictable_race(t, kConservative, std::nullopt, 20);
  CHECK_FALSE(r.has_deadlock);
  CHECK_FALSE(r.racy_pairs.count({5, 16}));
}

TEST_CASE("early stop") {
  Trace t = load("fig2b");
  int seen = 0;
  enumerate_predictable(t, kConservative, [&](const std::vector<EventId>&) { return ++seen < 3; });
  CHECK(seen == 3);
}

}  // TEST_SUITE
