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


#include "predrace/generator.hpp"

#include <random>
#include <string>
#include <vector>

namespace predrace {

namespace {

enum class Life { Waiting, Running, Joined };

}  // namespace

Trace generate_trace(const GenOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  const std::uint32_t T = std::max<std::uint32_t>(o.threads, 1);
  TraceBuilder b;
  std::vector<ThreadId> tid(T);
  for (std::uint32_t i = 0; i < T; ++i) tid[i] = b.thread("T" + std::to_string(i));
  // Variables are interned on first use so unused ones leave no trace.
  auto var = [&](char prefix, std::size_t i) { return b.var(prefix + std::to_string(i)); };
  std::vector<std::uint32_t> lock(o.locks);
  for (std::uint32_t i = 0; i < o.locks; ++i) lock[i] = b.lock("m" + std::to_string(i));

  std::vector<Life> life(T, o.forks ? Life::Waiting : Life::Running);
  life[0] = Life::Running;
  std::vector<std::vector<std::uint32_t>> held(T);  // lock stack per thread
  std::vector<bool> taken(o.locks, false);
  std::size_t open = 0;  // acquires still to be released

  for (std::uint32_t left = o.events; left > 0; --left) {
    std::vector<std::uint32_t> live;
    for (std::uint32_t t = 0; t < T; ++t)
      if (life[t] == Life::Running) live.push_back(t);
    const std::uint32_t t = live[pick(live.size())];
    auto& stack = held[t];

    if (left <= open) {
      // Only releases fit; close on a thread that holds something.
      std::uint32_t u = t;
      while (held[u].empty()) u = (u + 1) % T;
      b.add(tid[u], Op::Release, lock[held[u].back()]);
      taken[held[u].back()] = false;
      held[u].pop_back();
      --open;
      continue;
    }

    const double r = coin(rng);
    if (!stack.empty() && r < 0.25) {
      b.add(tid[t], Op::Release, lock[stack.back()]);
      taken[stack.back()] = false;
      stack.pop_back();
      --open;
      continue;
    }
    if (r < 0.45 && left >= open + 2) {
      std::vector<std::uint32_t> free;
      for (std::uint32_t m = 0; m < o.locks; ++m)
        if (!taken[m]) free.push_back(m);
      if (!free.empty()) {
        std::uint32_t m = free[pick(free.size())];
        b.add(tid[t], Op::Acquire, lock[m]);
        taken[m] = true;
        stack.push_back(m);
        ++open;
        continue;
      }
    }
    if (o.forks && t == 0 && r < 0.6) {
      std::vector<std::uint32_t> cand;
      for (std::uint32_t u = 1; u < T; ++u)
        if (life[u] == Life::Waiting || (life[u] == Life::Running && held[u].empty()))
          cand.push_back(u);
      if (!cand.empty()) {
        std::uint32_t u = cand[pick(cand.size())];
        if (life[u] == Life::Waiting) {
          b.add(tid[0], Op::Fork, tid[u]);
          life[u] = Life::Running;
          continue;
        }
        if (coin(rng) < 0.3) {
          b.add(tid[0], Op::Join, tid[u]);
          life[u] = Life::Joined;
          continue;
        }
      }
    }
    if (coin(rng) < o.branch_rate) {
      b.add(tid[t], Op::Branch, 0);
      continue;
    }
    if (o.vars == 0) {
      b.add(tid[t], Op::Branch, 0);
      continue;
    }
    const std::uint32_t x = static_cast<std::uint32_t>(pick(o.vars));
    if (coin(rng) < o.atomic_rate) {
      const double k = coin(rng);
      Op op = k < 0.4 ? Op::AtomicRead : k < 0.8 ? Op::AtomicWrite : Op::AtomicRmw;
      b.add(tid[t], op, var('a', x));
    } else {
      b.add(tid[t], coin(rng) < 0.5 ? Op::Read : Op::Write, var('x', x));
    }
  }
  return b.build();
}

}  // namespace predrace
