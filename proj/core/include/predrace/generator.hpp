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

#include <cstdint>

#include "predrace/trace.hpp"

namespace predrace {

struct GenOptions {
  std::uint32_t threads = 3;
  std::uint32_t events = 12;
  std::uint32_t locks = 2;
  std::uint32_t vars = 3;
  double branch_rate = 0.15;
  double atomic_rate = 0.0;
  /// Threads other than T0 start at a fork by T0 and may be joined.
  bool forks = false;
  std::uint64_t seed = 1;
};

/// A random well-formed trace of exactly `events` events. Critical sections
/// nest properly, are all closed and never re-acquire a held lock. Atomic
/// accesses use their own variables (a0, a1, ...).
Trace generate_trace(const GenOptions& options);

}  // namespace predrace
