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
#include <string>
#include <utility>
#include <vector>

#include "predrace/relation.hpp"
#include "predrace/trace.hpp"

namespace predrace {

enum class RaceKind : std::uint8_t { WrWr, WrRd, RdWr };
const char* to_string(RaceKind kind);

enum class VindicationStatus : std::uint8_t { None, Verified, NoRace, Unknown };
const char* to_string(VindicationStatus status);

struct RaceRecord {
  EventId e1 = kNone;
  EventId e2 = kNone;
  std::string var;
  RaceKind kind = RaceKind::WrRd;
  RelationSet relations;
  std::uint64_t distance = 0;
  /// Unordered pair of source locations, stored sorted.
  std::pair<std::string, std::string> static_key;
  VindicationStatus vindication = VindicationStatus::None;
  std::vector<EventId> witness;
};

struct RelationStats {
  std::size_t static_count = 0;
  std::size_t dynamic_count = 0;
};

struct RaceReport {
  std::string trace_name;
  std::size_t event_count = 0;
  std::size_t analyzed_count = 0;
  RelationSet relations = RelationSet::all();
  std::vector<RaceRecord> races;

  RelationStats stats(RelationId r) const;
};

enum class ReportFormat { Json, Text };

std::string emit_report(const RaceReport& report, ReportFormat format);

}  // namespace predrace
