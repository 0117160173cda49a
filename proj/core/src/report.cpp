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

#include "predrace/report.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

namespace predrace {

const char* to_string(RaceKind kind) {
  switch (kind) {
    case RaceKind::WrWr: return "wr-wr";
    case RaceKind::WrRd: return "wr-rd";
    case RaceKind::RdWr: return "rd-wr";
  }
  return "?";
}

const char* to_string(VindicationStatus status) {
  switch (status) {
    case VindicationStatus::None: return "none";
    case VindicationStatus::Verified: return "verified";
    case VindicationStatus::NoRace: return "no-race";
    case VindicationStatus::Unknown: return "unknown";
  }
  return "?";
}

RelationStats RaceReport::stats(RelationId r) const {
  RelationStats s;
  std::set<std::pair<std::string, std::string>> keys;
  for (const RaceRecord& rec : races) {
    if (!rec.relations.contains(r)) continue;
    ++s.dynamic_count;
    keys.insert(rec.static_key);
  }
  s.static_count = keys.size();
  return s;
}

static std::string emit_json(const RaceReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["trace"] = report.trace_name;
  j["event_count"] = report.event_count;
  j["analyzed_count"] = report.analyzed_count;
  ordered_json races = ordered_json::array();
  for (const RaceRecord& r : report.races) {
    ordered_json o;
    o["e1"] = r.e1;
    o["e2"] = r.e2;
    o["var"] = r.var;
    o["kind"] = to_string(r.kind);
    ordered_json rels = ordered_json::array();
    for (RelationId id : kAllRelations)
      if (r.relations.contains(id)) rels.push_back(to_string(id));
    o["relations"] = rels;
    o["distance"] = r.distance;
    o["static_key"] = {r.static_key.first, r.static_key.second};
    o["vindication"] = to_string(r.vindication);
    if (r.vindication == VindicationStatus::Verified) o["witness"] = r.witness;
    races.push_back(std::move(o));
  }
  j["races"] = std::move(races);
  ordered_json stats = ordered_json::object();
  for (RelationId id : kAllRelations) {
    if (!report.relations.contains(id)) continue;
    RelationStats s = report.stats(id);
    stats[to_string(id)] = {{"static", s.static_count}, {"dynamic", s.dynamic_count}};
  }
  j["stats"] = std::move(stats);
  return j.dump(2) + "\n";
}

static std::string emit_text(const RaceReport& report) {
  std::ostringstream os;
  os << "trace " << report.trace_name << ": " << report.event_count << " events, "
     << report.analyzed_count << " analyzed\n";
  for (const RaceRecord& r : report.races) {
    os << "race " << r.e1 << " " << r.e2 << " " << r.var << " " << to_string(r.kind) << " ["
       << r.relations.str() << "] distance " << r.distance << " (" << r.static_key.first
       << " | " << r.static_key.second << ")";
    if (r.vindication != VindicationStatus::None) os << " vindication " << to_string(r.vindication);
    os << "\n";
  }
  for (RelationId id : kAllRelations) {
    if (!report.relations.contains(id)) continue;
    RelationStats s = report.stats(id);
    os << to_string(id) << ": " << s.static_count << " static, " << s.dynamic_count
       << " dynamic\n";
  }
  return os.str();
}

std::string emit_report(const RaceReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? emit_json(report) : emit_text(report);
}

}  // namespace predrace
