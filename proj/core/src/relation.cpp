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

#include "predrace/relation.hpp"

#include <cctype>

namespace predrace {

const char* to_string(RelationId r) {
  switch (r) {
    case RelationId::HB: return "HB";
    case RelationId::WCP: return "WCP";
    case RelationId::SDP: return "SDP";
    case RelationId::DC: return "DC";
    case RelationId::WDP: return "WDP";
  }
  return "?";
}

std::optional<RelationId> parse_relation(std::string_view name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "WDC") return RelationId::DC;
  for (RelationId r : kAllRelations)
    if (up == to_string(r)) return r;
  return std::nullopt;
}

std::string RelationSet::str() const {
  std::string s;
  for (RelationId r : kAllRelations) {
    if (!contains(r)) continue;
    if (!s.empty()) s += ',';
    s += to_string(r);
  }
  return s;
}

}  // namespace predrace
