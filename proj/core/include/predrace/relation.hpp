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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace predrace {

enum class RelationId : std::uint8_t { HB, WCP, SDP, DC, WDP };

inline constexpr std::size_t kRelationCount = 5;
inline constexpr std::array<RelationId, kRelationCount> kAllRelations = {
    RelationId::HB, RelationId::WCP, RelationId::SDP, RelationId::DC, RelationId::WDP};

const char* to_string(RelationId r);
/// Case-insensitive; accepts "WDC" as an alias of DC.
std::optional<RelationId> parse_relation(std::string_view name);

class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr RelationSet(std::initializer_list<RelationId> list) {
    for (RelationId r : list) insert(r);
  }
  static constexpr RelationSet all() { return RelationSet(0x1f); }

  constexpr bool contains(RelationId r) const { return bits_ & bit(r); }
  constexpr void insert(RelationId r) { bits_ |= bit(r); }
  constexpr void erase(RelationId r) { bits_ &= ~bit(r); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  /// Comma-separated names in lattice order, e.g. "HB,WCP".
  std::string str() const;

  friend constexpr bool operator==(RelationSet a, RelationSet b) { return a.bits_ == b.bits_; }

 private:
  constexpr explicit RelationSet(std::uint8_t bits) : bits_(bits) {}
  static constexpr std::uint8_t bit(RelationId r) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace predrace
