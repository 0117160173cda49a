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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace predrace {

enum class ErrorKind {
  Syntax,
  WellFormedness,
  BadIndex,
  BudgetExceeded,
  InternalInvariant,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `where` is a 1-based line number for
/// Syntax errors and a 0-based event index for the others (or npos).
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, std::size_t where, const std::string& reason);

  ErrorKind kind() const { return kind_; }
  std::size_t where() const { return where_; }
  const std::string& reason() const { return reason_; }

 private:
  ErrorKind kind_;
  std::size_t where_;
  std::string reason_;
};

}  // namespace predrace
