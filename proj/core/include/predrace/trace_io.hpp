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

#include <string>
#include <string_view>
#include <vector>

#include "predrace/trace.hpp"

namespace predrace {

/// Parses the line-oriented trace format:
///   <thread> <op> [operand] [@loc] [# comment]
/// Throws Error(Syntax) with a 1-based line, or Error(WellFormedness).
Trace parse_trace(std::string_view text);
Trace read_trace_file(const std::string& path);

/// Inverse of parse_trace; `@loc` is written only when it differs from the
/// rendered op text.
std::string serialize_trace(const Trace& trace);
/// Renders a subsequence of events in trace syntax, one per line.
std::string serialize_events(const Trace& trace, const std::vector<EventId>& seq);

/// Parses `br <branch>: <read>[,<read>...]` lines into precise deps.
/// Branches that are not listed keep the conservative behaviour.
BranchDeps parse_deps(std::string_view text, const Trace& trace);
BranchDeps read_deps_file(const std::string& path, const Trace& trace);

/// A witness is a reordering of a trace's events. Each line is either event
/// indices separated by whitespace, or an event in trace syntax; the k-th
/// event line of a thread names that thread's k-th event. `#` starts a
/// comment. serialize_witness writes event lines tagged with their indices.
std::vector<EventId> parse_witness(std::string_view text, const Trace& trace);
std::vector<EventId> read_witness_file(const std::string& path, const Trace& trace);
std::string serialize_witness(const Trace& trace, const std::vector<EventId>& seq);

std::string read_file(const std::string& path);

}  // namespace predrace
