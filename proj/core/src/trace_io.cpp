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

#include "predrace/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace predrace {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Calls fn(line_number, content) for each line with comments stripped.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (!line.empty()) fn(line_no, line);
    if (nl == text.size()) break;
    pos = nl + 1;
  }
}

bool parse_op(std::string_view word, Op& op) {
  static const std::pair<const char*, Op> table[] = {
      {"wr", Op::Write},        {"rd", Op::Read},          {"acq", Op::Acquire},
      {"rel", Op::Release},     {"br", Op::Branch},        {"fork", Op::Fork},
      {"join", Op::Join},       {"ard", Op::AtomicRead},   {"awr", Op::AtomicWrite},
      {"rmw", Op::AtomicRmw},
  };
  for (const auto& [name, value] : table)
    if (word == name) {
      op = value;
      return true;
    }
  return false;
}

bool parse_index(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

[[noreturn]] void syntax(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::Syntax, line, why);
}

}  // namespace

Trace parse_trace(std::string_view text) {
  TraceBuilder b;
  std::unordered_map<std::string, bool> is_lock;  // name -> used as lock

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    std::string_view loc;
    if (auto at = line.find('@'); at != std::string_view::npos) {
      loc = trim(line.substr(at + 1));
      if (loc.empty()) syntax(line_no, "empty location after '@'");
      line = trim(line.substr(0, at));
    }
    auto words = split_ws(line);
    if (words.size() < 2) syntax(line_no, "expected '<thread> <op>'");
    Op op;
    if (!parse_op(words[1], op)) syntax(line_no, "unknown operation '" + std::string(words[1]) + "'");
    const std::size_t want = op == Op::Branch ? 2 : 3;
    if (words.size() < want) syntax(line_no, std::string("missing operand for ") + op_keyword(op));
    if (words.size() > want) syntax(line_no, "unexpected '" + std::string(words[want]) + "'");

    std::string_view operand = want == 3 ? words[2] : std::string_view{};
    if (has_var(op) || has_lock(op)) {
      auto [it, fresh] = is_lock.emplace(std::string(operand), has_lock(op));
      if (!fresh && it->second != has_lock(op))
        syntax(line_no, "'" + std::string(operand) + "' used as both a lock and a variable");
    }
    b.add(words[0], op, operand, loc);
  });
  return b.build();
}

Trace read_trace_file(const std::string& path) { return parse_trace(read_file(path)); }

static void write_event(std::ostringstream& os, const Trace& trace, EventId e) {
  std::string text = trace.render(e);
  os << trace.thread_name(trace[e].tid) << ' ' << text;
  if (trace.loc_of(e) != text) os << " @" << trace.loc_of(e);
  os << '\n';
}

std::string serialize_trace(const Trace& trace) {
  std::ostringstream os;
  for (std::size_t i = 0; i < trace.size(); ++i) write_event(os, trace, static_cast<EventId>(i));
  return os.str();
}

std::string serialize_events(const Trace& trace, const std::vector<EventId>& seq) {
  std::ostringstream os;
  for (EventId e : seq) write_event(os, trace, e);
  return os.str();
}

BranchDeps parse_deps(std::string_view text, const Trace& trace) {
  BranchDeps deps;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.substr(0, 2) != "br" || line.size() < 3 || (line[2] != ' ' && line[2] != '\t'))
      syntax(line_no, "expected 'br <branch>: <reads>'");
    std::string_view rest = trim(line.substr(2));
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) syntax(line_no, "missing ':'");
    std::uint64_t b = 0;
    if (!parse_index(trim(rest.substr(0, colon)), b)) syntax(line_no, "bad branch index");
    if (b >= trace.size() || trace[static_cast<EventId>(b)].op != Op::Branch)
      throw Error(ErrorKind::BadIndex, b, "not a branch event");
    const auto branch = static_cast<EventId>(b);

    std::vector<EventId> list;
    std::string_view items = trim(rest.substr(colon + 1));
    while (!items.empty()) {
      auto comma = items.find(',');
      std::string_view item = trim(items.substr(0, comma));
      std::uint64_t r = 0;
      if (!parse_index(item, r)) syntax(line_no, "bad read index '" + std::string(item) + "'");
      if (r >= trace.size() || !reads(trace[static_cast<EventId>(r)].op))
        throw Error(ErrorKind::BadIndex, r, "not a read event");
      if (!trace.po_before(static_cast<EventId>(r), branch))
        throw Error(ErrorKind::BadIndex, r, "read is not program-ordered before branch " +
                                                std::to_string(branch));
      list.push_back(static_cast<EventId>(r));
      if (comma == std::string_view::npos) break;
      items = trim(items.substr(comma + 1));
      if (items.empty()) syntax(line_no, "trailing ','");
    }
    if (deps.listed(branch)) syntax(line_no, "branch " + std::to_string(branch) + " listed twice");
    deps.set(branch, std::move(list));
  });
  return deps;
}

BranchDeps read_deps_file(const std::string& path, const Trace& trace) {
  return parse_deps(read_file(path), trace);
}

std::vector<EventId> parse_witness(std::string_view text, const Trace& trace) {
  std::vector<EventId> seq;
  std::unordered_map<std::string_view, ThreadId> thread_ids;
  for (ThreadId t = 0; t < trace.thread_count(); ++t) thread_ids.emplace(trace.thread_name(t), t);
  std::vector<std::uint32_t> next(trace.thread_count(), 0);

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.front() >= '0' && line.front() <= '9') {
      for (std::string_view w : split_ws(line)) {
        std::uint64_t v = 0;
        if (!parse_index(w, v)) syntax(line_no, "bad event index '" + std::string(w) + "'");
        if (v >= trace.size()) throw Error(ErrorKind::BadIndex, v, "event index out of range");
        seq.push_back(static_cast<EventId>(v));
      }
      return;
    }
    // Event form: the k-th line of a thread names that thread's k-th event.
    if (auto at = line.find('@'); at != std::string_view::npos) line = trim(line.substr(0, at));
    auto words = split_ws(line);
    if (words.size() < 2) syntax(line_no, "expected an event index or '<thread> <op>'");
    auto it = thread_ids.find(words[0]);
    if (it == thread_ids.end()) syntax(line_no, "unknown thread '" + std::string(words[0]) + "'");
    const auto& events = trace.thread_events(it->second);
    std::uint32_t& k = next[it->second];
    if (k >= events.size()) syntax(line_no, "thread " + std::string(words[0]) + " has no more events");
    const EventId e = events[k++];
    std::string text;
    for (std::size_t i = 1; i < words.size(); ++i) {
      if (i > 1) text += ' ';
      text += words[i];
    }
    if (text != trace.render(e))
      syntax(line_no, "expected '" + trace.render(e) + "' for event " + std::to_string(e));
    seq.push_back(e);
  });
  return seq;
}

std::vector<EventId> read_witness_file(const std::string& path, const Trace& trace) {
  return parse_witness(read_file(path), trace);
}

std::string serialize_witness(const Trace& trace, const std::vector<EventId>& seq) {
  std::ostringstream os;
  for (EventId e : seq) os << trace.thread_name(trace[e].tid) << ' ' << trace.render(e) << "  # " << e << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace predrace
