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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

namespace predrace {

/// Map from thread to counter. Components beyond size() read as zero and the
/// clock grows on demand.
class VectorClock {
 public:
  using Value = std::uint32_t;

  VectorClock() = default;
  explicit VectorClock(std::size_t threads) : v_(threads, 0) {}
  VectorClock(std::initializer_list<Value> init) : v_(init) {}

  std::size_t size() const { return v_.size(); }
  Value operator[](std::size_t t) const { return t < v_.size() ? v_[t] : 0; }

  void set(std::size_t t, Value value) {
    if (t >= v_.size()) v_.resize(t + 1, 0);
    v_[t] = value;
  }
  void increment(std::size_t t) { set(t, (*this)[t] + 1); }

  /// Pointwise max, in place.
  VectorClock& join(const VectorClock& other) {
    if (other.v_.size() > v_.size()) v_.resize(other.v_.size(), 0);
    for (std::size_t i = 0; i < other.v_.size(); ++i) v_[i] = std::max(v_[i], other.v_[i]);
    return *this;
  }

  /// Pointwise <=.
  bool leq(const VectorClock& other) const {
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (v_[i] > other[i]) return false;
    return true;
  }

  /// Copy with component t replaced.
  VectorClock with_component(std::size_t t, Value value) const {
    VectorClock c = *this;
    c.set(t, value);
    return c;
  }

  const Value* data() const { return v_.data(); }
  const std::vector<Value>& values() const { return v_; }

  friend bool operator==(const VectorClock& a, const VectorClock& b) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  std::vector<Value> v_;
};

inline VectorClock join(VectorClock a, const VectorClock& b) { return a.join(b); }
inline bool leq(const VectorClock& a, const VectorClock& b) { return a.leq(b); }
inline VectorClock with_component(const VectorClock& c, std::size_t t, VectorClock::Value v) {
  return c.with_component(t, v);
}

std::ostream& operator<<(std::ostream& os, const VectorClock& c);

/// FIFO of clocks used for the acquire/release queues.
template <typename T = VectorClock>
class ClockQueue {
 public:
  bool empty() const { return q_.empty(); }
  std::size_t size() const { return q_.size(); }
  const T& front() const { return q_.front(); }
  void enqueue(T value) { q_.push_back(std::move(value)); }
  T dequeue() {
    T v = std::move(q_.front());
    q_.pop_front();
    return v;
  }

 private:
  std::deque<T> q_;
};

}  // namespace predrace
