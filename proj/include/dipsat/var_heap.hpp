// Copyright 2026 The dipsat Authors
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
#include <vector>

namespace dipsat {

/// Binary max-heap of variable indices keyed by an external activity array.
/// Equal activities order by lower index first.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& activity) : act_(activity) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(uint32_t v) const { return v < pos_.size() && pos_[v] >= 0; }

  void insert(uint32_t v) {
    if (v >= pos_.size()) pos_.resize(v + 1, -1);
    if (contains(v)) return;
    pos_[v] = static_cast<int32_t>(heap_.size());
    heap_.push_back(v);
    up(heap_.size() - 1);
  }

  uint32_t top() const { return heap_[0]; }

  uint32_t pop() {
    uint32_t v = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    pos_[v] = -1;
    heap_.pop_back();
    if (!heap_.empty()) down(0);
    return v;
  }

  /// Restores order after the key of `v` increased.
  void increased(uint32_t v) {
    if (contains(v)) up(static_cast<std::size_t>(pos_[v]));
  }

  void rebuild(const std::vector<uint32_t>& vars) {
    for (uint32_t v : heap_) pos_[v] = -1;
    heap_.clear();
    for (uint32_t v : vars) insert(v);
  }

 private:
  bool before(uint32_t a, uint32_t b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }

  void up(std::size_t i) {
    uint32_t v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = static_cast<int32_t>(i);
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int32_t>(i);
  }

  void down(std::size_t i) {
    uint32_t v = heap_[i];
    while (true) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = static_cast<int32_t>(i);
      i = child;
    }
    heap_[i] = v;
    pos_[v] = static_cast<int32_t>(i);
  }

  const std::vector<double>& act_;
  std::vector<uint32_t> heap_;
  std::vector<int32_t> pos_;
};

}  // namespace dipsat
