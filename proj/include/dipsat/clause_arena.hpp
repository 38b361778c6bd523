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

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "dipsat/literal.hpp"

namespace dipsat {

using ClauseRef = uint32_t;
inline constexpr ClauseRef kNoRef = UINT32_MAX;

/// Flat clause storage. Layout per clause: [size<<4 | flags][lbd][activity]
/// followed by the literal codes.
class ClauseArena {
 public:
  enum Flag : uint32_t { kLearnt = 1, kRemoved = 2, kExtDef = 4, kReloced = 8 };
  static constexpr uint32_t kHeader = 3;

  class View {
   public:
    explicit View(uint32_t* p) : p_(p) {}

    uint32_t size() const { return p_[0] >> 4; }
    bool learnt() const { return p_[0] & kLearnt; }
    bool removed() const { return p_[0] & kRemoved; }
    bool ext_def() const { return p_[0] & kExtDef; }
    void set_flag(Flag f) { p_[0] |= f; }

    uint32_t lbd() const { return p_[1]; }
    void set_lbd(uint32_t v) { p_[1] = v; }
    float activity() const { return std::bit_cast<float>(p_[2]); }
    void set_activity(float a) { p_[2] = std::bit_cast<uint32_t>(a); }

    Lit operator[](uint32_t i) const { return Lit::from_code(p_[kHeader + i]); }
    void set(uint32_t i, Lit l) { p_[kHeader + i] = l.code(); }
    void swap(uint32_t i, uint32_t j) { std::swap(p_[kHeader + i], p_[kHeader + j]); }

    std::vector<Lit> literals() const {
      std::vector<Lit> out(size());
      for (uint32_t i = 0; i < size(); ++i) out[i] = (*this)[i];
      return out;
    }
    bool contains_var(Var v) const {
      for (uint32_t i = 0; i < size(); ++i)
        if ((*this)[i].var() == v) return true;
      return false;
    }

   private:
    friend class ClauseArena;
    uint32_t* p_;
  };

  ClauseRef alloc(std::span<const Lit> lits, uint32_t flags) {
    assert(lits.size() >= 2);
    ClauseRef cr = static_cast<ClauseRef>(mem_.size());
    mem_.push_back(static_cast<uint32_t>(lits.size()) << 4 | flags);
    mem_.push_back(0);
    mem_.push_back(std::bit_cast<uint32_t>(0.0f));
    for (Lit l : lits) mem_.push_back(l.code());
    return cr;
  }

  View operator[](ClauseRef cr) { return View(mem_.data() + cr); }
  const View operator[](ClauseRef cr) const { return View(const_cast<uint32_t*>(mem_.data()) + cr); }

  void free(ClauseRef cr) {
    View c = (*this)[cr];
    assert(!c.removed());
    c.set_flag(kRemoved);
    wasted_ += kHeader + c.size();
  }

  std::size_t size() const { return mem_.size(); }
  std::size_t wasted() const { return wasted_; }

  /// Moves `cr` into `to`, leaving a forwarding pointer. Idempotent.
  void reloc(ClauseRef& cr, ClauseArena& to) {
    View c = (*this)[cr];
    if (c.p_[0] & kReloced) {
      cr = c.p_[1];
      return;
    }
    ClauseRef fresh = static_cast<ClauseRef>(to.mem_.size());
    to.mem_.insert(to.mem_.end(), c.p_, c.p_ + kHeader + c.size());
    c.p_[0] |= kReloced;
    c.p_[1] = fresh;
    cr = fresh;
  }

 private:
  std::vector<uint32_t> mem_;
  std::size_t wasted_ = 0;
};

}  // namespace dipsat
