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

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <vector>

namespace dipsat {

/// A propositional variable. Internally 0-based; DIMACS index is `id + 1`.
struct Var {
  uint32_t id = std::numeric_limits<uint32_t>::max();

  constexpr Var() = default;
  constexpr explicit Var(uint32_t i) : id(i) {}

  constexpr bool valid() const { return id != std::numeric_limits<uint32_t>::max(); }
  constexpr int to_dimacs() const { return static_cast<int>(id) + 1; }

  friend constexpr bool operator==(Var, Var) = default;
  friend constexpr auto operator<=>(Var, Var) = default;
};

/// A literal packed as `var * 2 + negative`.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negative) : code_(v.id * 2 + (negative ? 1u : 0u)) {}

  static constexpr Lit from_code(uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }
  static Lit from_dimacs(int d) {
    assert(d != 0);
    return Lit(Var(static_cast<uint32_t>(std::abs(d)) - 1), d < 0);
  }

  constexpr uint32_t code() const { return code_; }
  constexpr Var var() const { return Var(code_ >> 1); }
  constexpr bool negative() const { return (code_ & 1u) != 0; }
  constexpr bool valid() const { return code_ != kInvalid; }
  int to_dimacs() const {
    int v = var().to_dimacs();
    return negative() ? -v : v;
  }

  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  static constexpr uint32_t kInvalid = std::numeric_limits<uint32_t>::max();
  uint32_t code_ = kInvalid;
};

inline constexpr Lit kNoLit{};

constexpr Lit pos(Var v) { return Lit(v, false); }
constexpr Lit neg(Var v) { return Lit(v, true); }

/// Three-valued assignment value.
enum class Value : int8_t { False = -1, Undef = 0, True = 1 };

constexpr Value operator!(Value v) { return static_cast<Value>(-static_cast<int8_t>(v)); }

/// Dense per-variable storage.
template <typename T>
class VarMap {
 public:
  void resize(std::size_t n, const T& init = T{}) { data_.resize(n, init); }
  std::size_t size() const { return data_.size(); }
  void push_back(const T& v) { data_.push_back(v); }
  void clear() { data_.clear(); }

  typename std::vector<T>::reference operator[](Var v) { return data_[v.id]; }
  typename std::vector<T>::const_reference operator[](Var v) const { return data_[v.id]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  std::vector<T> data_;
};

/// Dense per-literal storage (two slots per variable).
template <typename T>
class LitMap {
 public:
  void resize_vars(std::size_t nvars, const T& init = T{}) { data_.resize(nvars * 2, init); }
  std::size_t size() const { return data_.size(); }

  T& operator[](Lit l) { return data_[l.code()]; }
  const T& operator[](Lit l) const { return data_[l.code()]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }

 private:
  std::vector<T> data_;
};

}  // namespace dipsat

template <>
struct std::hash<dipsat::Lit> {
  std::size_t operator()(dipsat::Lit l) const noexcept { return std::hash<uint32_t>{}(l.code()); }
};
