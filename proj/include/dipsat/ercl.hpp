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

// Extension-variable layer: choosing a dual implication point, deciding
// whether to use it, and the clauses learned from it.

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dipsat/analyze.hpp"
#include "dipsat/clause_arena.hpp"
#include "dipsat/literal.hpp"
#include "dipsat/tvd.hpp"

namespace dipsat {

enum class DipChoice { Closest, Middle, Random, Heuristic };
enum class DipClauses { OneClause, TwoClause };
enum class DipFilter { Occ, Glue, Act };

const char* to_string(DipChoice c);
const char* to_string(DipFilter f);
std::optional<DipChoice> parse_dip_choice(const std::string& s);
std::optional<DipFilter> parse_dip_filter(const std::string& s);

struct DipConfig {
  bool enabled = true;
  DipChoice choice = DipChoice::Middle;
  uint32_t min_occ = 20;
  DipClauses clauses = DipClauses::TwoClause;
  DipFilter filter = DipFilter::Occ;
  uint64_t ext_delete_interval = 1000;
  uint32_t ext_delete_fraction = 50;  // percent
  uint64_t disable_window = 100000;
  uint32_t disable_threshold = 3;  // percent
  uint64_t seed = 0;

  uint32_t replace_max_len = 30;
  uint32_t replace_max_lbd = 6;
  bool learn_binary_on_empty_d = false;

  static DipConfig off() {
    DipConfig c;
    c.enabled = false;
    return c;
  }
  static DipConfig baseline() { return DipConfig{}; }

  /// Throws std::invalid_argument when a knob is out of range.
  void validate() const;
};

/// Orders a literal pair by code.
inline std::pair<Lit, Lit> canonical_pair(Lit a, Lit b) { return a.code() < b.code() ? std::pair{a, b} : std::pair{b, a}; }

inline uint64_t pair_key(Lit l1, Lit l2) {
  auto [a, b] = canonical_pair(l1, l2);
  return uint64_t{a.code()} << 32 | b.code();
}

/// z <-> l1 & l2 with its three definition clauses.
struct ExtDef {
  Var z;
  Lit l1, l2;
  std::array<ClauseRef, 3> def_clauses{kNoRef, kNoRef, kNoRef};
};

/// Live extension definitions, indexed by z and by the literal pair.
class ExtDefStore {
 public:
  std::optional<Var> find(Lit l1, Lit l2) const;
  const ExtDef* def(Var z) const;
  ExtDef* def_mut(Var z);

  void add(const ExtDef& d);
  void remove(Var z);

  /// Number of live definitions with `v` on the right-hand side.
  uint32_t participation(Var v) const { return v.id < participation_.size() ? participation_[v.id] : 0; }

  std::vector<Var> live() const;
  std::size_t size() const { return by_z_.size(); }
  bool empty() const { return by_z_.empty(); }

  /// Empty string if indexes and counters agree with a recount.
  std::string check_consistency() const;

  template <typename F>
  void for_each(F&& f) {
    for (auto& [z, d] : by_z_) f(d);
  }

 private:
  std::unordered_map<uint32_t, ExtDef> by_z_;
  std::unordered_map<uint64_t, uint32_t> by_pair_;
  std::vector<uint32_t> participation_;
};

/// Sighting counts per literal pair. Never reset.
class DipOccurrenceTable {
 public:
  uint32_t bump(Lit a, Lit b) { return ++counts_[pair_key(a, b)]; }
  uint32_t count(Lit a, Lit b) const {
    auto it = counts_.find(pair_key(a, b));
    return it == counts_.end() ? 0 : it->second;
  }

 private:
  std::unordered_map<uint64_t, uint32_t> counts_;
};

/// Mean summed activity of the most recent encountered pairs.
class ActivityWindow {
 public:
  explicit ActivityWindow(std::size_t capacity = 20) : capacity_(capacity) {}

  /// True iff `score` strictly exceeds the current mean. Then records it.
  bool accept_and_push(double score);
  std::size_t size() const { return window_.size(); }

 private:
  std::size_t capacity_;
  std::deque<double> window_;
  double sum_ = 0.0;
};

/// A chosen pair and the side inputs of the two learned clauses.
struct DipAnalysis {
  Lit f;
  Lit a, b;
  NodeId node_a = 0, node_b = 0;
  Var z;
  std::vector<Lit> C;  // true literals, earlier levels, feeding f..{a,b}
  std::vector<Lit> D;  // true literals, earlier levels, feeding the region after {a,b}
  uint32_t level_c = 0;
  uint32_t level_d = 0;
  uint32_t post_lbd = 0;  // distinct levels of D, plus one for z
};

/// Computes C and D for the pair (u, v) of the graph.
DipAnalysis analyze_dip(const TvdProblem& g, NodeId u, NodeId v);

/// not f | not C | z
std::vector<Lit> build_pre_dip_clause(const DipAnalysis& a);
/// not z | not D
std::vector<Lit> build_post_dip_clause(const DipAnalysis& a);

/// Inputs to pair selection. `pos` and `score` are indexed by node id;
/// positions must increase along every path of the graph.
struct DipSelectionInput {
  std::span<const uint32_t> pos;
  std::span<const double> score;
  uint32_t s_pos = 0;
  uint32_t t_pos = 0;
};

std::optional<NodePair> select_dip(const TvdResult& r, DipChoice choice, const DipSelectionInput& in,
                                   std::mt19937_64& rng);

enum class PredefinedZ { Proceed, Fallback1UIP };

/// Decides what to do when the pair already has an extension variable.
/// Throws std::logic_error if z is true below the current level.
PredefinedZ handle_predefined_z(Value z_value, uint32_t z_level, uint32_t current_level);

struct ReplaceLimits {
  uint32_t max_len = 30;
  uint32_t max_lbd = 6;
};

/// Replaces every pair (not l1, not l2) by (not z) for stored definitions,
/// repeating until nothing matches. Returns the lemma unchanged if it exceeds
/// the limits.
std::vector<Lit> try_replace_in_lemma(std::vector<Lit> lemma, uint32_t lbd, const ExtDefStore& store,
                                      const ReplaceLimits& limits);

}  // namespace dipsat
