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

// CDCL search with optional DIP-based learning.

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dipsat/analyze.hpp"
#include "dipsat/clause_arena.hpp"
#include "dipsat/ercl.hpp"
#include "dipsat/formula.hpp"
#include "dipsat/literal.hpp"
#include "dipsat/proof.hpp"
#include "dipsat/var_heap.hpp"

namespace dipsat {

/// What happened at one conflict. Only built when a callback is installed.
struct ConflictReport {
  uint64_t index = 0;  // 1-based conflict number
  uint32_t level = 0;
  std::vector<Lit> conflict_clause;
  LearnedClause uip;
  TvdProblem graph;                         // empty unless DIP analysis ran
  std::vector<std::vector<Lit>> node_reasons;  // per graph node, node 0 empty
  std::vector<std::pair<Lit, Lit>> dips;    // canonical order
  bool dip_used = false;
  DipAnalysis dip;
  std::vector<Lit> pre_dip;                 // empty in one-clause mode
  std::vector<Lit> post_dip;
  uint32_t backjump_level = 0;
};

struct SolverConfig {
  double var_decay = 0.95;
  double clause_decay = 0.999;
  uint32_t restart_base = 100;
  uint64_t reduce_base = 2000;
  uint64_t reduce_inc = 300;
  DipConfig dip;

  /// Forced decisions, used before the activity heuristic.
  std::vector<Lit> decision_script;
  /// Forced DIP pairs (DIMACS literals) for the first DIP conflicts.
  std::vector<std::pair<int, int>> dip_script;
  std::function<void(const ConflictReport&)> on_conflict;

  uint64_t conflict_limit = 0;  // 0 = none
  double time_limit = 0.0;      // seconds, 0 = none

  /// Throws std::invalid_argument on bad values.
  void validate() const;
};

struct SolverStats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t reductions = 0;
  uint64_t dip_analyzed_conflicts = 0;  // conflicts where TVDs were computed
  uint64_t conflicts_with_dip = 0;
  uint64_t dip_learning_conflicts = 0;
  uint64_t dips_introduced = 0;
  uint64_t lemmas_replaced = 0;
  uint64_t ext_vars_live = 0;
  uint64_t ext_vars_deleted = 0;
  uint64_t ext_decisions = 0;
  uint64_t deletion_rounds = 0;
  uint64_t proof_adds = 0;
  bool dip_disabled = false;
  uint64_t disabled_at = 0;  // conflict count when disabled
  double solve_seconds = 0.0;
  double dip_seconds = 0.0;
  double dip_time_fraction = 0.0;

  double dip_fraction() const {
    return dip_analyzed_conflicts == 0 ? 0.0
                                       : static_cast<double>(conflicts_with_dip) / dip_analyzed_conflicts;
  }
};

enum class Status { Sat, Unsat, Unknown };
const char* to_string(Status s);

struct SolveResult {
  Status status = Status::Unknown;
  std::vector<bool> model;  // indexed by original variable, when Sat
  SolverStats stats;
};

/// Element i (1-based) of the Luby sequence.
uint64_t luby(uint64_t i);

class Solver {
 public:
  explicit Solver(SolverConfig config = {});

  /// Proof lines are written from here on. Must precede add_formula.
  void attach_proof(ProofWriter* proof) { proof_ = proof; }

  /// Loads clauses. Returns false if a conflict at level 0 was found.
  bool add_formula(const CnfFormula& f);

  SolveResult solve();

  //===--------------------------------------------------------------------===//
  // Lower-level access, used by tests.
  //===--------------------------------------------------------------------===//

  uint32_t num_vars() const { return static_cast<uint32_t>(assigns_.size()); }
  uint32_t num_original_vars() const { return num_original_vars_; }
  uint32_t decision_level() const { return static_cast<uint32_t>(trail_lim_.size()); }
  Value value(Lit l) const {
    Value v = assigns_[l.var().id];
    return l.negative() ? !v : v;
  }
  Value value(Var v) const { return assigns_[v.id]; }
  uint32_t level(Var v) const { return level_[v.id]; }
  const std::vector<Lit>& trail() const { return trail_; }
  ClauseRef reason(Var v) const { return reason_[v.id]; }
  std::vector<Lit> clause_literals(ClauseRef cr) const { return arena_[cr].literals(); }
  const SolverStats& stats() const { return stats_; }
  const ExtDefStore& ext_store() const { return store_; }
  bool is_extension(Var v) const { return is_ext_[v.id]; }
  bool is_deleted(Var v) const { return deleted_[v.id]; }
  double activity(Var v) const { return activity_[v.id]; }
  void set_activity(Var v, double a);
  bool dip_active() const { return config_.dip.enabled && !stats_.dip_disabled; }

  /// Opens a decision level and assigns `l`.
  void assume_decision(Lit l);
  /// Exhaustive unit propagation; the first falsified clause or kNoRef.
  ClauseRef propagate();
  /// The next decision literal. Throws std::logic_error if a scripted
  /// literal is already assigned.
  Lit pick_branch_literal();
  void backtrack(uint32_t level);

  /// First-UIP analysis of `confl`. Also fills `graph` when given.
  LearnedClause analyze_1uip(ClauseRef confl, TvdProblem* graph = nullptr);
  uint32_t compute_lbd(std::span<const Lit> lits);

  /// Adds a learnt clause of size >= 2 without asserting anything.
  ClauseRef add_learnt(std::span<const Lit> lits, uint32_t lbd, float activity = 0.0f);
  std::size_t num_learnts() const { return learnts_.size(); }
  std::vector<ClauseRef> learnts() const { return learnts_; }
  void reduce_db();

  /// Returns the extension variable of l1 & l2, creating it if needed.
  std::pair<Var, bool> get_or_create_extvar(Lit l1, Lit l2);
  /// Deletes the least active unused extension variables. Level 0 only.
  void delete_ext_vars();

  /// Structural self-check; empty when consistent.
  std::vector<std::string> audit() const;
  /// True if no live clause is unit or falsified under the assignment.
  bool at_fixpoint() const;

 private:
  struct Watcher {
    ClauseRef cr;
    Lit blocker;
  };

  Var new_var(bool ext);
  void attach(ClauseRef cr);
  void enqueue(Lit l, ClauseRef reason);
  bool locked(ClauseRef cr) const;
  void remove_clause(ClauseRef cr);
  void garbage_collect();
  std::vector<ClauseRef> all_live_clauses() const;

  void bump_var(Var v);
  void bump_clause(ClauseRef cr);
  void decay();

  // Conflict handling. Returns false when the formula is refuted.
  bool handle_conflict(ClauseRef confl);
  LearnedClause analyze(ClauseRef confl, TvdProblem* graph, bool side_inputs);
  void fill_side_inputs(TvdProblem& g, ClauseRef confl);
  bool try_dip(TvdProblem& g, ClauseRef confl, ConflictReport* report);
  void learn_dip(DipAnalysis& a, ConflictReport* report);
  void learn_1uip(LearnedClause& lc, ConflictReport* report);
  bool replacement_valid(std::vector<Lit>& lemma, uint32_t& bj) const;
  void check_disable_monitor();
  void proof_add(std::span<const Lit> c);
  void proof_delete(std::span<const Lit> c);
  bool out_of_budget() const;
  std::vector<bool> extract_model() const;

  SolverConfig config_;
  std::mt19937_64 rng_;
  ProofWriter* proof_ = nullptr;
  bool ok_ = true;
  uint32_t num_original_vars_ = 0;

  ClauseArena arena_;
  std::vector<ClauseRef> originals_;
  std::vector<ClauseRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;  // by literal code

  std::vector<Value> assigns_;
  std::vector<uint32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<uint32_t> trail_index_;
  std::vector<Lit> trail_;
  std::vector<uint32_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  VarHeap heap_{activity_};
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<bool> polarity_;  // saved phase, true = negative
  std::vector<bool> is_ext_;
  std::vector<bool> deleted_;
  std::vector<bool> seen_;
  std::vector<uint64_t> level_stamp_;
  uint64_t stamp_ = 0;

  TvdProblem graph_;
  std::vector<Lit> region_;
  std::vector<uint32_t> raw_edges_, edge_groups_;
  Dag dag_;
  std::vector<NodeId> node_of_;  // by var, valid for current graph nodes
  std::vector<double> score_;

  ExtDefStore store_;
  DipOccurrenceTable occ_;
  ActivityWindow act_window_{20};
  std::size_t script_pos_ = 0;
  std::size_t dip_script_pos_ = 0;

  uint64_t restart_index_ = 1;
  uint64_t conflicts_since_restart_ = 0;
  uint64_t next_reduce_ = 0;
  uint64_t reduce_rounds_ = 0;
  uint64_t last_ext_delete_ = 0;

  SolverStats stats_;
  std::chrono::steady_clock::time_point start_;
};

/// One-shot convenience wrapper.
SolveResult solve(const CnfFormula& f, const SolverConfig& config = {}, ProofWriter* proof = nullptr);

}  // namespace dipsat
