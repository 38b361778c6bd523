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

#include "dipsat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>

#include "dipsat/tvd.hpp"

namespace dipsat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "SATISFIABLE";
    case Status::Unsat: return "UNSATISFIABLE";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

uint64_t luby(uint64_t i) {
  assert(i >= 1);
  uint64_t x = i - 1;
  uint64_t size = 1;
  uint32_t seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return uint64_t{1} << seq;
}

void SolverConfig::validate() const {
  if (!(var_decay > 0 && var_decay < 1)) throw std::invalid_argument("var_decay must be in (0,1)");
  if (!(clause_decay > 0 && clause_decay < 1)) throw std::invalid_argument("clause_decay must be in (0,1)");
  if (restart_base == 0) throw std::invalid_argument("restart_base must be positive");
  if (reduce_base == 0) throw std::invalid_argument("reduce_base must be positive");
  dip.validate();
}

Solver::Solver(SolverConfig config) : config_(std::move(config)), rng_(config_.dip.seed) {
  config_.validate();
  next_reduce_ = config_.reduce_base;
}

//===----------------------------------------------------------------------===//
// Variables and clauses
//===----------------------------------------------------------------------===//

Var Solver::new_var(bool ext) {
  Var v(num_vars());
  assigns_.push_back(Value::Undef);
  level_.push_back(0);
  reason_.push_back(kNoRef);
  trail_index_.push_back(0);
  activity_.push_back(0.0);
  polarity_.push_back(true);
  is_ext_.push_back(ext);
  deleted_.push_back(false);
  seen_.push_back(false);
  node_of_.push_back(0);
  watches_.resize(2 * (v.id + 1));
  heap_.insert(v.id);
  if (ext) ++stats_.ext_vars_live;
  return v;
}

void Solver::set_activity(Var v, double a) {
  activity_[v.id] = a;
  if (heap_.contains(v.id)) {
    std::vector<uint32_t> vars;
    for (uint32_t i = 0; i < num_vars(); ++i)
      if (heap_.contains(i)) vars.push_back(i);
    heap_.rebuild(vars);
  }
}

void Solver::attach(ClauseRef cr) {
  auto c = arena_[cr];
  assert(c.size() >= 2);
  watches_[c[0].code()].push_back({cr, c[1]});
  watches_[c[1].code()].push_back({cr, c[0]});
}

void Solver::enqueue(Lit l, ClauseRef reason) {
  assert(value(l) == Value::Undef);
  Var v = l.var();
  assigns_[v.id] = l.negative() ? Value::False : Value::True;
  level_[v.id] = decision_level();
  reason_[v.id] = reason;
  trail_index_[v.id] = static_cast<uint32_t>(trail_.size());
  trail_.push_back(l);
}

bool Solver::locked(ClauseRef cr) const {
  const auto c = arena_[cr];
  Var v = c[0].var();
  return reason_[v.id] == cr && value(c[0]) == Value::True;
}

void Solver::proof_add(std::span<const Lit> c) {
  if (proof_) proof_->emit_add(c);
}

void Solver::proof_delete(std::span<const Lit> c) {
  if (proof_) proof_->emit_delete(c);
}

void Solver::remove_clause(ClauseRef cr) {
  auto c = arena_[cr];
  auto lits = c.literals();
  proof_delete(lits);
  arena_.free(cr);
}

std::vector<ClauseRef> Solver::all_live_clauses() const {
  std::vector<ClauseRef> out = originals_;
  out.insert(out.end(), learnts_.begin(), learnts_.end());
  for (Var z : store_.live()) {
    const ExtDef* d = store_.def(z);
    out.insert(out.end(), d->def_clauses.begin(), d->def_clauses.end());
  }
  return out;
}

void Solver::garbage_collect() {
  ClauseArena to;
  for (ClauseRef& cr : originals_) arena_.reloc(cr, to);
  for (ClauseRef& cr : learnts_) arena_.reloc(cr, to);
  store_.for_each([&](ExtDef& d) {
    for (ClauseRef& cr : d.def_clauses) arena_.reloc(cr, to);
  });
  for (Lit l : trail_) {
    ClauseRef& r = reason_[l.var().id];
    if (r != kNoRef) arena_.reloc(r, to);
  }
  arena_ = std::move(to);
  for (auto& ws : watches_) ws.clear();
  for (ClauseRef cr : all_live_clauses()) attach(cr);
}

bool Solver::add_formula(const CnfFormula& f) {
  if (num_vars() != 0 || !originals_.empty()) throw std::logic_error("formula already loaded");
  num_original_vars_ = f.num_vars;
  for (uint32_t i = 0; i < f.num_vars; ++i) new_var(false);
  for (const Clause& c : f.clauses) {
    if (c.empty()) {
      ok_ = false;
      continue;
    }
    if (c.size() == 1) {
      Value v = value(c[0]);
      if (v == Value::False) ok_ = false;
      if (v == Value::Undef) enqueue(c[0], kNoRef);
      continue;
    }
    std::vector<Lit> lits(c.begin(), c.end());
    ClauseRef cr = arena_.alloc(lits, 0);
    originals_.push_back(cr);
    attach(cr);
  }
  return ok_;
}

ClauseRef Solver::add_learnt(std::span<const Lit> lits, uint32_t lbd, float activity) {
  ClauseRef cr = arena_.alloc(lits, ClauseArena::kLearnt);
  auto c = arena_[cr];
  c.set_lbd(lbd);
  c.set_activity(activity);
  attach(cr);
  learnts_.push_back(cr);
  return cr;
}

//===----------------------------------------------------------------------===//
// Propagation and decisions
//===----------------------------------------------------------------------===//

void Solver::assume_decision(Lit l) {
  ++stats_.decisions;
  if (is_ext_[l.var().id]) ++stats_.ext_decisions;
  trail_lim_.push_back(static_cast<uint32_t>(trail_.size()));
  enqueue(l, kNoRef);
}

ClauseRef Solver::propagate() {
  ClauseRef confl = kNoRef;
  while (qhead_ < trail_.size()) {
    Lit f = ~trail_[qhead_++];
    ++stats_.propagations;
    auto& ws = watches_[f.code()];
    std::size_t i = 0, j = 0, n = ws.size();
    while (i < n) {
      Watcher w = ws[i];
      if (value(w.blocker) == Value::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto c = arena_[w.cr];
      ++i;
      if (c.removed()) continue;
      if (c[0] == f) c.swap(0, 1);
      Lit first = c[0];
      Watcher keep{w.cr, first};
      if (first != w.blocker && value(first) == Value::True) {
        ws[j++] = keep;
        continue;
      }
      bool moved = false;
      for (uint32_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != Value::False) {
          c.swap(1, k);
          watches_[c[1].code()].push_back(keep);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = keep;
      if (value(first) == Value::False) {
        confl = w.cr;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cr);
      }
    }
    ws.resize(j);
    if (confl != kNoRef) break;
  }
  return confl;
}

Lit Solver::pick_branch_literal() {
  if (script_pos_ < config_.decision_script.size()) {
    Lit l = config_.decision_script[script_pos_++];
    if (l.var().id >= num_vars() || value(l) != Value::Undef)
      throw std::logic_error("scripted decision " + std::to_string(l.to_dimacs()) + " is already assigned");
    return l;
  }
  while (!heap_.empty()) {
    uint32_t v = heap_.pop();
    if (assigns_[v] != Value::Undef || deleted_[v]) continue;
    return Lit(Var(v), polarity_[v]);
  }
  return kNoLit;
}

void Solver::backtrack(uint32_t lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    Var v = trail_[i].var();
    assigns_[v.id] = Value::Undef;
    reason_[v.id] = kNoRef;
    polarity_[v.id] = trail_[i].negative();
    if (!deleted_[v.id]) heap_.insert(v.id);
  }
  trail_.resize(trail_lim_[lvl]);
  qhead_ = trail_.size();
  trail_lim_.resize(lvl);
}

//===----------------------------------------------------------------------===//
// Activities
//===----------------------------------------------------------------------===//

void Solver::bump_var(Var v) {
  if ((activity_[v.id] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  heap_.increased(v.id);
}

void Solver::bump_clause(ClauseRef cr) {
  auto c = arena_[cr];
  c.set_activity(c.activity() + static_cast<float>(cla_inc_));
  if (c.activity() > 1e20f) {
    for (ClauseRef l : learnts_) {
      auto lc = arena_[l];
      lc.set_activity(lc.activity() * 1e-20f);
    }
    cla_inc_ *= 1e-20;
  }
}

void Solver::decay() {
  var_inc_ /= config_.var_decay;
  cla_inc_ /= config_.clause_decay;
}

//===----------------------------------------------------------------------===//
// Conflict analysis
//===----------------------------------------------------------------------===//

uint32_t Solver::compute_lbd(std::span<const Lit> lits) {
  if (level_stamp_.size() < decision_level() + 1) level_stamp_.resize(decision_level() + 1, 0);
  ++stamp_;
  uint32_t n = 0;
  for (Lit l : lits) {
    assert(value(l) != Value::Undef);
    uint32_t lv = level_[l.var().id];
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++n;
    }
  }
  return n;
}

LearnedClause Solver::analyze_1uip(ClauseRef confl, TvdProblem* graph) { return analyze(confl, graph, true); }

LearnedClause Solver::analyze(ClauseRef confl, TvdProblem* graph, bool side_inputs) {
  const uint32_t cur = decision_level();
  assert(cur > 0);
  const ClauseRef conflict = confl;
  std::vector<Lit> out{kNoLit};
  std::vector<Lit>& region = region_;  // current-level literals resolved, reverse trail order
  region.clear();
  // Current-level antecedents by source variable, one group per resolved clause.
  raw_edges_.clear();
  edge_groups_.clear();
  int path = 0;
  Lit p = kNoLit;
  std::size_t index = trail_.size();

  do {
    auto c = arena_[confl];
    if (c.learnt()) bump_clause(confl);
    if (graph) edge_groups_.push_back(static_cast<uint32_t>(raw_edges_.size()));
    for (uint32_t j = (p == kNoLit) ? 0 : 1; j < c.size(); ++j) {
      Lit q = c[j];
      Var v = q.var();
      if (graph && level_[v.id] >= cur) raw_edges_.push_back(v.id);
      if (seen_[v.id] || level_[v.id] == 0) continue;
      seen_[v.id] = true;
      bump_var(v);
      if (level_[v.id] >= cur)
        ++path;
      else
        out.push_back(q);
    }
    while (!seen_[trail_[--index].var().id]) {
    }
    p = trail_[index];
    confl = reason_[p.var().id];
    seen_[p.var().id] = false;
    --path;
    if (graph) region.push_back(p);
  } while (path > 0);
  out[0] = ~p;

  for (std::size_t i = 1; i < out.size(); ++i) seen_[out[i].var().id] = false;

  LearnedClause lc;
  if (out.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (level_[out[i].var().id] > level_[out[best].var().id]) best = i;
    std::swap(out[1], out[best]);
    lc.backjump_level = level_[out[1].var().id];
  }
  lc.asserting_literal = out[0];
  lc.lbd = compute_lbd(out);
  lc.literals = std::move(out);

  if (graph) {
    auto t0 = Clock::now();
    TvdProblem& g = *graph;
    g.nodes.clear();
    g.edges.clear();
    g.side_inputs.clear();
    g.trail_pos.clear();
    g.level = cur;
    std::reverse(region.begin(), region.end());
    for (Lit l : region) {
      node_of_[l.var().id] = static_cast<NodeId>(g.nodes.size());
      g.nodes.push_back(l);
      g.trail_pos.push_back(trail_index_[l.var().id]);
    }
    const NodeId sink = static_cast<NodeId>(g.nodes.size());
    g.nodes.push_back(kNoLit);
    g.trail_pos.push_back(static_cast<uint32_t>(trail_.size()));

    // Group k > 0 holds the reason of node sink - k; group 0 the conflict.
    edge_groups_.push_back(static_cast<uint32_t>(raw_edges_.size()));
    const uint32_t groups = static_cast<uint32_t>(edge_groups_.size()) - 1;
    auto add_group = [&](uint32_t k, NodeId target) {
      for (uint32_t e = edge_groups_[k]; e < edge_groups_[k + 1]; ++e)
        g.edges.emplace_back(node_of_[raw_edges_[e]], target);
    };
    for (uint32_t k = groups - 1; k >= 1; --k) add_group(k, sink - k);
    add_group(0, sink);
    if (side_inputs) fill_side_inputs(g, conflict);
    stats_.dip_seconds += seconds_since(t0);
  }
  return lc;
}

void Solver::fill_side_inputs(TvdProblem& g, ClauseRef confl) {
  if (!g.side_inputs.empty()) return;
  const NodeId sink = g.t();
  g.side_inputs.resize(g.nodes.size());
  auto add_inputs = [&](NodeId target, ClauseRef cr, uint32_t skip) {
    auto c = arena_[cr];
    for (uint32_t j = skip; j < c.size(); ++j) {
      uint32_t lv = level_[c[j].var().id];
      if (lv != g.level && lv > 0) g.side_inputs[target].push_back({~c[j], lv});
    }
  };
  for (NodeId i = 1; i < sink; ++i) add_inputs(i, reason_[g.nodes[i].var().id], 1);
  add_inputs(sink, confl, 0);
}

//===----------------------------------------------------------------------===//
// Learning
//===----------------------------------------------------------------------===//

std::pair<Var, bool> Solver::get_or_create_extvar(Lit l1, Lit l2) {
  if (auto z = store_.find(l1, l2)) return {*z, false};
  auto [a, b] = canonical_pair(l1, l2);
  Var z = new_var(true);
  if (proof_) proof_->emit_extension(z, a, b);
  ExtDef d{z, a, b, {}};
  std::vector<std::vector<Lit>> defs = {{pos(z), ~a, ~b}, {neg(z), a}, {neg(z), b}};
  for (std::size_t k = 0; k < 3; ++k) {
    auto& lits = defs[k];
    // Watch the literals that are not false, deepest-assigned false last.
    std::stable_sort(lits.begin(), lits.end(), [&](Lit x, Lit y) {
      bool fx = value(x) == Value::False, fy = value(y) == Value::False;
      if (fx != fy) return !fx;
      return fx && level_[x.var().id] > level_[y.var().id];
    });
    d.def_clauses[k] = arena_.alloc(lits, ClauseArena::kExtDef);
    attach(d.def_clauses[k]);
  }
  store_.add(d);
  return {z, true};
}

bool Solver::try_dip(TvdProblem& g, ClauseRef confl, ConflictReport* report) {
  ++stats_.dip_analyzed_conflicts;
  if (g.nodes.size() <= 3) return false;
  dag_.assign(static_cast<uint32_t>(g.nodes.size()), g.edges, g.s(), g.t());
  const Dag& dag = dag_;
  auto paths = find_two_disjoint_paths(dag);
  if (!paths) return false;
  TvdResult r = find_all_tvds(dag, std::move(*paths));
  if (r.empty()) return false;
  ++stats_.conflicts_with_dip;

  if (report) {
    for (auto [x, y] : enumerate_pairs(r)) report->dips.emplace_back(g.nodes[x], g.nodes[y]);
  }

  NodePair pick;
  bool forced = false;
  if (dip_script_pos_ < config_.dip_script.size()) {
    auto [x, y] = config_.dip_script[dip_script_pos_++];
    NodeId u = g.find(Lit::from_dimacs(x)), v = g.find(Lit::from_dimacs(y));
    pick = {std::min(u, v), std::max(u, v)};
    auto all = enumerate_pairs(r);
    if (std::find(all.begin(), all.end(), pick) == all.end())
      throw std::logic_error("scripted pair is not a dual implication point");
    forced = true;
  } else {
    score_.assign(g.nodes.size(), 0.0);
    if (config_.dip.choice == DipChoice::Heuristic)
      for (NodeId i = 0; i + 1 < g.nodes.size(); ++i) score_[i] = activity_[g.nodes[i].var().id];
    DipSelectionInput in{g.trail_pos, score_, g.trail_pos[g.s()], g.trail_pos[g.t()]};
    pick = *select_dip(r, config_.dip.choice, in, rng_);
  }

  Lit la = g.nodes[pick.first], lb = g.nodes[pick.second];
  DipAnalysis a;
  bool analyzed = false;
  if (!forced) {
    bool accept = false;
    switch (config_.dip.filter) {
      case DipFilter::Occ: accept = occ_.bump(la, lb) >= config_.dip.min_occ; break;
      case DipFilter::Glue:
        fill_side_inputs(g, confl);
        a = analyze_dip(g, pick.first, pick.second);
        analyzed = true;
        accept = a.post_lbd == 2;
        break;
      case DipFilter::Act:
        accept = act_window_.accept_and_push(activity_[la.var().id] + activity_[lb.var().id]);
        break;
    }
    if (!accept) return false;
  }
  if (!analyzed) {
    fill_side_inputs(g, confl);
    a = analyze_dip(g, pick.first, pick.second);
  }

  if (auto z = store_.find(a.a, a.b)) {
    if (handle_predefined_z(value(*z), level_[z->id], decision_level()) == PredefinedZ::Fallback1UIP) return false;
  }
  learn_dip(a, report);
  return true;
}

void Solver::learn_dip(DipAnalysis& a, ConflictReport* report) {
  backtrack(a.level_d);
  auto [z, fresh] = get_or_create_extvar(a.a, a.b);
  a.z = z;
  if (fresh) ++stats_.dips_introduced;
  ++stats_.dip_learning_conflicts;

  std::vector<Lit> pre;
  if (config_.dip.clauses == DipClauses::TwoClause) {
    pre = build_pre_dip_clause(a);
    proof_add(pre);
    std::vector<Lit> watched = pre;
    std::swap(watched[1], watched.back());  // watch not-f and z
    std::vector<uint32_t> levels;
    for (Lit c : a.C) levels.push_back(level_[c.var().id]);
    std::sort(levels.begin(), levels.end());
    uint32_t lbd = static_cast<uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin()) + 1;
    add_learnt(watched, lbd);
  }

  std::vector<Lit> post = build_post_dip_clause(a);
  proof_add(post);
  if (post.size() == 1) {
    enqueue(post[0], kNoRef);
    if (config_.dip.learn_binary_on_empty_d) {
      const Lit bin[] = {~a.a, ~a.b};
      proof_add(bin);
      add_learnt(bin, 2);
    }
  } else {
    std::vector<Lit> watched = post;
    std::size_t best = 1;
    for (std::size_t i = 2; i < watched.size(); ++i)
      if (level_[watched[i].var().id] > level_[watched[best].var().id]) best = i;
    std::swap(watched[1], watched[best]);
    ClauseRef cr = add_learnt(watched, a.post_lbd);
    bump_clause(cr);
    enqueue(watched[0], cr);
  }

  if (report) {
    report->dip_used = true;
    report->dip = a;
    report->pre_dip = pre;
    report->post_dip = post;
    report->backjump_level = a.level_d;
  }
}

bool Solver::replacement_valid(std::vector<Lit>& lemma, uint32_t& bj) const {
  const uint32_t cur = decision_level();
  std::size_t at_cur = 0, idx = 0;
  for (std::size_t i = 0; i < lemma.size(); ++i) {
    if (value(lemma[i]) != Value::False) return false;
    if (level_[lemma[i].var().id] == cur) {
      ++at_cur;
      idx = i;
    }
  }
  if (at_cur != 1) return false;
  std::swap(lemma[0], lemma[idx]);
  bj = 0;
  if (lemma.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < lemma.size(); ++i)
      if (level_[lemma[i].var().id] > level_[lemma[best].var().id]) best = i;
    std::swap(lemma[1], lemma[best]);
    bj = level_[lemma[1].var().id];
  }
  return true;
}

void Solver::learn_1uip(LearnedClause& lc, ConflictReport* report) {
  std::vector<Lit> lemma = lc.literals;
  uint32_t lbd = lc.lbd;
  uint32_t bj = lc.backjump_level;
  bool replaced = false;

  if (!store_.empty()) {
    ReplaceLimits limits{config_.dip.replace_max_len, config_.dip.replace_max_lbd};
    std::vector<Lit> repl = try_replace_in_lemma(lemma, lbd, store_, limits);
    uint32_t bj2 = 0;
    if (repl.size() != lemma.size() && replacement_valid(repl, bj2)) {
      proof_add(lemma);
      proof_add(repl);
      proof_delete(lemma);
      lemma = std::move(repl);
      bj = bj2;
      lbd = compute_lbd(lemma);
      replaced = true;
      ++stats_.lemmas_replaced;
    }
  }
  if (!replaced) proof_add(lemma);

  backtrack(bj);
  if (lemma.size() == 1) {
    enqueue(lemma[0], kNoRef);
  } else {
    ClauseRef cr = add_learnt(lemma, lbd);
    bump_clause(cr);
    enqueue(lemma[0], cr);
  }
  if (report) report->backjump_level = bj;
}

void Solver::check_disable_monitor() {
  if (!dip_active() || stats_.conflicts != config_.dip.disable_window) return;
  if (stats_.decisions == 0 ||
      stats_.ext_decisions * 100 < uint64_t{config_.dip.disable_threshold} * stats_.decisions) {
    stats_.dip_disabled = true;
    stats_.disabled_at = stats_.conflicts;
  }
}

bool Solver::handle_conflict(ClauseRef confl) {
  ++stats_.conflicts;
  ++conflicts_since_restart_;
  if (decision_level() == 0) return false;

  ConflictReport report;
  ConflictReport* rp = config_.on_conflict ? &report : nullptr;
  if (rp) {
    rp->index = stats_.conflicts;
    rp->level = decision_level();
    rp->conflict_clause = arena_[confl].literals();
  }

  const bool dip = dip_active();
  TvdProblem& g = graph_;
  LearnedClause lc = analyze(confl, dip ? &g : nullptr, rp != nullptr);
  if (rp) rp->uip = lc;

  if (rp && dip) {
    rp->node_reasons.resize(g.nodes.size());
    for (NodeId i = 1; i + 1 < g.nodes.size(); ++i)
      rp->node_reasons[i] = arena_[reason_[g.nodes[i].var().id]].literals();
  }

  bool used = false;
  if (dip) {
    auto t0 = Clock::now();
    used = try_dip(g, confl, rp);
    stats_.dip_seconds += seconds_since(t0);
    if (rp) rp->graph = g;
  }
  if (!used) learn_1uip(lc, rp);
  decay();

  if (rp) config_.on_conflict(report);
  check_disable_monitor();
  return true;
}

//===----------------------------------------------------------------------===//
// Database maintenance
//===----------------------------------------------------------------------===//

void Solver::reduce_db() {
  std::vector<ClauseRef> cands;
  for (ClauseRef cr : learnts_) {
    auto c = arena_[cr];
    if (c.size() > 2 && !locked(cr)) cands.push_back(cr);
  }
  std::sort(cands.begin(), cands.end(), [&](ClauseRef x, ClauseRef y) {
    auto cx = arena_[x], cy = arena_[y];
    if (cx.lbd() != cy.lbd()) return cx.lbd() > cy.lbd();
    if (cx.activity() != cy.activity()) return cx.activity() < cy.activity();
    return x < y;
  });
  cands.resize(cands.size() / 2);
  for (ClauseRef cr : cands) remove_clause(cr);
  std::erase_if(learnts_, [&](ClauseRef cr) { return arena_[cr].removed(); });
  ++stats_.reductions;
  if (arena_.wasted() * 5 > arena_.size()) garbage_collect();
}

void Solver::delete_ext_vars() {
  if (decision_level() != 0) throw std::logic_error("extension deletion requires level 0");
  ++stats_.deletion_rounds;
  std::vector<Var> cands;
  for (Var z : store_.live())
    if (store_.participation(z) == 0) cands.push_back(z);
  std::sort(cands.begin(), cands.end(), [&](Var x, Var y) {
    return activity_[x.id] != activity_[y.id] ? activity_[x.id] < activity_[y.id] : x < y;
  });
  cands.resize(cands.size() * config_.dip.ext_delete_fraction / 100);
  if (cands.empty()) return;

  std::vector<bool> victim(num_vars(), false);
  for (Var z : cands) victim[z.id] = true;

  std::vector<ClauseRef> doomed;
  for (Var z : cands) {
    const ExtDef* d = store_.def(z);
    doomed.insert(doomed.end(), d->def_clauses.begin(), d->def_clauses.end());
  }
  for (ClauseRef cr : learnts_) {
    auto c = arena_[cr];
    for (uint32_t i = 0; i < c.size(); ++i) {
      if (victim[c[i].var().id]) {
        doomed.push_back(cr);
        break;
      }
    }
  }
  std::sort(doomed.begin(), doomed.end());

  for (Lit l : trail_) {
    ClauseRef& r = reason_[l.var().id];
    if (r == kNoRef || !std::binary_search(doomed.begin(), doomed.end(), r)) continue;
    if (!victim[l.var().id]) {
      const Lit unit[] = {l};
      proof_add(unit);
    }
    r = kNoRef;
  }
  for (ClauseRef cr : doomed) remove_clause(cr);
  std::erase_if(learnts_, [&](ClauseRef cr) { return arena_[cr].removed(); });
  for (Var z : cands) {
    store_.remove(z);
    deleted_[z.id] = true;
  }
  stats_.ext_vars_deleted += cands.size();
  stats_.ext_vars_live -= cands.size();
  if (arena_.wasted() * 5 > arena_.size()) garbage_collect();
}

//===----------------------------------------------------------------------===//
// Audits
//===----------------------------------------------------------------------===//

std::vector<std::string> Solver::audit() const {
  std::vector<std::string> errs;
  auto live = all_live_clauses();
  std::unordered_map<ClauseRef, int> watch_count;
  for (uint32_t code = 0; code < watches_.size(); ++code) {
    for (const Watcher& w : watches_[code]) {
      if (arena_[w.cr].removed()) continue;
      const auto c = arena_[w.cr];
      if (c[0].code() == code || c[1].code() == code) ++watch_count[w.cr];
    }
  }
  for (ClauseRef cr : live) {
    const auto c = arena_[cr];
    if (c.removed()) {
      errs.push_back("live list holds a removed clause");
      continue;
    }
    for (uint32_t i = 0; i < c.size(); ++i)
      if (deleted_[c[i].var().id]) errs.push_back("clause references deleted variable " + std::to_string(c[i].to_dimacs()));
    if (watch_count[cr] < 2) errs.push_back("clause is not watched twice");
  }
  for (ClauseRef cr : learnts_)
    if (!arena_[cr].learnt()) errs.push_back("learnt list holds a non-learnt clause");
  if (std::string s = store_.check_consistency(); !s.empty()) errs.push_back(s);
  for (Var z : store_.live()) {
    const ExtDef* d = store_.def(z);
    if (deleted_[z.id] || deleted_[d->l1.var().id] || deleted_[d->l2.var().id])
      errs.push_back("live definition mentions a deleted variable");
    if (!is_ext_[z.id]) errs.push_back("definition of a non-extension variable");
    for (ClauseRef cr : d->def_clauses)
      if (!arena_[cr].ext_def()) errs.push_back("definition clause missing its flag");
  }
  for (std::size_t i = 0; i < trail_.size(); ++i) {
    Lit l = trail_[i];
    if (value(l) != Value::True) errs.push_back("trail literal not true");
    ClauseRef r = reason_[l.var().id];
    if (r == kNoRef) continue;
    const auto c = arena_[r];
    if (c.removed()) {
      errs.push_back("reason clause removed");
      continue;
    }
    if (c[0] != l) errs.push_back("reason clause does not start with its literal");
    for (uint32_t k = 1; k < c.size(); ++k)
      if (value(c[k]) != Value::False) errs.push_back("reason clause literal not false");
  }
  return errs;
}

bool Solver::at_fixpoint() const {
  for (ClauseRef cr : all_live_clauses()) {
    const auto c = arena_[cr];
    uint32_t open = 0;
    bool sat = false;
    for (uint32_t i = 0; i < c.size() && !sat; ++i) {
      Value v = value(c[i]);
      if (v == Value::True) sat = true;
      if (v == Value::Undef) ++open;
    }
    if (!sat && open <= 1) return false;
  }
  return true;
}

//===----------------------------------------------------------------------===//
// Main loop
//===----------------------------------------------------------------------===//

bool Solver::out_of_budget() const {
  if (config_.conflict_limit && stats_.conflicts >= config_.conflict_limit) return true;
  if (config_.time_limit > 0 && seconds_since(start_) >= config_.time_limit) return true;
  return false;
}

std::vector<bool> Solver::extract_model() const {
  std::vector<bool> m(num_original_vars_);
  for (uint32_t v = 0; v < num_original_vars_; ++v) m[v] = assigns_[v] == Value::True;
  return m;
}

SolveResult Solver::solve() {
  start_ = Clock::now();
  SolveResult res;
  auto finish = [&](Status s) {
    res.status = s;
    if (s == Status::Unsat) proof_add({});
    if (s == Status::Sat) res.model = extract_model();
    if (proof_) {
      proof_->flush();
      stats_.proof_adds = proof_->adds();
    }
    stats_.solve_seconds = seconds_since(start_);
    stats_.dip_time_fraction = stats_.solve_seconds > 0 ? stats_.dip_seconds / stats_.solve_seconds : 0.0;
    res.stats = stats_;
    return res;
  };
  if (!ok_) return finish(Status::Unsat);

  while (true) {
    ClauseRef confl = propagate();
    if (confl != kNoRef) {
      if (!handle_conflict(confl)) return finish(Status::Unsat);
      if (out_of_budget()) return finish(Status::Unknown);
      continue;
    }
    if (conflicts_since_restart_ >= luby(restart_index_) * config_.restart_base &&
        script_pos_ >= config_.decision_script.size()) {
      backtrack(0);
      ++restart_index_;
      conflicts_since_restart_ = 0;
      ++stats_.restarts;
      if (dip_active() && stats_.conflicts - last_ext_delete_ >= config_.dip.ext_delete_interval) {
        last_ext_delete_ = stats_.conflicts;
        delete_ext_vars();
      }
      continue;
    }
    if (stats_.conflicts >= next_reduce_) {
      ++reduce_rounds_;
      next_reduce_ = stats_.conflicts + config_.reduce_base + config_.reduce_inc * reduce_rounds_;
      reduce_db();
    }
    Lit d = pick_branch_literal();
    if (d == kNoLit) return finish(Status::Sat);
    assume_decision(d);
  }
}

SolveResult solve(const CnfFormula& f, const SolverConfig& config, ProofWriter* proof) {
  Solver s(config);
  s.attach_proof(proof);
  s.add_formula(f);
  return s.solve();
}

}  // namespace dipsat
