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

#include "dipsat/ercl.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <tuple>

namespace dipsat {

NodeId TvdProblem::find(Lit l) const {
  for (NodeId i = 0; i < nodes.size(); ++i)
    if (nodes[i] == l) return i;
  throw std::out_of_range("literal not in conflict graph");
}

const char* to_string(DipChoice c) {
  switch (c) {
    case DipChoice::Closest: return "closest";
    case DipChoice::Middle: return "middle";
    case DipChoice::Random: return "random";
    case DipChoice::Heuristic: return "heuristic";
  }
  return "?";
}

const char* to_string(DipFilter f) {
  switch (f) {
    case DipFilter::Occ: return "occ";
    case DipFilter::Glue: return "glue";
    case DipFilter::Act: return "act";
  }
  return "?";
}

std::optional<DipChoice> parse_dip_choice(const std::string& s) {
  for (DipChoice c : {DipChoice::Closest, DipChoice::Middle, DipChoice::Random, DipChoice::Heuristic})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::optional<DipFilter> parse_dip_filter(const std::string& s) {
  for (DipFilter f : {DipFilter::Occ, DipFilter::Glue, DipFilter::Act})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

void DipConfig::validate() const {
  if (min_occ == 0) throw std::invalid_argument("min_occ must be positive");
  if (ext_delete_interval == 0) throw std::invalid_argument("ext_delete_interval must be positive");
  if (ext_delete_fraction == 0 || ext_delete_fraction > 100)
    throw std::invalid_argument("ext_delete_fraction must be in (0,100]");
  if (disable_window == 0) throw std::invalid_argument("disable_window must be positive");
  if (disable_threshold == 0 || disable_threshold > 100)
    throw std::invalid_argument("disable_threshold must be in (0,100]");
}

//===----------------------------------------------------------------------===//
// ExtDefStore
//===----------------------------------------------------------------------===//

std::optional<Var> ExtDefStore::find(Lit l1, Lit l2) const {
  auto it = by_pair_.find(pair_key(l1, l2));
  if (it == by_pair_.end()) return std::nullopt;
  return Var(it->second);
}

const ExtDef* ExtDefStore::def(Var z) const {
  auto it = by_z_.find(z.id);
  return it == by_z_.end() ? nullptr : &it->second;
}

ExtDef* ExtDefStore::def_mut(Var z) {
  auto it = by_z_.find(z.id);
  return it == by_z_.end() ? nullptr : &it->second;
}

void ExtDefStore::add(const ExtDef& d) {
  assert(d.l1 != d.l2 && d.l1.var() != d.l2.var());
  assert(!find(d.l1, d.l2).has_value());
  by_z_.emplace(d.z.id, d);
  by_pair_.emplace(pair_key(d.l1, d.l2), d.z.id);
  for (Lit l : {d.l1, d.l2}) {
    if (participation_.size() <= l.var().id) participation_.resize(l.var().id + 1, 0);
    ++participation_[l.var().id];
  }
}

void ExtDefStore::remove(Var z) {
  auto it = by_z_.find(z.id);
  assert(it != by_z_.end());
  const ExtDef& d = it->second;
  by_pair_.erase(pair_key(d.l1, d.l2));
  for (Lit l : {d.l1, d.l2}) --participation_[l.var().id];
  by_z_.erase(it);
}

std::vector<Var> ExtDefStore::live() const {
  std::vector<Var> out;
  out.reserve(by_z_.size());
  for (const auto& [z, d] : by_z_) out.emplace_back(z);
  std::sort(out.begin(), out.end());
  return out;
}

std::string ExtDefStore::check_consistency() const {
  if (by_pair_.size() != by_z_.size()) return "pair index size differs from definition count";
  std::vector<uint32_t> recount(participation_.size(), 0);
  for (const auto& [z, d] : by_z_) {
    if (d.z.id != z) return "definition keyed under the wrong variable";
    auto it = by_pair_.find(pair_key(d.l1, d.l2));
    if (it == by_pair_.end() || it->second != z) return "pair index disagrees for z" + std::to_string(z + 1);
    for (Lit l : {d.l1, d.l2}) {
      if (l.var().id >= recount.size()) return "participation counter missing";
      ++recount[l.var().id];
    }
  }
  if (recount != participation_) return "participation counters differ from recount";
  return {};
}

//===----------------------------------------------------------------------===//
// Filters
//===----------------------------------------------------------------------===//

bool ActivityWindow::accept_and_push(double score) {
  bool accept = !window_.empty() && score > sum_ / static_cast<double>(window_.size());
  window_.push_back(score);
  sum_ += score;
  if (window_.size() > capacity_) {
    sum_ -= window_.front();
    window_.pop_front();
  }
  return accept;
}

//===----------------------------------------------------------------------===//
// Pre- and post-DIP clauses
//===----------------------------------------------------------------------===//

DipAnalysis analyze_dip(const TvdProblem& g, NodeId u, NodeId v) {
  const uint32_t n = static_cast<uint32_t>(g.nodes.size());
  assert(u != v && u != g.s() && v != g.s() && u != g.t() && v != g.t());
  thread_local Dag dag;
  dag.assign(n, g.edges, g.s(), g.t());

  DipAnalysis out;
  out.f = g.nodes[g.s()];
  out.node_a = std::min(u, v);
  out.node_b = std::max(u, v);
  out.a = g.nodes[out.node_a];
  out.b = g.nodes[out.node_b];

  // Ancestors of the pair (inclusive), not counting f.
  thread_local std::vector<char> anc, reach;
  thread_local std::vector<NodeId> stack;
  anc.assign(n, 0);
  stack.assign({u, v});
  anc[u] = anc[v] = 1;
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId p : dag.predecessors(x)) {
      if (!anc[p]) {
        anc[p] = 1;
        stack.push_back(p);
      }
    }
  }
  anc[g.s()] = 0;

  // Nodes cut off from f once the pair is removed.
  reach.assign(n, 0);
  stack.assign(1, g.s());
  reach[g.s()] = 1;
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId w : dag.successors(x)) {
      if (!reach[w] && w != u && w != v) {
        reach[w] = 1;
        stack.push_back(w);
      }
    }
  }

  thread_local std::vector<uint64_t> mark;  // by literal code
  thread_local uint64_t stamp = 0;
  auto collect = [&](auto&& member, std::vector<Lit>& into, uint32_t& max_level) {
    ++stamp;
    for (NodeId x = 0; x < n; ++x) {
      if (!member(x)) continue;
      for (const SideInput& si : g.side_inputs[x]) {
        if (si.lit.code() >= mark.size()) mark.resize(si.lit.code() + 1, 0);
        if (mark[si.lit.code()] == stamp) continue;
        mark[si.lit.code()] = stamp;
        into.push_back(si.lit);
        max_level = std::max(max_level, si.level);
      }
    }
  };
  collect([&](NodeId x) { return anc[x] != 0; }, out.C, out.level_c);
  collect([&](NodeId x) { return !reach[x] && x != u && x != v; }, out.D, out.level_d);

  thread_local std::vector<uint32_t> levels;
  levels.clear();
  for (NodeId x = 0; x < n; ++x) {
    if (reach[x] || x == u || x == v) continue;
    for (const SideInput& si : g.side_inputs[x]) levels.push_back(si.level);
  }
  std::sort(levels.begin(), levels.end());
  out.post_lbd = static_cast<uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin()) + 1;
  return out;
}

std::vector<Lit> build_pre_dip_clause(const DipAnalysis& a) {
  std::vector<Lit> out{~a.f};
  for (Lit c : a.C) out.push_back(~c);
  out.push_back(pos(a.z));
  return out;
}

std::vector<Lit> build_post_dip_clause(const DipAnalysis& a) {
  std::vector<Lit> out{neg(a.z)};
  for (Lit d : a.D) out.push_back(~d);
  return out;
}

//===----------------------------------------------------------------------===//
// Selection
//===----------------------------------------------------------------------===//

namespace {

struct Candidate {
  uint32_t i = 0;  // a' index
  uint32_t j = 0;  // b' index
  bool valid = false;
};

// Sparse table answering "best b' index in [lo,hi]" for a strict weak order.
template <typename Better>
class RangeBest {
 public:
  RangeBest(uint32_t n, Better better) : better_(better) {
    levels_.push_back(std::vector<uint32_t>(n));
    for (uint32_t j = 0; j < n; ++j) levels_[0][j] = j;
    for (uint32_t w = 1; (2u << (w - 1)) <= n; ++w) {
      const auto& prev = levels_[w - 1];
      std::vector<uint32_t> cur(n - (1u << w) + 1);
      for (uint32_t j = 0; j < cur.size(); ++j) cur[j] = pick(prev[j], prev[j + (1u << (w - 1))]);
      levels_.push_back(std::move(cur));
    }
  }
  uint32_t query(uint32_t lo, uint32_t hi) const {
    uint32_t w = std::bit_width(hi - lo + 1) - 1;
    return pick(levels_[w][lo], levels_[w][hi - (1u << w) + 1]);
  }

 private:
  uint32_t pick(uint32_t x, uint32_t y) const { return better_(y, x) ? y : x; }
  Better better_;
  std::vector<std::vector<uint32_t>> levels_;
};

}  // namespace

std::optional<NodePair> select_dip(const TvdResult& r, DipChoice choice, const DipSelectionInput& in,
                                   std::mt19937_64& rng) {
  if (r.empty()) return std::nullopt;
  auto pos_a = [&](uint32_t i) { return in.pos[r.a_prime[i]]; };
  auto pos_b = [&](uint32_t j) { return in.pos[r.b_prime[j]]; };
  auto make = [&](const Candidate& c) {
    NodeId x = r.a_prime[c.i], y = r.b_prime[c.j];
    return NodePair{std::min(x, y), std::max(x, y)};
  };
  // Closer to the conflict: larger position sum, then larger later node.
  auto closeness = [&](const Candidate& c) {
    uint32_t pa = pos_a(c.i), pb = pos_b(c.j);
    return std::tuple{pa + pb, std::max(pa, pb), std::min(pa, pb)};
  };

  Candidate best;
  auto offer = [&](const Candidate& c, auto&& better) {
    if (!best.valid || better(c, best)) best = c;
  };

  switch (choice) {
    case DipChoice::Closest: {
      auto better = [&](const Candidate& x, const Candidate& y) { return closeness(x) > closeness(y); };
      for (uint32_t i = 0; i < r.a_prime.size(); ++i) offer({i, r.ranges[i].second, true}, better);
      break;
    }
    case DipChoice::Middle: {
      const int64_t target = int64_t{in.s_pos} + in.t_pos;
      auto dist = [&](const Candidate& c) { return std::llabs(int64_t{pos_a(c.i)} + pos_b(c.j) - target); };
      auto better = [&](const Candidate& x, const Candidate& y) {
        int64_t dx = dist(x), dy = dist(y);
        return dx != dy ? dx < dy : closeness(x) > closeness(y);
      };
      thread_local std::vector<uint32_t> bpos;
      bpos.resize(r.b_prime.size());
      for (uint32_t j = 0; j < bpos.size(); ++j) bpos[j] = pos_b(j);
      for (uint32_t i = 0; i < r.a_prime.size(); ++i) {
        auto [lo, hi] = r.ranges[i];
        int64_t want = target - pos_a(i);
        auto it = std::lower_bound(bpos.begin() + lo, bpos.begin() + hi + 1, want,
                                   [](uint32_t p, int64_t w) { return int64_t{p} < w; });
        uint32_t j = static_cast<uint32_t>(it - bpos.begin());
        if (j <= hi) offer({i, j, true}, better);
        if (j > lo) offer({i, j - 1, true}, better);
      }
      break;
    }
    case DipChoice::Heuristic: {
      auto score_b = [&](uint32_t j) { return in.score[r.b_prime[j]]; };
      auto b_better = [&](uint32_t x, uint32_t y) {
        return score_b(x) != score_b(y) ? score_b(x) > score_b(y) : pos_b(x) > pos_b(y);
      };
      RangeBest table(static_cast<uint32_t>(r.b_prime.size()), b_better);
      auto total = [&](const Candidate& c) { return in.score[r.a_prime[c.i]] + score_b(c.j); };
      auto better = [&](const Candidate& x, const Candidate& y) {
        double sx = total(x), sy = total(y);
        return sx != sy ? sx > sy : closeness(x) > closeness(y);
      };
      for (uint32_t i = 0; i < r.a_prime.size(); ++i) {
        auto [lo, hi] = r.ranges[i];
        uint32_t j = table.query(lo, hi);
        offer({i, j, true}, better);
        // Equal scores elsewhere in the range can still win on closeness.
        if (score_b(hi) == score_b(j)) offer({i, hi, true}, better);
      }
      break;
    }
    case DipChoice::Random: {
      std::uniform_int_distribution<std::size_t> pick(0, r.pair_count() - 1);
      std::size_t k = pick(rng);
      for (uint32_t i = 0; i < r.a_prime.size(); ++i) {
        std::size_t width = r.ranges[i].second - r.ranges[i].first + 1;
        if (k < width) {
          best = {i, r.ranges[i].first + static_cast<uint32_t>(k), true};
          break;
        }
        k -= width;
      }
      break;
    }
  }
  assert(best.valid);
  return make(best);
}

PredefinedZ handle_predefined_z(Value z_value, uint32_t z_level, uint32_t current_level) {
  if (z_value == Value::Undef || z_level == current_level) return PredefinedZ::Proceed;
  if (z_value == Value::False) return PredefinedZ::Fallback1UIP;
  throw std::logic_error("extension variable true below the conflict level");
}

std::vector<Lit> try_replace_in_lemma(std::vector<Lit> lemma, uint32_t lbd, const ExtDefStore& store,
                                      const ReplaceLimits& limits) {
  if (store.empty() || lemma.size() > limits.max_len || lbd > limits.max_lbd) return lemma;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < lemma.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < lemma.size() && !changed; ++j) {
        auto z = store.find(~lemma[i], ~lemma[j]);
        if (!z) continue;
        Lit nz = neg(*z);
        if (std::find(lemma.begin(), lemma.end(), ~nz) != lemma.end()) continue;
        bool present = std::find(lemma.begin(), lemma.end(), nz) != lemma.end();
        lemma.erase(lemma.begin() + static_cast<std::ptrdiff_t>(j));
        if (present) {
          lemma.erase(lemma.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          lemma[i] = nz;
        }
        changed = true;
      }
    }
  }
  return lemma;
}

}  // namespace dipsat
