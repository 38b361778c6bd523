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

#include "dipsat/proof.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dipsat {

//===----------------------------------------------------------------------===//
// Writer
//===----------------------------------------------------------------------===//

ProofWriter::ProofWriter(std::ostream* out, uint32_t num_formula_vars)
    : out_(out), seen_(num_formula_vars, true) {}

void ProofWriter::mark(std::span<const Lit> clause) {
  for (Lit l : clause) {
    if (l.var().id >= seen_.size()) seen_.resize(l.var().id + 1, false);
    seen_[l.var().id] = true;
  }
}

void ProofWriter::line(bool del, std::span<const Lit> clause) {
  mark(clause);
  if (del)
    ++deletes_;
  else
    ++adds_;
  if (out_ == nullptr) return;
  buf_.clear();
  if (del) buf_ += "d ";
  char tmp[16];
  for (Lit l : clause) {
    auto [end, ec] = std::to_chars(tmp, tmp + sizeof tmp, l.to_dimacs());
    buf_.append(tmp, end);
    buf_ += ' ';
  }
  buf_ += "0\n";
  out_->write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  if (!*out_) throw std::runtime_error("proof output failed");
}

void ProofWriter::emit_add(std::span<const Lit> clause) { line(false, clause); }
void ProofWriter::emit_delete(std::span<const Lit> clause) { line(true, clause); }

void ProofWriter::emit_extension(Var z, Lit l1, Lit l2) {
  if (z.id < seen_.size() && seen_[z.id]) throw std::logic_error("extension variable is not fresh");
  const Lit a[] = {pos(z), ~l1, ~l2};
  const Lit b[] = {neg(z), l1};
  const Lit c[] = {neg(z), l2};
  line(false, a);
  line(false, b);
  line(false, c);
}

void ProofWriter::flush() {
  if (out_ == nullptr) return;
  out_->flush();
  if (!*out_) throw std::runtime_error("proof output failed");
}

//===----------------------------------------------------------------------===//
// Checker
//===----------------------------------------------------------------------===//

namespace {

constexpr uint32_t kNone = UINT32_MAX;

struct KeyHash {
  std::size_t operator()(const std::vector<uint32_t>& k) const noexcept {
    std::size_t h = k.size();
    for (uint32_t x : k) h = h * 0x9e3779b97f4a7c15ULL + x;
    return h;
  }
};

class Checker {
 public:
  explicit Checker(bool trim) : trim_(trim) {}

  uint32_t add(std::vector<Lit> lits) {
    uint32_t id = static_cast<uint32_t>(clauses_.size());
    for (Lit l : lits) ensure_var(l.var());
    index_[key(lits)].push_back(id);
    clauses_.push_back(std::move(lits));
    alive_.push_back(true);
    const auto& c = clauses_.back();
    if (c.empty()) {
      ++empty_count_;
    } else if (c.size() == 1) {
      units_.push_back(id);
    } else {
      watches_[c[0].code()].push_back(id);
      watches_[c[1].code()].push_back(id);
    }
    return id;
  }

  bool remove(const std::vector<Lit>& lits) {
    auto it = index_.find(key(lits));
    if (it == index_.end() || it->second.empty()) return false;
    uint32_t id = it->second.back();
    it->second.pop_back();
    alive_[id] = false;
    if (clauses_[id].empty()) --empty_count_;
    if (clauses_[id].size() == 1) units_.erase(std::find(units_.begin(), units_.end(), id));
    return true;
  }

  /// Reverse unit propagation. Collects the clauses used into `deps`.
  bool rup(const std::vector<Lit>& lemma, std::vector<uint32_t>* deps) {
    undo();
    if (empty_count_ > 0) {
      if (deps) deps->push_back(any_empty());
      return true;
    }
    for (Lit l : lemma) ensure_var(l.var());
    for (Lit l : lemma) {
      if (value(l) == Value::False) continue;
      if (value(l) == Value::True) return true;  // tautology
      assign(~l, kNone);
    }
    uint32_t confl = kNone;
    for (uint32_t id : units_) {
      Lit u = clauses_[id][0];
      if (value(u) == Value::False) {
        confl = id;
        break;
      }
      if (value(u) == Value::Undef) assign(u, id);
    }
    if (confl == kNone) confl = propagate();
    if (confl == kNone) return false;
    if (deps) collect(confl, *deps);
    return true;
  }

  /// RAT on lemma[0] against every live clause containing its negation.
  bool rat(const std::vector<Lit>& lemma, std::vector<uint32_t>* deps) {
    if (lemma.empty()) return false;
    Lit p = lemma[0];
    for (uint32_t id = 0; id < clauses_.size(); ++id) {
      if (!alive_[id]) continue;
      const auto& d = clauses_[id];
      if (std::find(d.begin(), d.end(), ~p) == d.end()) continue;
      std::vector<Lit> res = lemma;
      bool taut = false;
      for (Lit l : d) {
        if (l == ~p) continue;
        if (std::find(lemma.begin(), lemma.end(), ~l) != lemma.end()) taut = true;
        if (std::find(res.begin(), res.end(), l) == res.end()) res.push_back(l);
      }
      if (taut) continue;
      if (deps) deps->push_back(id);
      if (!rup(res, deps)) return false;
    }
    return true;
  }

  bool trim() const { return trim_; }

 private:
  static std::vector<uint32_t> key(const std::vector<Lit>& lits) {
    std::vector<uint32_t> k(lits.size());
    for (std::size_t i = 0; i < lits.size(); ++i) k[i] = lits[i].code();
    std::sort(k.begin(), k.end());
    return k;
  }

  void ensure_var(Var v) {
    if (v.id < val_.size()) return;
    val_.resize(v.id + 1, Value::Undef);
    reason_.resize(v.id + 1, kNone);
    watches_.resize(2 * (v.id + 1));
  }

  Value value(Lit l) const {
    Value v = val_[l.var().id];
    return l.negative() ? !v : v;
  }

  void assign(Lit l, uint32_t reason) {
    val_[l.var().id] = l.negative() ? Value::False : Value::True;
    reason_[l.var().id] = reason;
    trail_.push_back(l);
  }

  void undo() {
    for (Lit l : trail_) {
      val_[l.var().id] = Value::Undef;
      reason_[l.var().id] = kNone;
    }
    trail_.clear();
    qhead_ = 0;
  }

  uint32_t any_empty() const {
    for (uint32_t id = 0; id < clauses_.size(); ++id)
      if (alive_[id] && clauses_[id].empty()) return id;
    return kNone;
  }

  uint32_t propagate() {
    while (qhead_ < trail_.size()) {
      Lit f = ~trail_[qhead_++];
      auto& ws = watches_[f.code()];
      std::size_t i = 0, j = 0;
      uint32_t confl = kNone;
      for (; i < ws.size(); ++i) {
        uint32_t id = ws[i];
        if (!alive_[id]) continue;
        auto& c = clauses_[id];
        if (c[0] == f) std::swap(c[0], c[1]);
        if (confl != kNone || value(c[0]) == Value::True) {
          ws[j++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != Value::False) {
            std::swap(c[1], c[k]);
            watches_[c[1].code()].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = id;
        if (value(c[0]) == Value::False)
          confl = id;
        else
          assign(c[0], id);
      }
      ws.resize(j);
      if (confl != kNone) return confl;
    }
    return kNone;
  }

  void collect(uint32_t confl, std::vector<uint32_t>& deps) {
    std::vector<Lit> stack(clauses_[confl].begin(), clauses_[confl].end());
    deps.push_back(confl);
    std::vector<uint32_t> visited;
    while (!stack.empty()) {
      Var v = stack.back().var();
      stack.pop_back();
      uint32_t r = reason_[v.id];
      if (r == kNone) continue;
      reason_[v.id] = kNone;  // visit once; undo() clears the rest
      deps.push_back(r);
      for (Lit l : clauses_[r])
        if (l.var() != v) stack.push_back(l);
    }
  }

  bool trim_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<bool> alive_;
  std::unordered_map<std::vector<uint32_t>, std::vector<uint32_t>, KeyHash> index_;
  std::vector<std::vector<uint32_t>> watches_;
  std::vector<uint32_t> units_;
  std::size_t empty_count_ = 0;

  std::vector<Value> val_;
  std::vector<uint32_t> reason_;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
};

}  // namespace

CheckResult check_proof(const CnfFormula& formula, const std::string& proof, bool trim) {
  CheckResult res;
  Checker ck(trim);
  for (const Clause& c : formula.clauses) ck.add(std::vector<Lit>(c.begin(), c.end()));
  const uint32_t num_original = static_cast<uint32_t>(formula.clauses.size());

  // Per clause id: the ids its check relied on (proof additions only).
  std::vector<std::vector<uint32_t>> deps(num_original);
  uint32_t next_id = num_original;
  uint32_t empty_id = kNone;

  std::istringstream in(proof);
  std::string text;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    res.accepted = false;
    res.error = why;
    res.line = line_no;
    return res;
  };

  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::string tok;
    bool del = false;
    std::vector<Lit> lits;
    bool terminated = false, any = false;
    while (ls >> tok) {
      if (!any && tok == "c") break;
      if (!any && tok == "d") {
        del = true;
        any = true;
        continue;
      }
      any = true;
      if (terminated) return fail("tokens after terminating 0");
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) return fail("bad token '" + tok + "'");
      if (v == 0) {
        terminated = true;
        continue;
      }
      lits.push_back(Lit::from_dimacs(v));
    }
    if (!any) continue;
    if (!terminated) return fail("clause not terminated by 0");
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

    if (del) {
      ++res.deletes;
      if (!ck.remove(lits)) return fail("deleting a clause that is not present");
      continue;
    }

    ++res.adds;
    // Restore the pivot: the first literal as written.
    {
      std::istringstream again(text);
      int first = 0;
      again >> first;
      if (first != 0) {
        Lit p = Lit::from_dimacs(first);
        std::iter_swap(lits.begin(), std::find(lits.begin(), lits.end(), p));
      }
    }
    std::vector<uint32_t> used;
    std::vector<uint32_t>* dp = trim ? &used : nullptr;
    if (!ck.rup(lits, dp)) {
      if (dp) used.clear();
      if (!ck.rat(lits, dp)) return fail("clause is neither RUP nor RAT");
    }
    uint32_t id = ck.add(lits);
    if (trim) deps.push_back(std::move(used));
    ++next_id;
    if (lits.empty()) {
      empty_id = id;
      break;
    }
  }

  if (empty_id == kNone) return fail("proof does not derive the empty clause");
  res.accepted = true;
  res.line = 0;

  if (trim) {
    std::vector<bool> needed(next_id, false);
    std::vector<uint32_t> stack{empty_id};
    needed[empty_id] = true;
    while (!stack.empty()) {
      uint32_t id = stack.back();
      stack.pop_back();
      if (id < num_original) continue;
      ++res.trimmed_adds;
      for (uint32_t d : deps[id]) {
        if (d != kNone && !needed[d]) {
          needed[d] = true;
          stack.push_back(d);
        }
      }
    }
  }
  return res;
}

}  // namespace dipsat
