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

// Text DRAT output and a small forward checker.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dipsat/formula.hpp"
#include "dipsat/literal.hpp"

namespace dipsat {

/// Writes DRAT lines in DIMACS numbering. A null stream only counts lines.
class ProofWriter {
 public:
  ProofWriter(std::ostream* out, uint32_t num_formula_vars);

  void emit_add(std::span<const Lit> clause);
  void emit_delete(std::span<const Lit> clause);

  /// The three definition clauses of z <-> l1 & l2, in RAT-checkable order:
  /// z | ~l1 | ~l2, then ~z | l1, then ~z | l2. Throws std::logic_error if z
  /// has appeared before.
  void emit_extension(Var z, Lit l1, Lit l2);

  uint64_t adds() const { return adds_; }
  uint64_t deletes() const { return deletes_; }
  void flush();

 private:
  void line(bool del, std::span<const Lit> clause);
  void mark(std::span<const Lit> clause);

  std::ostream* out_;
  std::vector<bool> seen_;
  std::string buf_;
  uint64_t adds_ = 0;
  uint64_t deletes_ = 0;
};

struct CheckResult {
  bool accepted = false;
  std::string error;
  std::size_t line = 0;  // 1-based proof line of the failure
  uint64_t adds = 0;
  uint64_t deletes = 0;
  uint64_t trimmed_adds = 0;  // adds the empty clause depends on (trim only)
};

/// Checks that `proof` refutes `formula`: every added clause must be RUP or
/// RAT on its first literal, and the empty clause must be derived. With
/// `trim`, also counts the additions reachable backwards from the empty
/// clause through the clauses used in each check.
CheckResult check_proof(const CnfFormula& formula, const std::string& proof, bool trim = false);

}  // namespace dipsat
