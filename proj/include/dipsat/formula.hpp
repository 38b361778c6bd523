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
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dipsat/literal.hpp"

namespace dipsat {

/// A clause with no repeated literals and no complementary pair.
///
/// Construction through `Clause::make` rejects duplicates and tautologies;
/// `Clause::normalize` is the lenient variant used by readers of external
/// files, which drops duplicates and reports tautologies.
class Clause {
 public:
  static Clause make(std::vector<Lit> lits);
  static Clause make(std::initializer_list<int> dimacs);

  /// Removes repeated literals. Returns false if the clause is tautological.
  static bool normalize(std::vector<Lit>& lits);

  std::span<const Lit> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  Lit operator[](std::size_t i) const { return lits_[i]; }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  uint32_t lbd = 0;  // 0 = unset
  double activity = 0.0;
  bool learnt = false;

  /// Literal sequences compare equal; metadata is ignored.
  friend bool operator==(const Clause& a, const Clause& b) { return a.lits_ == b.lits_; }

 private:
  explicit Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {}
  std::vector<Lit> lits_;
};

struct CnfFormula {
  uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  /// Appends a clause, raising `num_vars` if needed.
  void add(Clause c);
  void add(std::initializer_list<int> dimacs) { add(Clause::make(dimacs)); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseReport {
  std::vector<std::string> warnings;
};

/// Reads DIMACS CNF. Throws ParseError on structural corruption.
CnfFormula parse_dimacs(std::istream& in, ParseReport* report = nullptr);
CnfFormula parse_dimacs_string(const std::string& text, ParseReport* report = nullptr);
CnfFormula read_dimacs_file(const std::string& path, ParseReport* report = nullptr);

void write_dimacs(std::ostream& out, const CnfFormula& f);
std::string write_dimacs_string(const CnfFormula& f);

}  // namespace dipsat
