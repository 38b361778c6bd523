// Small hand-built formulas with known conflict structure.

#pragma once

#include <vector>

#include "dipsat/formula.hpp"
#include "dipsat/literal.hpp"
#include "dipsat/solver.hpp"
#include <string>
#include <utility>

namespace dipsat::testing {

// Variables of the thirteen-clause instance: x1..x13 are 1..13, y1..y6 are
// 14..19, and 20 is a free variable used to open an empty decision level.
constexpr int X(int i) { return i; }
constexpr int Y(int i) { return 13 + i; }
constexpr int kFree = 20;

/// Thirteen clauses plus three helper clauses that fix the y literals at
/// levels 2 and 4 under `thirteen_clause_script()`.
CnfFormula thirteen_clause_formula();
/// Decisions -y2, y3, free, -y1, x1 (levels 1..5).
std::vector<Lit> thirteen_clause_script();

/// Seven clauses whose conflict graph from x1 has the single pair {x2,x5}.
CnfFormula diamond_formula();

/// dip off, baseline, closest, random, heuristic, one-clause. All but the
/// baseline use min_occ 1 so that small instances exercise DIP learning.
std::vector<std::pair<std::string, SolverConfig>> standard_configs(uint64_t seed = 0);

/// Lits from DIMACS ints.
std::vector<Lit> lits(std::initializer_list<int> d);
/// Sorted DIMACS ints of a clause, for order-free comparison.
std::vector<int> sorted_dimacs(const std::vector<Lit>& c);
std::vector<int> sorted_ints(std::vector<int> v);

}  // namespace dipsat::testing
