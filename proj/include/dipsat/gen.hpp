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

// Parity benchmark families.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dipsat/formula.hpp"
#include "dipsat/literal.hpp"

namespace dipsat {

struct XorConstraint {
  std::vector<Var> vars;
  bool parity = false;
};

/// One clause per falsifying assignment: 2^(k-1) clauses for k variables.
/// Literals are listed in reverse order of `c.vars`.
std::vector<Clause> xor_to_clauses(const XorConstraint& c);

/// Adds the clauses of `c` to `f`.
void add_xor(CnfFormula& f, const XorConstraint& c);

/// rows x cols grid; one variable per edge, numbered row by row with the
/// horizontal edges of a row before the vertical edges below it. Vertex
/// `charge_vertex` (row-major) has charge 1, all others 0.
CnfFormula gen_tseitin_grid(uint32_t rows, uint32_t cols, uint32_t charge_vertex = 0);

/// Grid edges as vertex pairs in variable order.
std::vector<std::pair<uint32_t, uint32_t>> grid_edges(uint32_t rows, uint32_t cols);

/// Tseitin formula on a charged simple graph with `n` vertices.
CnfFormula tseitin_formula(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                           const std::vector<bool>& charge);

/// Random simple d-regular graph by the pairing model with restarts.
/// Throws std::invalid_argument if n*d is odd or d >= n, std::runtime_error
/// if no simple pairing is found.
std::vector<std::pair<uint32_t, uint32_t>> random_regular_graph(uint32_t n, uint32_t d, uint64_t seed);

/// Tseitin formula on a random d-regular graph. With `random_charges`, all
/// charges are drawn at random and vertex 0 is fixed up to give the total
/// parity; otherwise only vertex 0 may be charged.
CnfFormula gen_tseitin_regular(uint32_t n, uint32_t d, uint64_t seed, bool odd, bool random_charges = false);

/// `nclauses` random XOR constraints of arity k over `nvars` variables, each
/// variable then replaced by the XOR of m fresh ones.
CnfFormula gen_xorified_kxor(uint32_t nvars, uint32_t nclauses, uint32_t k, uint32_t m, uint64_t seed);

}  // namespace dipsat
