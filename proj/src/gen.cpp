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

#include "dipsat/gen.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace dipsat {

std::vector<Clause> xor_to_clauses(const XorConstraint& c) {
  const std::size_t k = c.vars.size();
  if (k == 0 || k > 24) throw std::invalid_argument("xor arity must be in [1,24]");
  std::vector<Clause> out;
  out.reserve(std::size_t{1} << (k - 1));
  for (uint32_t mask = 0; mask < (1u << k); ++mask) {
    bool par = std::popcount(mask) & 1;
    if (par == c.parity) continue;
    std::vector<Lit> lits(k);
    for (std::size_t i = 0; i < k; ++i) lits[k - 1 - i] = Lit(c.vars[i], (mask >> i) & 1);
    out.push_back(Clause::make(std::move(lits)));
  }
  return out;
}

void add_xor(CnfFormula& f, const XorConstraint& c) {
  for (Clause& cl : xor_to_clauses(c)) f.add(std::move(cl));
}

std::vector<std::pair<uint32_t, uint32_t>> grid_edges(uint32_t rows, uint32_t cols) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c + 1 < cols; ++c) e.emplace_back(r * cols + c, r * cols + c + 1);
    if (r + 1 < rows)
      for (uint32_t c = 0; c < cols; ++c) e.emplace_back(r * cols + c, (r + 1) * cols + c);
  }
  return e;
}

CnfFormula tseitin_formula(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                           const std::vector<bool>& charge) {
  std::vector<std::vector<Var>> incident(n);
  for (uint32_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].first].emplace_back(i);
    incident[edges[i].second].emplace_back(i);
  }
  CnfFormula f;
  f.num_vars = static_cast<uint32_t>(edges.size());
  for (uint32_t v = 0; v < n; ++v) {
    if (incident[v].empty()) {
      if (charge[v]) f.clauses.push_back(Clause::make(std::vector<Lit>{}));
      continue;
    }
    add_xor(f, {incident[v], charge[v]});
  }
  return f;
}

CnfFormula gen_tseitin_grid(uint32_t rows, uint32_t cols, uint32_t charge_vertex) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid needs at least 2 rows and 2 columns");
  if (charge_vertex >= rows * cols) throw std::invalid_argument("charged vertex out of range");
  std::vector<bool> charge(rows * cols, false);
  charge[charge_vertex] = true;
  return tseitin_formula(rows * cols, grid_edges(rows, cols), charge);
}

std::vector<std::pair<uint32_t, uint32_t>> random_regular_graph(uint32_t n, uint32_t d, uint64_t seed) {
  if (d == 0 || d >= n) throw std::invalid_argument("degree must be in [1, n-1]");
  if ((uint64_t{n} * d) % 2 != 0) throw std::invalid_argument("n*d must be even");
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> points(std::size_t{n} * d);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<uint32_t>(i / d);
  for (int attempt = 0; attempt < 200000; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    std::set<std::pair<uint32_t, uint32_t>> edges;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      uint32_t a = std::min(points[i], points[i + 1]), b = std::max(points[i], points[i + 1]);
      simple = a != b && edges.emplace(a, b).second;
    }
    if (simple) return {edges.begin(), edges.end()};
  }
  throw std::runtime_error("no simple regular graph found");
}

CnfFormula gen_tseitin_regular(uint32_t n, uint32_t d, uint64_t seed, bool odd, bool random_charges) {
  auto edges = random_regular_graph(n, d, seed);
  std::vector<bool> charge(n, false);
  if (random_charges) {
    std::mt19937_64 rng(seed ^ 0x5eedc4a7ULL);
    bool total = false;
    for (uint32_t v = 1; v < n; ++v) {
      charge[v] = rng() & 1;
      total ^= charge[v];
    }
    charge[0] = total != odd;
  } else {
    charge[0] = odd;
  }
  return tseitin_formula(n, edges, charge);
}

CnfFormula gen_xorified_kxor(uint32_t nvars, uint32_t nclauses, uint32_t k, uint32_t m, uint64_t seed) {
  if (k == 0 || k > nvars) throw std::invalid_argument("k must be in [1, nvars]");
  if (m == 0 || k * m > 24) throw std::invalid_argument("k*m must be in [1,24]");
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> all(nvars);
  std::iota(all.begin(), all.end(), 0);
  CnfFormula f;
  f.num_vars = nvars * m;
  for (uint32_t i = 0; i < nclauses; ++i) {
    // Partial Fisher-Yates: the first k entries are the chosen variables.
    for (uint32_t j = 0; j < k; ++j) {
      std::uniform_int_distribution<uint32_t> pick(j, nvars - 1);
      std::swap(all[j], all[pick(rng)]);
    }
    XorConstraint c;
    c.parity = rng() & 1;
    for (uint32_t j = 0; j < k; ++j)
      for (uint32_t t = 0; t < m; ++t) c.vars.emplace_back(all[j] * m + t);
    add_xor(f, c);
  }
  return f;
}

}  // namespace dipsat
