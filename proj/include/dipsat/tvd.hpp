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
#include <optional>
#include <utility>
#include <vector>

#include "dipsat/dag.hpp"

namespace dipsat {

/// Two s-t paths sharing no vertex other than s and t. Both include s and t.
struct DisjointPaths {
  std::vector<NodeId> a;
  std::vector<NodeId> b;
};

/// All two-vertex dominators of a graph, in compressed form.
///
/// a_prime and b_prime are the internal nodes of paths.a / paths.b that take
/// part in at least one pair, in path order. a_prime[i] pairs with exactly
/// the b_prime entries in the inclusive index interval ranges[i].
struct TvdResult {
  DisjointPaths paths;
  std::vector<NodeId> a_prime;
  std::vector<NodeId> b_prime;
  std::vector<std::pair<uint32_t, uint32_t>> ranges;

  // Per path index; true for internal nodes skipped by an avoiding detour.
  std::vector<bool> a_bypassed;
  std::vector<bool> b_bypassed;

  bool empty() const { return a_prime.empty(); }
  std::size_t pair_count() const;

  /// For each b_prime entry, the inclusive interval of a_prime partners.
  std::vector<std::pair<uint32_t, uint32_t>> dual_ranges() const;
};

using NodePair = std::pair<NodeId, NodeId>;

/// Returns two internally vertex-disjoint s-t paths, or nothing when a single
/// vertex (or the direct edge s->t alone) already separates s from t.
std::optional<DisjointPaths> find_two_disjoint_paths(const Dag& g);

/// Computes every TVD pair relative to the given paths. Throws
/// std::invalid_argument if the graph is cyclic.
TvdResult find_all_tvds(const Dag& g, DisjointPaths paths);

/// Convenience overload; returns nothing if two disjoint paths do not exist.
std::optional<TvdResult> find_all_tvds(const Dag& g);

/// Expands the compressed result. Each pair is (lower id, higher id); the
/// list is sorted by higher id descending, then lower id descending.
std::vector<NodePair> enumerate_pairs(const TvdResult& r);

}  // namespace dipsat
