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
#include <vector>

#include "dipsat/dag.hpp"
#include "dipsat/literal.hpp"

namespace dipsat {

/// Result of first-UIP analysis. literals[0] is the asserting literal.
struct LearnedClause {
  std::vector<Lit> literals;
  uint32_t lbd = 0;
  Lit asserting_literal;
  uint32_t backjump_level = 0;
};

/// A literal from an earlier decision level feeding a node of the graph.
/// `lit` is the literal as it is assigned (true).
struct SideInput {
  Lit lit;
  uint32_t level = 0;
};

/// Conflict-level implication graph between the first UIP and the conflict.
///
/// Node ids follow trail order: node 0 is the first UIP, the last node is the
/// conflict sink, whose literal is kNoLit.
struct TvdProblem {
  std::vector<Lit> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<SideInput>> side_inputs;
  std::vector<uint32_t> trail_pos;
  uint32_t level = 0;

  bool empty() const { return nodes.empty(); }
  NodeId s() const { return 0; }
  NodeId t() const { return static_cast<NodeId>(nodes.size() - 1); }
  NodeId find(Lit l) const;

  Dag dag() const { return Dag(static_cast<uint32_t>(nodes.size()), edges, s(), t()); }
};

}  // namespace dipsat
