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
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dipsat {

using NodeId = uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Directed graph in compressed adjacency form with distinguished source and
/// sink. Immutable once built.
class Dag {
 public:
  Dag() = default;
  Dag(uint32_t num_nodes, std::span<const Edge> edges, NodeId s, NodeId t);
  /// Rebuilds in place, keeping allocated storage.
  void assign(uint32_t num_nodes, std::span<const Edge> edges, NodeId s, NodeId t);

  uint32_t size() const { return static_cast<uint32_t>(out_offsets_.empty() ? 0 : out_offsets_.size() - 1); }
  std::size_t edge_count() const { return out_targets_.size(); }
  NodeId s() const { return s_; }
  NodeId t() const { return t_; }

  std::span<const NodeId> successors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> predecessors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }

  /// Kahn order. Throws std::invalid_argument if the graph has a cycle.
  std::vector<NodeId> topological_order() const;

  std::vector<Edge> edges() const;

  /// True when every edge goes from a lower to a higher id.
  bool ids_ordered() const { return ids_ordered_; }

 private:
  std::vector<uint32_t> out_offsets_, in_offsets_;
  std::vector<NodeId> out_targets_, in_sources_;
  NodeId s_ = 0;
  NodeId t_ = 0;
  bool ids_ordered_ = true;
};

/// A graph read from the edge-list fixture format: one "u v" edge per line,
/// plus "s <name>" and "t <name>" declarations; '#' starts a comment.
struct NamedDag {
  Dag dag;
  std::vector<std::string> names;

  NodeId id(const std::string& name) const;
};

NamedDag parse_edge_list(std::istream& in);
NamedDag parse_edge_list_string(const std::string& text);

}  // namespace dipsat
