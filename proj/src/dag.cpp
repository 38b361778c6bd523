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

#include "dipsat/dag.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dipsat {

Dag::Dag(uint32_t num_nodes, std::span<const Edge> edges, NodeId s, NodeId t) { assign(num_nodes, edges, s, t); }

void Dag::assign(uint32_t num_nodes, std::span<const Edge> edges, NodeId s, NodeId t) {
  if (s >= num_nodes || t >= num_nodes) throw std::invalid_argument("source or sink out of range");
  s_ = s;
  t_ = t;
  ids_ordered_ = true;
  out_offsets_.assign(num_nodes + 1, 0);
  in_offsets_.assign(num_nodes + 1, 0);
  for (auto [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) throw std::invalid_argument("edge endpoint out of range");
    ++out_offsets_[u + 1];
    ++in_offsets_[v + 1];
    if (u >= v) ids_ordered_ = false;
  }
  for (uint32_t i = 0; i < num_nodes; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_targets_.resize(edges.size());
  in_sources_.resize(edges.size());
  thread_local std::vector<uint32_t> out_fill, in_fill;
  out_fill.assign(out_offsets_.begin(), out_offsets_.end() - 1);
  in_fill.assign(in_offsets_.begin(), in_offsets_.end() - 1);
  for (auto [u, v] : edges) {
    out_targets_[out_fill[u]++] = v;
    in_sources_[in_fill[v]++] = u;
  }
}

std::vector<NodeId> Dag::topological_order() const {
  const uint32_t n = size();
  if (ids_ordered_) {
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    return order;
  }
  std::vector<uint32_t> indeg(n);
  for (NodeId v = 0; v < n; ++v) indeg[v] = in_offsets_[v + 1] - in_offsets_[v];
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeId w : successors(order[head]))
      if (--indeg[w] == 0) order.push_back(w);
  }
  if (order.size() != n) throw std::invalid_argument("graph contains a directed cycle");
  return order;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < size(); ++u)
    for (NodeId v : successors(u)) out.emplace_back(u, v);
  return out;
}

NodeId NamedDag::id(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("unknown node '" + name + "'");
  return static_cast<NodeId>(it - names.begin());
}

NamedDag parse_edge_list(std::istream& in) {
  NamedDag g;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<NodeId>(g.names.size()));
    if (fresh) g.names.push_back(name);
    return it->second;
  };
  std::vector<Edge> edges;
  std::string s_name, t_name;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": expected two tokens");
    }
    if (a == "s") {
      s_name = b;
      intern(b);
    } else if (a == "t") {
      t_name = b;
      intern(b);
    } else {
      NodeId u = intern(a);
      edges.emplace_back(u, intern(b));
    }
  }
  if (s_name.empty() || t_name.empty()) throw std::invalid_argument("edge list lacks 's' or 't' declaration");
  g.dag = Dag(static_cast<uint32_t>(g.names.size()), edges, ids.at(s_name), ids.at(t_name));
  return g;
}

NamedDag parse_edge_list_string(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

}  // namespace dipsat
