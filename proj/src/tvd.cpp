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

#include "dipsat/tvd.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <tuple>

namespace dipsat {

//===----------------------------------------------------------------------===//
// Two disjoint paths
//===----------------------------------------------------------------------===//

namespace {

constexpr uint32_t kNone = UINT32_MAX;

struct PathScratch {
  std::vector<uint32_t> via, queue, next, prev;
};

PathScratch& path_scratch() {
  thread_local PathScratch s;
  return s;
}

}  // namespace

// A first path by BFS, then one augmentation through the residual graph of
// the vertex-split network, walked without building it: in(v) = 2v,
// out(v) = 2v + 1.
std::optional<DisjointPaths> find_two_disjoint_paths(const Dag& g) {
  const NodeId s = g.s(), t = g.t();
  const uint32_t n = g.size();
  if (s == t) return std::nullopt;
  PathScratch& w = path_scratch();

  w.via.assign(n, kNone);
  w.queue.assign(1, s);
  w.via[s] = s;
  for (std::size_t head = 0; head < w.queue.size() && w.via[t] == kNone; ++head) {
    NodeId x = w.queue[head];
    for (NodeId y : g.successors(x)) {
      if (w.via[y] != kNone) continue;
      w.via[y] = x;
      w.queue.push_back(y);
    }
  }
  if (w.via[t] == kNone) return std::nullopt;
  w.next.assign(n, kNone);
  w.prev.assign(n, kNone);
  for (NodeId y = t; y != s; y = w.via[y]) {
    w.next[w.via[y]] = y;
    w.prev[y] = w.via[y];
  }
  auto internal = [&](NodeId v) { return w.prev[v] != kNone && w.next[v] != kNone; };

  const uint32_t source = 2 * s + 1, sink = 2 * t;
  w.via.assign(2 * n, kNone);
  w.queue.assign(1, source);
  w.via[source] = source;
  auto push = [&](uint32_t from, uint32_t to) {
    if (w.via[to] != kNone) return;
    w.via[to] = from;
    w.queue.push_back(to);
  };
  for (std::size_t head = 0; head < w.queue.size() && w.via[sink] == kNone; ++head) {
    uint32_t x = w.queue[head];
    NodeId v = x / 2;
    if (x & 1) {
      for (NodeId y : g.successors(v))
        if (w.next[v] != y) push(x, 2 * y);
      if (internal(v)) push(x, 2 * v);
    } else {
      if (!internal(v)) push(x, 2 * v + 1);
      if (w.prev[v] != kNone) push(x, 2 * w.prev[v] + 1);
    }
  }
  if (w.via[sink] == kNone) return std::nullopt;

  // Cancel first, then add; s keeps its first edge and gains a second.
  NodeId second = kNone;
  for (uint32_t q = sink; q != source; q = w.via[q]) {
    uint32_t p = w.via[q];
    if (!(p & 1) && (q & 1) && p / 2 != q / 2) w.next[q / 2] = kNone;
  }
  for (uint32_t q = sink; q != source; q = w.via[q]) {
    uint32_t p = w.via[q];
    if ((p & 1) && !(q & 1) && p / 2 != q / 2) {
      if (p / 2 == s)
        second = q / 2;
      else
        w.next[p / 2] = q / 2;
    }
  }

  auto walk = [&](NodeId first) {
    std::vector<NodeId> path{s};
    path.reserve(n);
    for (NodeId v = first; v != t; v = w.next[v]) {
      assert(v != kNone);
      path.push_back(v);
    }
    path.push_back(t);
    return path;
  };
  DisjointPaths out;
  out.a = walk(w.next[s]);
  out.b = walk(second);
  return out;
}

//===----------------------------------------------------------------------===//
// All TVDs
//===----------------------------------------------------------------------===//

std::size_t TvdResult::pair_count() const {
  std::size_t n = 0;
  for (auto [lo, hi] : ranges) n += hi - lo + 1;
  return n;
}

std::vector<std::pair<uint32_t, uint32_t>> TvdResult::dual_ranges() const {
  std::vector<std::pair<uint32_t, uint32_t>> out(b_prime.size(), {UINT32_MAX, 0});
  for (uint32_t i = 0; i < ranges.size(); ++i) {
    for (uint32_t j = ranges[i].first; j <= ranges[i].second; ++j) {
      out[j].first = std::min(out[j].first, i);
      out[j].second = std::max(out[j].second, i);
    }
  }
  return out;
}

TvdResult find_all_tvds(const Dag& g, DisjointPaths paths) {
  const uint32_t n = g.size();
  const std::vector<NodeId>& A = paths.a;
  const std::vector<NodeId>& B = paths.b;
  assert(A.size() >= 2 && B.size() >= 2);
  const int ell = static_cast<int>(A.size()) - 1;
  const int k = static_cast<int>(B.size()) - 1;

  thread_local std::vector<int> pos_a, pos_b, reach_a, reach_b;
  pos_a.assign(n, -1);
  pos_b.assign(n, -1);
  for (int i = 0; i <= ell; ++i) pos_a[A[i]] = i;
  for (int j = 0; j <= k; ++j) pos_b[B[j]] = j;
  auto on_path = [&](NodeId v) { return pos_a[v] >= 0 || pos_b[v] >= 0; };

  // Furthest path index reachable through off-path nodes only.
  reach_a.assign(n, -1);
  reach_b.assign(n, -1);
  auto contrib = [&](NodeId x, int& best_a, int& best_b) {
    if (on_path(x)) {
      best_a = std::max(best_a, pos_a[x]);
      best_b = std::max(best_b, pos_b[x]);
    } else {
      best_a = std::max(best_a, reach_a[x]);
      best_b = std::max(best_b, reach_b[x]);
    }
  };
  auto visit = [&](NodeId w) {
    if (on_path(w)) return;
    int ra = -1, rb = -1;
    for (NodeId x : g.successors(w)) contrib(x, ra, rb);
    reach_a[w] = ra;
    reach_b[w] = rb;
  };
  if (g.ids_ordered()) {
    for (NodeId w = n; w-- > 0;) visit(w);
  } else {
    const std::vector<NodeId> order = g.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) visit(*it);
  }
  auto max_from = [&](NodeId u) {
    int ma = -1, mb = -1;
    for (NodeId x : g.successors(u)) contrib(x, ma, mb);
    return std::pair{ma, mb};
  };
  thread_local std::vector<int> a_to_a, a_to_b, b_to_a, b_to_b;
  a_to_a.resize(ell);
  a_to_b.resize(ell);
  b_to_a.resize(k);
  b_to_b.resize(k);
  for (int i = 0; i < ell; ++i) std::tie(a_to_a[i], a_to_b[i]) = max_from(A[i]);
  for (int j = 0; j < k; ++j) std::tie(b_to_a[j], b_to_b[j]) = max_from(B[j]);

  auto bypassed = [](const std::vector<int>& jump, int len) {
    thread_local std::vector<int> diff;
    diff.assign(len + 1, 0);
    for (int i = 0; i < len; ++i) {
      if (jump[i] > i + 1) {
        ++diff[i + 1];
        --diff[jump[i]];
      }
    }
    std::vector<bool> out(len + 1, false);
    int run = 0;
    for (int i = 0; i <= len; ++i) {
      run += diff[i];
      out[i] = run > 0;
    }
    return out;
  };

  TvdResult r;
  r.a_bypassed = bypassed(a_to_a, ell);
  r.b_bypassed = bypassed(b_to_b, k);

  // j_lo[i]: every b_j paired with a_i must be at or after it (no a->b cross).
  // i_lo[j]: same for b->a crossings.
  thread_local std::vector<int> j_lo, i_lo, b_ok_prefix, cover, bp_prefix;
  j_lo.assign(ell + 1, 0);
  i_lo.assign(k + 1, 0);
  for (int i = 1, run = -1; i <= ell; ++i) j_lo[i] = run = std::max(run, a_to_b[i - 1]);
  for (int j = 1, run = -1; j <= k; ++j) i_lo[j] = run = std::max(run, b_to_a[j - 1]);

  b_ok_prefix.assign(k + 1, 0);  // non-bypassed internal b count in [1, j]
  for (int j = 1; j < k; ++j) b_ok_prefix[j] = b_ok_prefix[j - 1] + (r.b_bypassed[j] ? 0 : 1);

  struct Span {
    int i, lo, hi;
  };
  thread_local std::vector<Span> spans;
  spans.clear();
  cover.assign(k + 1, 0);
  int j_hi = 0;
  for (int i = 1; i < ell; ++i) {
    while (j_hi + 1 <= k - 1 && i_lo[j_hi + 1] <= i) ++j_hi;
    if (r.a_bypassed[i]) continue;
    int lo = std::max(j_lo[i], 1), hi = j_hi;
    if (lo > hi || b_ok_prefix[hi] - b_ok_prefix[lo - 1] == 0) continue;
    spans.push_back({i, lo, hi});
    ++cover[lo];
    --cover[hi + 1];
  }

  bp_prefix.assign(k + 1, 0);
  for (int j = 1, run = 0; j < k; ++j) {
    run += cover[j];
    bool in = run > 0 && !r.b_bypassed[j];
    if (in) r.b_prime.push_back(B[j]);
    bp_prefix[j] = static_cast<int>(r.b_prime.size());
  }
  for (const Span& sp : spans) {
    r.a_prime.push_back(A[sp.i]);
    r.ranges.emplace_back(bp_prefix[sp.lo - 1], bp_prefix[sp.hi] - 1);
  }
  r.paths = std::move(paths);
  return r;
}

std::optional<TvdResult> find_all_tvds(const Dag& g) {
  g.topological_order();  // rejects cycles before any work
  auto paths = find_two_disjoint_paths(g);
  if (!paths) return std::nullopt;
  return find_all_tvds(g, *paths);
}

std::vector<NodePair> enumerate_pairs(const TvdResult& r) {
  std::vector<NodePair> out;
  out.reserve(r.pair_count());
  for (std::size_t i = 0; i < r.a_prime.size(); ++i) {
    for (uint32_t j = r.ranges[i].first; j <= r.ranges[i].second; ++j) {
      NodeId u = r.a_prime[i], v = r.b_prime[j];
      out.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  std::sort(out.begin(), out.end(), [](const NodePair& x, const NodePair& y) {
    return x.second != y.second ? x.second > y.second : x.first > y.first;
  });
  return out;
}

}  // namespace dipsat
