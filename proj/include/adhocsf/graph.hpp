#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "adhocsf/rng.hpp"

namespace adhocsf {

/// Node identifier. Allocated monotonically; ids of removed nodes are never
/// handed out again within the lifetime of a Graph.
using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Undirected simple graph over a monotone id space.
///
/// Adjacency is stored per node as an unordered vector (iteration order is a
/// deterministic function of the operation history). Edge membership goes
/// through a hash set keyed on the ordered pair, so has_edge is O(1)
/// expected and degree() is O(1).
class Graph {
 public:
  Graph() = default;

  NodeId add_node() {
    const auto id = static_cast<NodeId>(adj_.size());
    adj_.emplace_back();
    live_pos_.push_back(live_.size());
    live_.push_back(id);
    return id;
  }

  /// Inserts {u, v}. Returns false if the edge already exists.
  bool add_edge(NodeId u, NodeId v) {
    if (u == v) throw GraphError("self-loop on node " + std::to_string(u));
    require_live(u);
    require_live(v);
    if (!edges_.insert(key(u, v)).second) return false;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    return true;
  }

  bool remove_edge(NodeId u, NodeId v) {
    require_live(u);
    require_live(v);
    if (edges_.erase(key(u, v)) == 0) return false;
    erase_from(adj_[u], v);
    erase_from(adj_[v], u);
    return true;
  }

  /// Removes u with all incident edges. Returns the former neighbours of u
  /// in ascending id order.
  std::vector<NodeId> remove_node(NodeId u) {
    require_live(u);
    std::vector<NodeId> former = std::move(adj_[u]);
    adj_[u] = {};
    for (NodeId w : former) {
      edges_.erase(key(u, w));
      erase_from(adj_[w], u);
    }
    // swap-remove from the live list
    const std::size_t pos = live_pos_[u];
    const NodeId last = live_.back();
    live_[pos] = last;
    live_pos_[last] = pos;
    live_.pop_back();
    live_pos_[u] = kDead;
    std::sort(former.begin(), former.end());
    return former;
  }

  [[nodiscard]] bool is_live(NodeId u) const noexcept {
    return u < live_pos_.size() && live_pos_[u] != kDead;
  }

  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const {
    return u != v && edges_.contains(key(u, v));
  }

  [[nodiscard]] std::size_t degree(NodeId u) const { return adj_[u].size(); }

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const { return adj_[u]; }

  [[nodiscard]] std::size_t live_count() const noexcept { return live_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

  /// One past the largest id ever allocated.
  [[nodiscard]] std::size_t id_bound() const noexcept { return adj_.size(); }

  /// Live ids in unspecified (but history-deterministic) order.
  [[nodiscard]] std::span<const NodeId> live_nodes() const noexcept { return live_; }

  [[nodiscard]] std::vector<NodeId> sorted_live_nodes() const {
    std::vector<NodeId> out(live_.begin(), live_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  template <std::uniform_random_bit_generator Urbg>
  NodeId random_live_node(Urbg& rng) const {
    if (live_.empty()) throw GraphError("random_live_node on empty graph");
    return live_[uniform_index(rng, live_.size())];
  }

  /// Sorts every adjacency list. Graphs with equal edge sets become
  /// indistinguishable to order-sensitive consumers (random neighbour picks).
  void canonicalize() {
    for (auto& list : adj_) std::sort(list.begin(), list.end());
    std::sort(live_.begin(), live_.end());
    for (std::size_t i = 0; i < live_.size(); ++i) live_pos_[live_[i]] = i;
  }

  [[nodiscard]] std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeId u : live_) best = std::max(best, adj_[u].size());
    return best;
  }

  /// Full scan of the structural invariants. Returns one message per
  /// violation; an empty result means the graph is consistent.
  [[nodiscard]] std::vector<std::string> audit() const {
    std::vector<std::string> problems;
    std::size_t degree_sum = 0;
    for (NodeId u = 0; u < adj_.size(); ++u) {
      if (!is_live(u)) {
        if (!adj_[u].empty()) problems.push_back("dead node " + std::to_string(u) + " has adjacency");
        continue;
      }
      if (live_[live_pos_[u]] != u) problems.push_back("live index broken at " + std::to_string(u));
      std::unordered_set<NodeId> seen;
      for (NodeId v : adj_[u]) {
        if (v == u) problems.push_back("self-loop at " + std::to_string(u));
        if (!seen.insert(v).second)
          problems.push_back("multi-edge " + std::to_string(u) + "-" + std::to_string(v));
        if (!is_live(v)) {
          problems.push_back("edge " + std::to_string(u) + "-" + std::to_string(v) + " to dead node");
          continue;
        }
        const auto& back = adj_[v];
        if (std::find(back.begin(), back.end(), u) == back.end())
          problems.push_back("asymmetric edge " + std::to_string(u) + "-" + std::to_string(v));
        if (!edges_.contains(key(u, v)))
          problems.push_back("edge " + std::to_string(u) + "-" + std::to_string(v) + " missing from index");
      }
      degree_sum += adj_[u].size();
    }
    if (degree_sum != 2 * edges_.size())
      problems.push_back("edge_count " + std::to_string(edges_.size()) + " != half degree sum " +
                         std::to_string(degree_sum / 2));
    std::size_t live_seen = 0;
    for (NodeId u = 0; u < adj_.size(); ++u) live_seen += is_live(u) ? 1 : 0;
    if (live_seen != live_.size()) problems.push_back("live_count mismatch");
    return problems;
  }

 private:
  static constexpr std::size_t kDead = std::numeric_limits<std::size_t>::max();

  static std::uint64_t key(NodeId u, NodeId v) noexcept {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  static void erase_from(std::vector<NodeId>& list, NodeId v) {
    auto it = std::find(list.begin(), list.end(), v);
    if (it != list.end()) {
      *it = list.back();
      list.pop_back();
    }
  }

  void require_live(NodeId u) const {
    if (!is_live(u)) throw GraphError("node " + std::to_string(u) + " is not live");
  }

  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::size_t> live_pos_;
  std::vector<NodeId> live_;
  std::unordered_set<std::uint64_t> edges_;
};

/// Reusable breadth-first scratch space. Visit marks are epoch-stamped so a
/// horizon query costs O(size of the horizon), not O(id space).
class BfsWorkspace {
 public:
  /// All live nodes within `radius` hops of `root` (root included at
  /// distance 0), in discovery order, minus those for which `exclude`
  /// returns true. Excluded nodes are still traversed.
  template <class Exclude>
  const std::vector<NodeId>& horizon(const Graph& g, NodeId root, std::size_t radius, Exclude&& exclude) {
    begin(g);
    result_.clear();
    frontier_.assign(1, root);
    mark_[root] = epoch_;
    if (!exclude(root)) result_.push_back(root);
    for (std::size_t depth = 0; depth < radius && !frontier_.empty(); ++depth) {
      next_.clear();
      for (NodeId u : frontier_) {
        for (NodeId v : g.neighbors(u)) {
          if (mark_[v] == epoch_) continue;
          mark_[v] = epoch_;
          next_.push_back(v);
          if (!exclude(v)) result_.push_back(v);
        }
      }
      frontier_.swap(next_);
    }
    return result_;
  }

  /// Hop distances from root to every reachable live node; unreachable
  /// entries hold kUnreached. Indexed by NodeId.
  const std::vector<std::uint32_t>& distances(const Graph& g, NodeId root) {
    dist_.assign(g.id_bound(), kUnreached);
    frontier_.assign(1, root);
    dist_[root] = 0;
    for (std::uint32_t depth = 1; !frontier_.empty(); ++depth) {
      next_.clear();
      for (NodeId u : frontier_)
        for (NodeId v : g.neighbors(u))
          if (dist_[v] == kUnreached) {
            dist_[v] = depth;
            next_.push_back(v);
          }
      frontier_.swap(next_);
    }
    return dist_;
  }

  static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

 private:
  void begin(const Graph& g) {
    if (mark_.size() < g.id_bound()) mark_.resize(g.id_bound(), 0);
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
  }

  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> frontier_, next_, result_;
  std::vector<std::uint32_t> dist_;
};

/// Convenience form of BfsWorkspace::horizon with an explicit exclusion set.
inline std::vector<NodeId> bfs_horizon(const Graph& g, NodeId root, std::size_t radius,
                                       const std::unordered_set<NodeId>& exclude = {}) {
  if (!g.is_live(root)) throw GraphError("bfs root " + std::to_string(root) + " is not live");
  BfsWorkspace ws;
  return ws.horizon(g, root, radius, [&](NodeId v) { return exclude.contains(v); });
}

/// Complete graph on n nodes with ids 0..n-1.
inline Graph complete_graph(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node();
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

}  // namespace adhocsf
