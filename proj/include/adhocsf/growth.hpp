#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adhocsf/graph.hpp"
#include "adhocsf/rng.hpp"

namespace adhocsf {

/// Knobs of the local-information growth model.
struct GrowthParams {
  double mu = 0.0;                   // per-step deletion probability, [0, 1)
  std::size_t tau_j = 1;             // join horizon in hops
  std::size_t tau_l = 1;             // leave (rewiring) horizon in hops
  std::optional<std::size_t> k_c;    // hard degree cutoff; nullopt = unbounded
  std::size_t m = 1;                 // stubs per joining node
  std::size_t n_target = 1000;       // live nodes at the end of grow()
  std::uint64_t seed = 1;

  void validate() const {
    if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in [0, 1)");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (k_c && *k_c <= m) throw std::invalid_argument("k_c must exceed m");
    if (n_target < m + 2) throw std::invalid_argument("n_target must be >= m + 2");
  }

  [[nodiscard]] bool saturated(std::size_t degree) const noexcept { return k_c && degree >= *k_c; }
};

struct GrowthTrace {
  std::size_t joins = 0;
  std::size_t leaves = 0;
  std::size_t failed_stub_attachments = 0;
  std::size_t rewires_attempted = 0;
  std::size_t rewires_completed = 0;
};

/// Complete graph on m + 1 nodes. A bounded cutoff below m cannot host it.
inline Graph seed_clique(std::size_t m, std::optional<std::size_t> k_c = std::nullopt) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (k_c && *k_c < m) throw std::invalid_argument("k_c below m cannot hold the seed clique");
  return complete_graph(m + 1);
}

/// Degree-proportional pick among `candidates`, normalized over the set.
/// Zero-degree candidates carry no weight unless every candidate has degree
/// zero, in which case the pick is uniform. Returns the index into
/// `candidates`; candidates must be non-empty.
template <std::uniform_random_bit_generator Urbg>
std::size_t pick_preferential(const Graph& g, std::span<const NodeId> candidates, Urbg& rng) {
  std::size_t total = 0;
  for (NodeId v : candidates) total += g.degree(v);
  if (total == 0) return uniform_index(rng, candidates.size());
  auto ticket = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t w = g.degree(candidates[i]);
    if (ticket < w) return i;
    ticket -= w;
  }
  return candidates.size() - 1;  // unreachable
}

/// Join/leave machinery with reusable BFS scratch. One instance per
/// simulation worker.
class GrowthEngine {
 public:
  explicit GrowthEngine(const GrowthParams& params) : params_(params) {}

  [[nodiscard]] const GrowthTrace& trace() const noexcept { return trace_; }
  [[nodiscard]] const GrowthParams& params() const noexcept { return params_; }

  /// Adds one node and attaches it through horizon-limited preferential
  /// attachment. At most 10 * live_count anchor draws are made; after that
  /// the node keeps whatever degree it reached.
  template <std::uniform_random_bit_generator Urbg>
  NodeId join(Graph& g, Urbg& rng) {
    if (g.live_count() == 0) throw GraphError("join on an empty graph");
    const NodeId u = g.add_node();
    ++trace_.joins;
    const std::size_t budget = 10 * g.live_count();
    std::size_t draws = 0;
    while (g.degree(u) < params_.m) {
      if (draws == budget) {
        ++trace_.failed_stub_attachments;
        break;
      }
      ++draws;
      NodeId anchor = g.random_live_node(rng);
      while (anchor == u) anchor = g.random_live_node(rng);
      attach_via(g, u, anchor, rng);
    }
    return u;
  }

  /// One anchor draw of a join: links u to members of the anchor's tau_j
  /// horizon until u has m links or the horizon is used up. With tau_j = 0
  /// the horizon is the anchor alone and no degree weighting applies.
  template <std::uniform_random_bit_generator Urbg>
  void attach_via(Graph& g, NodeId u, NodeId anchor, Urbg& rng) {
    if (params_.tau_j == 0) {
      if (!params_.saturated(g.degree(anchor)) && !g.has_edge(u, anchor)) g.add_edge(u, anchor);
      return;
    }
    const auto& reach = bfs_.horizon(g, anchor, params_.tau_j, [&](NodeId v) {
      return v == u || params_.saturated(g.degree(v)) || g.has_edge(u, v);
    });
    candidates_.assign(reach.begin(), reach.end());
    while (g.degree(u) < params_.m && !candidates_.empty()) {
      const std::size_t i = pick_preferential(g, std::span<const NodeId>(candidates_), rng);
      g.add_edge(u, candidates_[i]);
      candidates_.erase(candidates_.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  /// Removes `victim`; each former neighbour then tries to add one
  /// replacement link inside the victim's pre-removal tau_l horizon.
  template <std::uniform_random_bit_generator Urbg>
  void leave(Graph& g, NodeId victim, Urbg& rng) {
    if (!g.is_live(victim)) throw GraphError("leave: node " + std::to_string(victim) + " is not live");
    std::vector<NodeId> reach;
    if (params_.tau_l > 0) {
      const auto& h = bfs_.horizon(g, victim, params_.tau_l, [&](NodeId v) { return v == victim; });
      reach.assign(h.begin(), h.end());
    }
    const auto orphans = g.remove_node(victim);
    ++trace_.leaves;
    if (params_.tau_l == 0) return;

    for (NodeId w : orphans) {
      ++trace_.rewires_attempted;
      // An earlier orphan may already have refilled w up to the cutoff.
      if (params_.saturated(g.degree(w))) continue;
      candidates_.clear();
      for (NodeId v : reach)
        if (v != w && g.is_live(v) && !params_.saturated(g.degree(v)) && !g.has_edge(w, v))
          candidates_.push_back(v);
      if (candidates_.empty()) continue;
      const std::size_t i = pick_preferential(g, std::span<const NodeId>(candidates_), rng);
      g.add_edge(w, candidates_[i]);
      ++trace_.rewires_completed;
    }
  }

 private:
  GrowthParams params_;
  GrowthTrace trace_;
  BfsWorkspace bfs_;
  std::vector<NodeId> candidates_;
};

template <std::uniform_random_bit_generator Urbg>
NodeId join(Graph& g, const GrowthParams& params, Urbg& rng, GrowthTrace* trace = nullptr) {
  GrowthEngine engine(params);
  const NodeId u = engine.join(g, rng);
  if (trace) {
    trace->joins += engine.trace().joins;
    trace->failed_stub_attachments += engine.trace().failed_stub_attachments;
  }
  return u;
}

template <std::uniform_random_bit_generator Urbg>
void leave(Graph& g, NodeId victim, const GrowthParams& params, Urbg& rng, GrowthTrace* trace = nullptr) {
  GrowthEngine engine(params);
  engine.leave(g, victim, rng);
  if (trace) {
    trace->leaves += engine.trace().leaves;
    trace->rewires_attempted += engine.trace().rewires_attempted;
    trace->rewires_completed += engine.trace().rewires_completed;
  }
}

struct GrowthResult {
  Graph graph;
  GrowthTrace trace;
};

/// Checks the cutoff bound and the structural audit; throws on violation.
inline void check_growth_invariants(const Graph& g, const GrowthParams& params) {
  if (params.k_c)
    for (NodeId u : g.live_nodes())
      if (g.degree(u) > *params.k_c)
        throw GraphError("node " + std::to_string(u) + " exceeds cutoff with degree " +
                         std::to_string(g.degree(u)));
  if (auto problems = g.audit(); !problems.empty()) throw GraphError(problems.front());
}

/// Grows a network from an (m+1)-clique until exactly n_target nodes are
/// live. After each join, with probability mu, a uniformly drawn live node
/// leaves; deletion is skipped while live_count <= m + 2.
inline GrowthResult grow(const GrowthParams& params, bool audit_each_step = false) {
  params.validate();
  Rng rng(params.seed);
  Graph g = seed_clique(params.m, params.k_c);
  GrowthEngine engine(params);
  while (true) {
    engine.join(g, rng);
    if (audit_each_step) check_growth_invariants(g, params);
    if (g.live_count() == params.n_target) break;
    const double coin = uniform_unit(rng);
    if (coin < params.mu && g.live_count() > params.m + 2) {
      engine.leave(g, g.random_live_node(rng), rng);
      if (audit_each_step) check_growth_invariants(g, params);
    }
  }
  g.canonicalize();
  return {std::move(g), engine.trace()};
}

}  // namespace adhocsf
