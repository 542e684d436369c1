#pragma once

// Message-passing search over an overlay: flooding (FL), normalized
// flooding (NF) and a single non-backtracking random walker (RW).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adhocsf/graph.hpp"
#include "adhocsf/rng.hpp"

namespace adhocsf {

enum class Algorithm { FL, NF, RW };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FL: return "FL";
    case Algorithm::NF: return "NF";
    case Algorithm::RW: return "RW";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "FL") return Algorithm::FL;
  if (s == "NF") return Algorithm::NF;
  if (s == "RW") return Algorithm::RW;
  throw std::invalid_argument("unknown search algorithm '" + std::string(s) + "'");
}

struct SearchOutcome {
  std::vector<NodeId> covered;  // distinct recipients, source excluded, in delivery order
  std::size_t messages = 0;
  bool success = false;
  std::optional<std::size_t> hops_to_target;
};

namespace detail {

inline void require_query(const Graph& g, NodeId source, NodeId target) {
  if (!g.is_live(source)) throw GraphError("search source " + std::to_string(source) + " is not live");
  if (target != kNoNode) {
    if (!g.is_live(target)) throw GraphError("search target " + std::to_string(target) + " is not live");
    if (target == source) throw std::invalid_argument("search target equals source");
  }
}

/// Moves a uniformly random `count`-subset of `pool` to its front.
template <std::uniform_random_bit_generator Urbg>
void partial_shuffle(std::vector<NodeId>& pool, std::size_t count, Urbg& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

/// Synchronous wavefront: in round t every node first reached in round t-1
/// forwards once, to all eligible neighbours (fanout == 0) or to a random
/// `fanout`-subset when it has more eligible neighbours than that.
template <std::uniform_random_bit_generator Urbg>
SearchOutcome wavefront(const Graph& g, NodeId source, NodeId target, std::size_t ttl, std::size_t fanout,
                        Urbg& rng) {
  require_query(g, source, target);
  SearchOutcome out;
  std::vector<char> reached(g.id_bound(), 0);
  reached[source] = 1;

  struct Holder {
    NodeId node;
    NodeId from;
  };
  std::vector<Holder> frontier{{source, kNoNode}}, next;
  std::vector<NodeId> recipients;

  for (std::size_t round = 1; round <= ttl && !frontier.empty(); ++round) {
    next.clear();
    for (const auto& [node, from] : frontier) {
      recipients.clear();
      for (NodeId v : g.neighbors(node))
        if (v != from) recipients.push_back(v);
      if (fanout != 0 && recipients.size() > fanout) {
        partial_shuffle(recipients, fanout, rng);
        recipients.resize(fanout);
      }
      for (NodeId v : recipients) {
        ++out.messages;
        if (reached[v]) continue;
        reached[v] = 1;
        out.covered.push_back(v);
        next.push_back({v, node});
        if (v == target) {
          out.success = true;
          out.hops_to_target = round;
        }
      }
    }
    frontier.swap(next);
  }
  return out;
}

}  // namespace detail

/// Flooding for `ttl` rounds. Duplicate deliveries are counted as messages
/// but never re-forwarded. Pass kNoNode as target for a pure coverage run.
template <std::uniform_random_bit_generator Urbg>
SearchOutcome flood_search(const Graph& g, NodeId source, NodeId target, std::size_t ttl, Urbg& rng) {
  return detail::wavefront(g, source, target, ttl, 0, rng);
}

/// Normalized flooding: every forwarder (the source included) sends to at
/// most m uniformly chosen eligible neighbours.
template <std::uniform_random_bit_generator Urbg>
SearchOutcome nf_search(const Graph& g, NodeId source, NodeId target, std::size_t ttl, std::size_t m,
                        Urbg& rng) {
  if (m < 1) throw std::invalid_argument("normalized flooding needs m >= 1");
  return detail::wavefront(g, source, target, ttl, m, rng);
}

/// One walker, `budget` steps at most. Each step goes to a uniform
/// neighbour other than the one just left; at a dead end it steps back.
/// Stops early on reaching the target.
template <std::uniform_random_bit_generator Urbg>
SearchOutcome rw_search(const Graph& g, NodeId source, NodeId target, std::size_t budget, Urbg& rng) {
  detail::require_query(g, source, target);
  SearchOutcome out;
  if (g.degree(source) == 0) return out;
  std::vector<char> seen(g.id_bound(), 0);
  seen[source] = 1;
  NodeId prev = kNoNode;
  NodeId here = source;
  for (std::size_t step = 1; step <= budget; ++step) {
    const auto nbrs = g.neighbors(here);
    NodeId next;
    if (prev == kNoNode) {
      next = nbrs[uniform_index(rng, nbrs.size())];
    } else if (nbrs.size() == 1) {
      next = nbrs[0];
    } else {
      const auto back = static_cast<std::size_t>(std::find(nbrs.begin(), nbrs.end(), prev) - nbrs.begin());
      std::size_t i = uniform_index(rng, nbrs.size() - 1);
      if (i >= back) ++i;
      next = nbrs[i];
    }
    ++out.messages;
    prev = here;
    here = next;
    if (!seen[here]) {
      seen[here] = 1;
      out.covered.push_back(here);
    }
    if (here == target) {
      out.success = true;
      out.hops_to_target = step;
      break;
    }
  }
  return out;
}

/// Message count of one untargeted NF query; used as the step budget of
/// the paired RW query.
template <std::uniform_random_bit_generator Urbg>
std::size_t rw_budget_from_nf(const Graph& g, NodeId source, std::size_t ttl, std::size_t m, Urbg& rng) {
  return nf_search(g, source, kNoNode, ttl, m, rng).messages;
}

}  // namespace adhocsf
