#pragma once

// Plain-text edge lists: one "u v" per line (u < v on output), a lone "u"
// for isolated nodes, '#' comment lines. Output is sorted by (u, v).

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adhocsf/graph.hpp"

namespace adhocsf {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raw contents of an edge-list file, before any graph invariants are applied.
struct EdgeListRecord {
  struct Edge {
    NodeId u;
    NodeId v;
    std::size_t line;
  };
  std::vector<Edge> edges;
  std::vector<std::pair<NodeId, std::size_t>> singletons;  // (node, line)
  std::vector<std::string> comments;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline NodeId parse_id(std::string_view tok, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  if (value >= kNoNode) throw ParseError(line, "node id out of range");
  return static_cast<NodeId>(value);
}

}  // namespace detail

inline EdgeListRecord parse_edge_list(std::istream& in) {
  EdgeListRecord rec;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = detail::trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      rec.comments.emplace_back(text);
      continue;
    }
    std::vector<std::string_view> toks;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto start = text.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      auto end = text.find_first_of(" \t", start);
      if (end == std::string_view::npos) end = text.size();
      toks.push_back(text.substr(start, end - start));
      pos = end;
    }
    if (toks.size() == 1) {
      rec.singletons.emplace_back(detail::parse_id(toks[0], line), line);
    } else if (toks.size() == 2) {
      rec.edges.push_back({detail::parse_id(toks[0], line), detail::parse_id(toks[1], line), line});
    } else {
      throw ParseError(line, "expected 'u v' or 'u', got " + std::to_string(toks.size()) + " fields");
    }
  }
  return rec;
}

/// Builds a Graph whose ids match the file. Ids never mentioned in the file
/// are allocated and then removed so they stay dead. Self-loops and
/// duplicate edges are rejected with the offending line number.
inline Graph build_graph(const EdgeListRecord& rec) {
  std::size_t bound = 0;
  for (const auto& e : rec.edges) bound = std::max<std::size_t>(bound, std::max(e.u, e.v) + 1);
  for (const auto& [u, line] : rec.singletons) bound = std::max<std::size_t>(bound, u + 1);

  std::vector<char> present(bound, 0);
  for (const auto& e : rec.edges) present[e.u] = present[e.v] = 1;
  for (const auto& [u, line] : rec.singletons) present[u] = 1;

  Graph g;
  for (std::size_t i = 0; i < bound; ++i) g.add_node();
  for (NodeId u = 0; u < bound; ++u)
    if (!present[u]) g.remove_node(u);
  for (const auto& e : rec.edges) {
    if (e.u == e.v) throw ParseError(e.line, "self-loop on node " + std::to_string(e.u));
    if (!g.add_edge(e.u, e.v))
      throw ParseError(e.line, "duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
  }
  g.canonicalize();
  return g;
}

inline Graph read_edge_list(std::istream& in) { return build_graph(parse_edge_list(in)); }

/// Writes g in canonical order. `header` lines are emitted first, each
/// prefixed with "# ".
inline void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& header = {}) {
  for (const auto& h : header) out << "# " << h << '\n';
  std::vector<NodeId> upper;
  for (NodeId u : g.sorted_live_nodes()) {
    if (g.degree(u) == 0) {
      out << u << '\n';
      continue;
    }
    upper.clear();
    for (NodeId v : g.neighbors(u))
      if (v > u) upper.push_back(v);
    std::sort(upper.begin(), upper.end());
    for (NodeId v : upper) out << u << ' ' << v << '\n';
  }
}

/// Lints a raw edge list against the on-disk conventions and the simple
/// graph invariants. Returns human-readable findings; empty means clean.
inline std::vector<std::string> audit_edge_list(const EdgeListRecord& rec) {
  std::vector<std::string> findings;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::pair<NodeId, NodeId> prev{0, 0};
  bool first = true;
  for (const auto& e : rec.edges) {
    const auto where = "line " + std::to_string(e.line) + ": ";
    if (e.u == e.v) {
      findings.push_back(where + "self-loop " + std::to_string(e.u));
      continue;
    }
    if (e.u > e.v) findings.push_back(where + "pair not ordered u < v");
    const auto norm = std::minmax(e.u, e.v);
    const std::pair<NodeId, NodeId> p{norm.first, norm.second};
    if (!seen.insert(p).second) findings.push_back(where + "duplicate edge");
    if (!first && p < prev) findings.push_back(where + "edges not in ascending order");
    prev = p;
    first = false;
  }
  for (const auto& [u, line] : rec.singletons) {
    const bool has_edge = std::any_of(rec.edges.begin(), rec.edges.end(),
                                      [u = u](const auto& e) { return e.u == u || e.v == u; });
    if (has_edge)
      findings.push_back("line " + std::to_string(line) + ": node " + std::to_string(u) +
                         " listed as isolated but has edges");
  }
  return findings;
}

}  // namespace adhocsf
