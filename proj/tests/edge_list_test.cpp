#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "adhocsf/edge_list.hpp"
#include "adhocsf/growth.hpp"

namespace adhocsf {
namespace {

TEST(EdgeList, WritesCanonicalOrderWithIsolatedNodes) {
  Graph g;
  for (int i = 0; i < 5; ++i) g.add_node();
  g.add_edge(3, 1);
  g.add_edge(0, 3);
  g.add_edge(1, 0);
  g.remove_node(4);
  g.add_node();  // id 5, isolated
  std::ostringstream out;
  write_edge_list(out, g, {"hello"});
  EXPECT_EQ(out.str(), "# hello\n0 1\n0 3\n1 3\n2\n5\n");
}

TEST(EdgeList, ReadPreservesIdsAndDeadGaps) {
  std::istringstream in("# comment\n0 3\n\n3 5\n7\n");
  const Graph g = read_edge_list(in);
  EXPECT_EQ(g.live_count(), 4u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(0, 3));
  EXPECT_TRUE(g.has_edge(5, 3));
  EXPECT_TRUE(g.is_live(7));
  EXPECT_FALSE(g.is_live(1));
  EXPECT_FALSE(g.is_live(6));
  EXPECT_TRUE(g.audit().empty());
}

TEST(EdgeList, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_edge_list(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("0 1\n1 x\n"), 2u);
  EXPECT_EQ(line_of("0 1\n# c\n2 2\n"), 3u);
  EXPECT_EQ(line_of("0 1\n1 0\n"), 2u);
  EXPECT_EQ(line_of("0 1 2\n"), 1u);
  EXPECT_EQ(line_of("-1 2\n"), 1u);
}

TEST(EdgeList, AuditFlagsConventionViolations) {
  std::istringstream in("2 1\n0 1\n0 1\n3 3\n1\n");
  const auto findings = audit_edge_list(parse_edge_list(in));
  auto has = [&](const std::string& needle) {
    for (const auto& f : findings)
      if (f.find(needle) != std::string::npos) return true;
    return false;
  };
  EXPECT_TRUE(has("not ordered"));
  EXPECT_TRUE(has("duplicate"));
  EXPECT_TRUE(has("self-loop"));
  EXPECT_TRUE(has("ascending"));
  EXPECT_TRUE(has("isolated but has edges"));
}

// Writing then reading any grown graph yields the same edge set and ids.
TEST(EdgeList, RoundTripPreservesGrownGraphs) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GrowthParams p;
    p.mu = 0.3;
    p.tau_j = seed % 3;
    p.tau_l = seed % 2;
    p.m = 1 + seed % 3;
    p.n_target = 300;
    p.seed = seed;
    const Graph g = grow(p).graph;
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream in(out.str());
    const Graph h = read_edge_list(in);
    EXPECT_EQ(h.sorted_live_nodes(), g.sorted_live_nodes());
    EXPECT_EQ(h.edge_count(), g.edge_count());
    for (NodeId u : g.live_nodes())
      for (NodeId v : g.neighbors(u)) EXPECT_TRUE(h.has_edge(u, v));
    std::ostringstream again;
    write_edge_list(again, h);
    EXPECT_EQ(again.str(), out.str());
  }
}

}  // namespace
}  // namespace adhocsf
