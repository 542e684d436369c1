#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "adhocsf/growth.hpp"
#include "adhocsf/metrics.hpp"

namespace adhocsf {
namespace {

Graph star(std::size_t leaves) {
  Graph g;
  const NodeId hub = g.add_node();
  for (std::size_t i = 0; i < leaves; ++i) g.add_edge(hub, g.add_node());
  return g;
}

Graph path(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node();
  for (NodeId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph triangles(std::size_t count) {
  Graph g;
  for (std::size_t t = 0; t < count; ++t) {
    const NodeId a = g.add_node(), b = g.add_node(), c = g.add_node();
    g.add_edge(a, b);
    g.add_edge(b, c);
    g.add_edge(a, c);
  }
  return g;
}

// Draws from P(k) proportional to k^-gamma on [lo, hi] by inverting the
// tabulated CDF.
std::map<std::size_t, std::size_t> sample_power_law(double gamma, std::size_t lo, std::size_t hi, std::size_t draws,
                                                    std::uint64_t seed) {
  std::vector<double> cdf;
  double acc = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) cdf.push_back(acc += std::pow(static_cast<double>(k), -gamma));
  for (double& c : cdf) c /= acc;
  Rng rng(seed);
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < draws; ++i) {
    const double u = uniform_unit(rng);
    const auto idx = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++counts[lo + std::min(idx, cdf.size() - 1)];
  }
  return counts;
}

DegreeDistribution from_counts(std::map<std::size_t, std::size_t> counts) {
  DegreeDistribution d;
  for (const auto& [k, c] : counts) d.n_live += c;
  d.counts = std::move(counts);
  return d;
}

TEST(DegreeDistribution, SmallGraphs) {
  Graph k4 = complete_graph(4);
  EXPECT_EQ(degree_distribution(k4).counts, (std::map<std::size_t, std::size_t>{{3, 4}}));
  EXPECT_EQ(degree_distribution(star(5)).counts, (std::map<std::size_t, std::size_t>{{1, 5}, {5, 1}}));
  Graph empty;
  for (int i = 0; i < 3; ++i) empty.add_node();
  const auto d = degree_distribution(empty);
  EXPECT_EQ(d.counts, (std::map<std::size_t, std::size_t>{{0, 3}}));
  EXPECT_DOUBLE_EQ(d.p(0), 1.0);
  EXPECT_DOUBLE_EQ(d.p(7), 0.0);
}

TEST(DegreeDistribution, LogBinsConserveMassAndNormalizeByWidth) {
  GrowthParams p;
  p.m = 2;
  p.tau_j = 3;
  p.n_target = 3000;
  p.seed = 4;
  const Graph g = grow(p).graph;
  const auto d = degree_distribution(g, Binning::log(1.3));
  std::size_t binned = 0, prev_hi = 0;
  for (const auto& b : d.bins) {
    EXPECT_GT(b.k_lo, prev_hi);
    EXPECT_GE(b.k_hi, b.k_lo);
    EXPECT_NEAR(b.density * static_cast<double>(d.n_live) * static_cast<double>(b.k_hi - b.k_lo + 1),
                static_cast<double>(b.count), 1e-9);
    binned += b.count;
    prev_hi = b.k_hi;
  }
  EXPECT_EQ(binned, d.n_live);  // no isolated nodes at mu = 0
  EXPECT_THROW(log_bins(d.counts, d.n_live, 1.0), std::invalid_argument);
}

TEST(DegreeDistribution, SumsToLiveCountUnderChurn) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GrowthParams p;
    p.m = 1 + seed % 3;
    p.mu = 0.3;
    p.tau_j = 2;
    p.tau_l = seed % 3;
    p.k_c = 20;
    p.n_target = 2000;
    p.seed = seed;
    const Graph g = grow(p).graph;
    std::size_t total = 0;
    for (const auto& [k, c] : degree_distribution(g).counts) total += c;
    EXPECT_EQ(total, g.live_count());
  }
}

TEST(DegreeDistribution, AveragingIsPointwise) {
  const auto a = degree_distribution(star(3));    // {1: 3/4, 3: 1/4}
  const auto b = degree_distribution(path(3));    // {1: 2/3, 2: 1/3}
  const auto mean = average_distributions({a, b});
  EXPECT_DOUBLE_EQ(mean.at(1), (0.75 + 2.0 / 3.0) / 2);
  EXPECT_DOUBLE_EQ(mean.at(2), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(mean.at(3), 0.125);
}

TEST(PowerLawFit, RecoversCubicExponent) {
  const auto d = from_counts(sample_power_law(3.0, 1, 10000, 1000000, 11));
  const auto fit = fit_power_law(d, 1, 10000);
  EXPECT_NEAR(fit.gamma_hat, 3.0, 0.01);
  EXPECT_EQ(fit.samples, 1000000u);
  EXPECT_GT(fit.std_error, 0.0);
}

class PowerLawRecovery : public ::testing::TestWithParam<double> {};

TEST_P(PowerLawRecovery, WithinTwoStandardErrors) {
  const double gamma = GetParam();
  const auto d = from_counts(sample_power_law(gamma, 1, 10000, 1000000, 100 + static_cast<std::uint64_t>(gamma * 10)));
  const auto fit = fit_power_law(d, 1, 10000);
  EXPECT_LE(std::abs(fit.gamma_hat - gamma), 2 * fit.std_error) << "gamma_hat " << fit.gamma_hat;
  EXPECT_GT(fit.gamma_hat, 1.0);
}

INSTANTIATE_TEST_SUITE_P(Exponents, PowerLawRecovery, ::testing::Values(2.2, 2.5, 3.0));

TEST(PowerLawFit, TruncatedWindowIgnoresOutside) {
  auto counts = sample_power_law(2.5, 5, 200, 200000, 3);
  counts[1] = 1000000;  // junk below the window
  counts[500] = 1000000;
  const auto fit = fit_power_law(from_counts(counts), 5, 200);
  EXPECT_NEAR(fit.gamma_hat, 2.5, 3 * fit.std_error);
  EXPECT_EQ(fit.samples, 200000u);
}

TEST(PowerLawFit, UniformDegreesDoNotCrash) {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t k = 1; k <= 50; ++k) counts[k] = 20;
  const auto fit = fit_power_law(from_counts(counts), 1, 50);
  EXPECT_TRUE(std::isfinite(fit.gamma_hat));
  EXPECT_LT(fit.gamma_hat, 1.0);  // a flat histogram is no power law
  EXPECT_GT(fit.std_error, 0.01);
}

TEST(PowerLawFit, NeedsThreeSupportPoints) {
  EXPECT_THROW(fit_power_law(from_counts({{3, 10}, {4, 5}}), 1, 10), std::invalid_argument);
  EXPECT_THROW(fit_power_law(from_counts({{3, 10}, {4, 5}, {9, 1}}), 0, 10), std::invalid_argument);
  EXPECT_THROW(fit_power_law(from_counts({{3, 10}, {4, 5}, {9, 1}}), 8, 4), std::invalid_argument);
  EXPECT_NO_THROW(fit_power_law(from_counts({{3, 10}, {4, 5}, {9, 1}}), 1, 10));
}

TEST(LeastSquares, ExactLine) {
  EXPECT_NEAR(least_squares_slope({0, 1, 2, 3}, {1, -1, -3, -5}), -2.0, 1e-12);
  EXPECT_THROW(least_squares_slope({1}, {1}), std::invalid_argument);
}

TEST(Components, Examples) {
  const auto conn = components(path(6));
  EXPECT_EQ(conn.n_components, 1u);
  EXPECT_DOUBLE_EQ(conn.giant_fraction, 1.0);

  const auto two = components(triangles(2));
  EXPECT_EQ(two.n_components, 2u);
  EXPECT_DOUBLE_EQ(two.giant_fraction, 0.5);
  EXPECT_EQ(two.giant, (std::vector<NodeId>{0, 1, 2}));

  Graph tri = triangles(1);
  tri.add_node();
  const auto iso = components(tri);
  EXPECT_EQ(iso.isolated_nodes, 1u);
  EXPECT_EQ(iso.n_components, 2u);
  EXPECT_DOUBLE_EQ(iso.giant_fraction, 0.75);
}

TEST(Components, GiantFractionTimesLiveIsAtLeastOne) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GrowthParams p;
    p.m = 1;
    p.mu = 0.3;
    p.tau_j = 1;
    p.tau_l = 0;
    p.n_target = 1500;
    p.seed = seed;
    const Graph g = grow(p).graph;
    const auto rep = components(g);
    EXPECT_GE(rep.giant_fraction * static_cast<double>(g.live_count()), 1.0 - 1e-9);
    EXPECT_LE(rep.giant_fraction, 1.0);
  }
}

TEST(Components, NoChurnMeansOneComponent) {
  for (std::size_t m = 1; m <= 3; ++m)
    for (std::size_t tau_j = 0; tau_j <= 3; ++tau_j) {
      GrowthParams p;
      p.m = m;
      p.tau_j = tau_j;
      p.k_c = tau_j == 2 ? std::optional<std::size_t>(m + 8) : std::nullopt;
      p.n_target = 2000;
      p.seed = 31 * m + tau_j;
      const auto res = grow(p);
      if (res.trace.failed_stub_attachments != 0) continue;
      EXPECT_DOUBLE_EQ(components(res.graph).giant_fraction, 1.0) << "m " << m << " tau_j " << tau_j;
    }
}

TEST(MeanShortestPath, Examples) {
  Rng rng(1);
  EXPECT_DOUBLE_EQ(mean_shortest_path(path(3), 10, rng), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(mean_shortest_path(complete_graph(4), 10, rng), 1.0);
  EXPECT_DOUBLE_EQ(mean_shortest_path(star(3), 10, rng), 1.5);
  EXPECT_THROW(mean_shortest_path(path(3), 0, rng), std::invalid_argument);
  Graph lonely;
  lonely.add_node();
  EXPECT_THROW(mean_shortest_path(lonely, 10, rng), std::invalid_argument);
}

TEST(MeanShortestPath, OnlyInsideGiant) {
  Graph g = triangles(1);
  const NodeId a = g.add_node(), b = g.add_node();
  g.add_edge(a, b);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(mean_shortest_path(g, 10, rng), 1.0);
}

TEST(MeanShortestPath, GrowsSlowlyWithSize) {
  auto measure = [](std::size_t n) {
    GrowthParams p;
    p.m = 3;
    p.tau_j = 3;
    p.n_target = n;
    p.seed = 5;
    const Graph g = grow(p).graph;
    Rng rng = Rng(p.seed).split(1);
    return mean_shortest_path(g, 2000, rng);
  };
  const double small = measure(1000), large = measure(8000);
  EXPECT_GT(large, small - 0.2);
  EXPECT_LE(large - small, 2.0);
}

}  // namespace
}  // namespace adhocsf
