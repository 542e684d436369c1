#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "adhocsf/graph.hpp"
#include "adhocsf/rng.hpp"

namespace adhocsf {

struct Binning {
  enum class Kind { Raw, Log };
  Kind kind = Kind::Raw;
  double base = 1.3;

  static Binning raw() { return {}; }
  static Binning log(double base = 1.3) { return {Kind::Log, base}; }
};

/// Integer degrees k_lo..k_hi (inclusive) merged into one geometric bin.
struct DegreeBin {
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  std::size_t count = 0;
  double density = 0.0;  // count / (n_live * width)

  [[nodiscard]] double center() const { return std::sqrt(static_cast<double>(k_lo) * static_cast<double>(k_hi)); }
};

struct DegreeDistribution {
  std::map<std::size_t, std::size_t> counts;  // raw counts, always kept
  std::size_t n_live = 0;
  Binning binning;
  std::vector<DegreeBin> bins;  // filled for Binning::Kind::Log

  [[nodiscard]] double p(std::size_t k) const {
    if (n_live == 0) return 0.0;
    auto it = counts.find(k);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_live);
  }
};

/// Geometric bins [base^i, base^(i+1)) over k >= 1, skipping bins that hold
/// no integer. Degree 0 stays in the raw counts only.
inline std::vector<DegreeBin> log_bins(const std::map<std::size_t, std::size_t>& counts, std::size_t n_live,
                                       double base) {
  if (!(base > 1.0)) throw std::invalid_argument("log-binning base must exceed 1");
  std::vector<DegreeBin> bins;
  if (counts.empty() || n_live == 0) return bins;
  const std::size_t k_max = counts.rbegin()->first;
  double edge = 1.0;
  while (static_cast<double>(k_max) >= edge) {
    const double upper = edge * base;
    const auto lo = static_cast<std::size_t>(std::ceil(edge));
    const auto hi_excl = static_cast<std::size_t>(std::ceil(upper));
    edge = upper;
    if (hi_excl <= lo) continue;
    DegreeBin bin{lo, hi_excl - 1, 0, 0.0};
    for (auto it = counts.lower_bound(lo); it != counts.end() && it->first <= bin.k_hi; ++it) bin.count += it->second;
    const double width = static_cast<double>(bin.k_hi - bin.k_lo + 1);
    bin.density = static_cast<double>(bin.count) / (static_cast<double>(n_live) * width);
    if (bin.count > 0) bins.push_back(bin);
  }
  return bins;
}

inline DegreeDistribution degree_distribution(const Graph& g, Binning binning = Binning::raw()) {
  DegreeDistribution d;
  d.binning = binning;
  d.n_live = g.live_count();
  for (NodeId u : g.live_nodes()) ++d.counts[g.degree(u)];
  if (binning.kind == Binning::Kind::Log) d.bins = log_bins(d.counts, d.n_live, binning.base);
  return d;
}

/// Pointwise mean of normalized distributions.
inline std::map<std::size_t, double> average_distributions(const std::vector<DegreeDistribution>& ds) {
  std::map<std::size_t, double> mean;
  if (ds.empty()) return mean;
  for (const auto& d : ds)
    for (const auto& [k, c] : d.counts) mean[k] += d.p(k);
  for (auto& [k, v] : mean) v /= static_cast<double>(ds.size());
  return mean;
}

struct PowerLawFit {
  double gamma_hat = 0.0;
  std::size_t k_min = 1;
  std::size_t k_max = 1;
  double std_error = 0.0;
  std::size_t samples = 0;
};

namespace detail {

// E[ln k] and Var[ln k] under P(k) proportional to k^-gamma on [k_min, k_max].
struct LogMoments {
  double mean;
  double var;
};

inline LogMoments log_moments(double gamma, std::size_t k_min, std::size_t k_max) {
  // Rescale by the largest term to stay finite for any sign of gamma.
  const double ref = std::log(static_cast<double>(gamma >= 0 ? k_min : k_max));
  double z = 0, s1 = 0, s2 = 0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const double lk = std::log(static_cast<double>(k));
    const double w = std::exp(-gamma * (lk - ref));
    z += w;
    s1 += w * lk;
    s2 += w * lk * lk;
  }
  const double mean = s1 / z;
  return {mean, std::max(0.0, s2 / z - mean * mean)};
}

}  // namespace detail

/// Discrete maximum-likelihood power-law exponent on the window
/// [k_min, k_max], with the normalization summed over that window only.
/// The log-likelihood is concave in gamma, so the score root is bracketed
/// and found by bisection. std_error is the inverse square root of the
/// observed Fisher information.
inline PowerLawFit fit_power_law(const DegreeDistribution& d, std::size_t k_min, std::size_t k_max) {
  if (k_min < 1) throw std::invalid_argument("fit window must start at k >= 1");
  if (k_max < k_min) throw std::invalid_argument("empty fit window");
  std::size_t support = 0, n = 0;
  double sum_log = 0.0;
  for (auto it = d.counts.lower_bound(k_min); it != d.counts.end() && it->first <= k_max; ++it) {
    if (it->second == 0) continue;
    ++support;
    n += it->second;
    sum_log += static_cast<double>(it->second) * std::log(static_cast<double>(it->first));
  }
  if (support < 3)
    throw std::invalid_argument("fit window holds " + std::to_string(support) + " distinct degrees; need 3");

  const double target = sum_log / static_cast<double>(n);
  // score(gamma) / n = E_gamma[ln k] - mean(ln k); decreasing in gamma.
  auto score = [&](double g) { return detail::log_moments(g, k_min, k_max).mean - target; };
  double lo = -20.0, hi = 50.0;
  double gamma;
  if (score(lo) <= 0) {
    gamma = lo;
  } else if (score(hi) >= 0) {
    gamma = hi;
  } else {
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
      const double mid = 0.5 * (lo + hi);
      (score(mid) > 0 ? lo : hi) = mid;
    }
    gamma = 0.5 * (lo + hi);
  }
  const auto mom = detail::log_moments(gamma, k_min, k_max);
  PowerLawFit fit;
  fit.gamma_hat = gamma;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.samples = n;
  fit.std_error = mom.var > 0 ? 1.0 / std::sqrt(static_cast<double>(n) * mom.var)
                            : std::numeric_limits<double>::infinity();
  return fit;
}

/// Ordinary least-squares slope of y on x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs >= 2 paired points");
  const double nx = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nx;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / nx;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

struct ComponentReport {
  std::size_t n_components = 0;
  double giant_fraction = 0.0;
  std::size_t isolated_nodes = 0;
  std::vector<NodeId> giant;  // ascending ids of the largest component
};

/// BFS sweep over live nodes in ascending id order; ties for the largest
/// component go to the one containing the smallest id.
inline ComponentReport components(const Graph& g) {
  ComponentReport rep;
  std::vector<char> seen(g.id_bound(), 0);
  std::vector<NodeId> queue, best;
  for (NodeId s : g.sorted_live_nodes()) {
    if (seen[s]) continue;
    ++rep.n_components;
    if (g.degree(s) == 0) ++rep.isolated_nodes;
    queue.assign(1, s);
    seen[s] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId v : g.neighbors(queue[head]))
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
    if (queue.size() > best.size()) best = queue;
  }
  std::sort(best.begin(), best.end());
  rep.giant = std::move(best);
  if (g.live_count() > 0)
    rep.giant_fraction = static_cast<double>(rep.giant.size()) / static_cast<double>(g.live_count());
  return rep;
}

/// Mean hop distance inside the giant component. Exact over all pairs when
/// the graph has at most 1000 live nodes, otherwise averaged over
/// `sample_pairs` uniformly drawn distinct pairs.
template <std::uniform_random_bit_generator Urbg>
double mean_shortest_path(const Graph& g, std::size_t sample_pairs, Urbg& rng) {
  if (sample_pairs < 1) throw std::invalid_argument("sample_pairs must be >= 1");
  const auto giant = components(g).giant;
  if (giant.size() < 2) throw std::invalid_argument("giant component has fewer than 2 nodes");
  BfsWorkspace bfs;
  double total = 0.0;
  std::size_t pairs = 0;
  if (g.live_count() <= 1000) {
    for (std::size_t i = 0; i < giant.size(); ++i) {
      const auto& dist = bfs.distances(g, giant[i]);
      for (std::size_t j = i + 1; j < giant.size(); ++j) {
        total += dist[giant[j]];
        ++pairs;
      }
    }
  } else {
    for (std::size_t s = 0; s < sample_pairs; ++s) {
      const std::size_t a = uniform_index(rng, giant.size());
      std::size_t b = uniform_index(rng, giant.size() - 1);
      if (b >= a) ++b;
      total += bfs.distances(g, giant[a])[giant[b]];
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace adhocsf
