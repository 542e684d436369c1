#pragma once

// Query sampling, paired FL/NF/RW evaluation and the parameter-sweep
// orchestrator shared by the command-line tool and the test suites.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "adhocsf/csv.hpp"
#include "adhocsf/edge_list.hpp"
#include "adhocsf/graph.hpp"
#include "adhocsf/growth.hpp"
#include "adhocsf/metrics.hpp"
#include "adhocsf/rng.hpp"
#include "adhocsf/search.hpp"

namespace adhocsf {

// Stream tags for Rng::split.
inline constexpr std::uint64_t kSearchStream = 0x5ea7c4;
inline constexpr std::uint64_t kPathStream = 0x9a7;

struct Query {
  NodeId source = kNoNode;
  NodeId target = kNoNode;
};

/// Draws `count` (source, target) pairs uniformly from the giant component,
/// source != target. A fixed source or target replaces the corresponding draw.
template <std::uniform_random_bit_generator Urbg>
std::vector<Query> sample_queries(const Graph& g, std::size_t count, Urbg& rng,
                                  std::optional<NodeId> fixed_source = std::nullopt,
                                  std::optional<NodeId> fixed_target = std::nullopt) {
  const auto giant = components(g).giant;
  if (fixed_source && !g.is_live(*fixed_source)) throw GraphError("source " + std::to_string(*fixed_source) + " is not live");
  if (fixed_target && !g.is_live(*fixed_target)) throw GraphError("target " + std::to_string(*fixed_target) + " is not live");
  if (fixed_source && fixed_target && *fixed_source == *fixed_target)
    throw std::invalid_argument("source and target coincide");
  if (giant.size() < 2 && !(fixed_source && fixed_target))
    throw std::invalid_argument("giant component has fewer than 2 nodes; cannot sample queries");
  std::vector<Query> qs;
  qs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Query q;
    q.source = fixed_source ? *fixed_source : giant[uniform_index(rng, giant.size())];
    if (fixed_target) {
      q.target = *fixed_target;
      if (q.target == q.source) {  // only possible with a sampled source
        --i;
        continue;
      }
    } else {
      do q.target = giant[uniform_index(rng, giant.size())];
      while (q.target == q.source);
    }
    qs.push_back(q);
  }
  return qs;
}

struct SearchPlan {
  std::vector<Algorithm> algos{Algorithm::FL, Algorithm::NF, Algorithm::RW};
  std::vector<std::size_t> ttls{1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t m = 1;  // NF fanout
  // When set, an algorithm drops out of later TTLs once its mean coverage
  // exceeds this fraction of the other live nodes.
  std::optional<double> stop_coverage;
};

struct QueryRow {
  Algorithm algo = Algorithm::FL;
  std::size_t ttl = 0;
  std::size_t query_id = 0;
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  std::size_t covered = 0;
  std::size_t messages = 0;
  bool success = false;
  std::optional<std::size_t> hops_to_target;
  std::size_t budget = 0;  // ttl for FL/NF, paired NF message count for RW
};

/// Runs every (ttl, algorithm, query) combination. Each (ttl, query) pair
/// owns a stream split from `base`, so results do not depend on which other
/// algorithms or TTLs are requested. RW always takes its step budget from
/// the NF run of the same (ttl, query), computed whether or not NF rows are
/// requested.
inline std::vector<QueryRow> run_queries(const Graph& g, const std::vector<Query>& queries, const SearchPlan& plan,
                                         const Rng& base) {
  const bool want_nf = std::find(plan.algos.begin(), plan.algos.end(), Algorithm::NF) != plan.algos.end();
  const bool want_rw = std::find(plan.algos.begin(), plan.algos.end(), Algorithm::RW) != plan.algos.end();
  const double others = g.live_count() > 0 ? static_cast<double>(g.live_count() - 1) : 0.0;
  std::map<Algorithm, bool> done;
  std::vector<QueryRow> rows;
  std::vector<SearchOutcome> nf(queries.size());

  for (std::size_t ttl : plan.ttls) {
    if (want_nf || want_rw) {
      for (std::size_t q = 0; q < queries.size(); ++q) {
        Rng r = base.split(hash_seed(ttl, {q, 1}));
        nf[q] = nf_search(g, queries[q].source, queries[q].target, ttl, plan.m, r);
      }
    }
    for (Algorithm a : plan.algos) {
      if (done[a]) continue;
      double covered_sum = 0.0;
      for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto& qu = queries[q];
        SearchOutcome out;
        std::size_t budget = ttl;
        switch (a) {
          case Algorithm::FL: {
            Rng r = base.split(hash_seed(ttl, {q, 0}));
            out = flood_search(g, qu.source, qu.target, ttl, r);
            break;
          }
          case Algorithm::NF:
            out = nf[q];
            break;
          case Algorithm::RW: {
            budget = nf[q].messages;
            Rng r = base.split(hash_seed(ttl, {q, 2}));
            out = rw_search(g, qu.source, qu.target, budget, r);
            break;
          }
        }
        rows.push_back({a, ttl, q, qu.source, qu.target, out.covered.size(), out.messages, out.success,
                        out.hops_to_target, budget});
        covered_sum += static_cast<double>(out.covered.size());
      }
      if (plan.stop_coverage && !queries.empty() &&
          covered_sum / static_cast<double>(queries.size()) > *plan.stop_coverage * others)
        done[a] = true;
    }
  }
  return rows;
}

struct SearchSummary {
  Algorithm algo = Algorithm::FL;
  std::size_t ttl = 0;
  std::size_t queries = 0;
  double mean_covered = 0.0;
  double success_rate = 0.0;
  double mean_messages = 0.0;
  double mean_budget = 0.0;
};

/// Per-(algo, ttl) means, in first-appearance order.
inline std::vector<SearchSummary> summarize(const std::vector<QueryRow>& rows) {
  std::vector<SearchSummary> out;
  std::map<std::pair<Algorithm, std::size_t>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.algo, r.ttl}, out.size());
    if (fresh) out.push_back({r.algo, r.ttl});
    auto& s = out[it->second];
    ++s.queries;
    s.mean_covered += static_cast<double>(r.covered);
    s.success_rate += r.success ? 1.0 : 0.0;
    s.mean_messages += static_cast<double>(r.messages);
    s.mean_budget += static_cast<double>(r.budget);
  }
  for (auto& s : out) {
    const double n = static_cast<double>(s.queries);
    s.mean_covered /= n;
    s.success_rate /= n;
    s.mean_messages /= n;
    s.mean_budget /= n;
  }
  return out;
}

inline constexpr std::string_view kQueryHeader =
    "algo,ttl,query_id,source,target,covered,messages,success,hops_to_target,budget";
inline constexpr std::string_view kSummaryHeader = "algo,ttl,queries,mean_covered,success_rate,mean_messages,mean_budget";

inline std::string query_csv(const std::vector<QueryRow>& rows, const std::string& provenance) {
  std::ostringstream out;
  out << "# " << provenance << '\n' << kQueryHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.algo) << ',' << r.ttl << ',' << r.query_id << ',' << r.source << ',';
    if (r.target != kNoNode) out << r.target;
    out << ',' << r.covered << ',' << r.messages << ',' << (r.success ? 1 : 0) << ',';
    if (r.hops_to_target) out << *r.hops_to_target;
    out << ',' << r.budget << '\n';
  }
  return out.str();
}

inline std::string summary_csv(const std::vector<SearchSummary>& rows, const std::string& provenance) {
  std::ostringstream out;
  out << "# " << provenance << '\n' << kSummaryHeader << '\n';
  for (const auto& s : rows)
    out << to_string(s.algo) << ',' << s.ttl << ',' << s.queries << ',' << format_double(s.mean_covered) << ','
        << format_double(s.success_rate) << ',' << format_double(s.mean_messages) << ','
        << format_double(s.mean_budget) << '\n';
  return out.str();
}

inline std::string growth_provenance(const GrowthParams& p) {
  std::ostringstream out;
  out << "adhocsf " << kVersion << " seed=" << p.seed << " mu=" << format_double(p.mu) << " tau_j=" << p.tau_j
      << " tau_l=" << p.tau_l << " kc=" << format_cutoff(p.k_c) << " m=" << p.m << " n=" << p.n_target;
  return out.str();
}

/// Fit window used by default: [m, k_c - 1] under a hard cutoff (the k_c
/// spike is excluded), [m, max degree] otherwise.
inline std::pair<std::size_t, std::size_t> default_fit_window(const Graph& g, std::size_t m,
                                                              std::optional<std::size_t> k_c) {
  const std::size_t lo = std::max<std::size_t>(1, m);
  const std::size_t hi = k_c ? *k_c - 1 : std::max(g.max_degree(), lo);
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Sweep

struct GridPoint {
  double mu = 0.0;
  std::size_t tau_j = 0;
  std::size_t tau_l = 0;
  std::optional<std::size_t> k_c;
  std::size_t m = 1;
};

struct ExperimentSpec {
  std::size_t n = 10000;
  std::vector<double> mu{0.0};
  std::vector<std::size_t> tau_j{1};
  std::vector<std::size_t> tau_l{0};
  std::vector<std::optional<std::size_t>> k_c{std::nullopt};
  std::vector<std::size_t> m{1};
  std::size_t realizations = 5;
  std::uint64_t base_seed = 1;

  std::vector<Algorithm> algos;  // empty: growth metrics only
  std::vector<std::size_t> ttls{1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t queries = 1000;
  std::optional<double> stop_coverage = 0.99;  // cleared when ttls are given explicitly

  std::optional<std::size_t> fit_k_min;
  std::optional<std::size_t> fit_k_max;

  std::filesystem::path output_dir = "sweep-out";
  bool write_graphs = false;

  /// Cartesian product in mu, tau_j, tau_l, k_c, m order (m fastest).
  [[nodiscard]] std::vector<GridPoint> grid() const {
    std::vector<GridPoint> pts;
    for (double a : mu)
      for (auto tj : tau_j)
        for (auto tl : tau_l)
          for (auto kc : k_c)
            for (auto mm : m) pts.push_back({a, tj, tl, kc, mm});
    return pts;
  }

  static ExperimentSpec from_json(const nlohmann::json& j);
};

namespace detail {

template <class T>
std::vector<T> as_list(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

inline std::optional<std::size_t> parse_cutoff(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    if (v.get<std::string>() == "none") return std::nullopt;
    throw std::invalid_argument("kc must be an integer, null or \"none\"");
  }
  return v.get<std::size_t>();
}

}  // namespace detail

inline ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known{"n",   "mu",         "tau_j",      "tau_l",  "kc",
                                              "m",   "realizations", "base_seed", "search", "fit",
                                              "output_dir", "write_graphs", "$schema", "description"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown sweep key '" + key + "'");

  ExperimentSpec s;
  if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
  if (j.contains("mu")) s.mu = detail::as_list<double>(j, "mu");
  if (j.contains("tau_j")) s.tau_j = detail::as_list<std::size_t>(j, "tau_j");
  if (j.contains("tau_l")) s.tau_l = detail::as_list<std::size_t>(j, "tau_l");
  if (j.contains("m")) s.m = detail::as_list<std::size_t>(j, "m");
  if (j.contains("kc")) {
    s.k_c.clear();
    const auto& v = j.at("kc");
    if (v.is_array())
      for (const auto& e : v) s.k_c.push_back(detail::parse_cutoff(e));
    else
      s.k_c.push_back(detail::parse_cutoff(v));
  }
  if (j.contains("realizations")) s.realizations = j.at("realizations").get<std::size_t>();
  if (j.contains("base_seed")) s.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("search")) {
    const auto& sj = j.at("search");
    if (sj.contains("algos"))
      for (const auto& a : sj.at("algos")) s.algos.push_back(parse_algorithm(a.get<std::string>()));
    if (sj.contains("ttl")) {
      s.ttls = detail::as_list<std::size_t>(sj, "ttl");
      s.stop_coverage.reset();
    }
    if (sj.contains("queries")) s.queries = sj.at("queries").get<std::size_t>();
    if (sj.contains("stop_coverage")) {
      if (sj.at("stop_coverage").is_null())
        s.stop_coverage.reset();
      else
        s.stop_coverage = sj.at("stop_coverage").get<double>();
    }
  }
  if (j.contains("fit")) {
    const auto& fj = j.at("fit");
    if (fj.contains("k_min") && !fj.at("k_min").is_null()) s.fit_k_min = fj.at("k_min").get<std::size_t>();
    if (fj.contains("k_max") && !fj.at("k_max").is_null()) s.fit_k_max = fj.at("k_max").get<std::size_t>();
  }
  if (j.contains("output_dir")) s.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("write_graphs")) s.write_graphs = j.at("write_graphs").get<bool>();

  if (s.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (s.mu.empty() || s.tau_j.empty() || s.tau_l.empty() || s.k_c.empty() || s.m.empty())
    throw std::invalid_argument("every parameter range needs at least one value");
  if (!s.algos.empty() && s.queries < 1) throw std::invalid_argument("search.queries must be >= 1");
  return s;
}

/// Seed of one run: a hash of the base seed, the parameter tuple, the
/// target size and the realization index.
inline std::uint64_t run_seed(std::uint64_t base_seed, const GridPoint& p, std::size_t n, std::size_t realization) {
  return hash_seed(base_seed, {std::bit_cast<std::uint64_t>(p.mu), p.tau_j, p.tau_l,
                               p.k_c ? *p.k_c : std::numeric_limits<std::uint64_t>::max(), p.m, n, realization});
}

struct RunResult {
  GridPoint point;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double gamma_hat = std::numeric_limits<double>::quiet_NaN();
  double giant_fraction = 0.0;
  std::vector<SearchSummary> search;
};

inline GrowthParams growth_params(const GridPoint& p, std::size_t n, std::uint64_t seed) {
  GrowthParams g;
  g.mu = p.mu;
  g.tau_j = p.tau_j;
  g.tau_l = p.tau_l;
  g.k_c = p.k_c;
  g.m = p.m;
  g.n_target = n;
  g.seed = seed;
  return g;
}

inline std::string graph_file_name(const GridPoint& p, std::size_t realization) {
  std::ostringstream name;
  name << "mu" << format_double(p.mu) << "_tj" << p.tau_j << "_tl" << p.tau_l << "_kc" << format_cutoff(p.k_c)
       << "_m" << p.m << "_r" << realization << ".edges";
  return name.str();
}

/// One realization at one grid point: grow, fit, components, searches.
inline RunResult run_point(const ExperimentSpec& spec, const GridPoint& p, std::size_t realization) {
  RunResult res;
  res.point = p;
  res.realization = realization;
  res.seed = run_seed(spec.base_seed, p, spec.n, realization);
  try {
    const auto params = growth_params(p, spec.n, res.seed);
    auto grown = grow(params);
    const Graph& g = grown.graph;

    auto [lo, hi] = default_fit_window(g, p.m, p.k_c);
    if (spec.fit_k_min) lo = *spec.fit_k_min;
    if (spec.fit_k_max) hi = *spec.fit_k_max;
    try {
      res.gamma_hat = fit_power_law(degree_distribution(g), lo, hi).gamma_hat;
    } catch (const std::invalid_argument&) {
      // too few distinct degrees in the window; gamma_hat stays NaN
    }
    res.giant_fraction = components(g).giant_fraction;

    if (!spec.algos.empty()) {
      Rng search_rng = Rng(res.seed).split(kSearchStream);
      const auto queries = sample_queries(g, spec.queries, search_rng);
      SearchPlan plan{spec.algos, spec.ttls, p.m, spec.stop_coverage};
      res.search = summarize(run_queries(g, queries, plan, search_rng));
    }
    if (spec.write_graphs) {
      std::ostringstream text;
      write_edge_list(text, g, {growth_provenance(params)});
      write_file_atomic(spec.output_dir / "graphs" / graph_file_name(p, realization), text.str());
    }
    res.ok = true;
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

/// Worker count: ADHOCSF_WORKERS when set to a positive integer, else the
/// hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("ADHOCSF_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct SweepReport {
  std::vector<RunResult> runs;  // grid order, realization fastest
  std::size_t failures = 0;
};

/// Executes the full grid x realizations on a pool of `workers` threads.
/// Each run owns its graph and RNG; results land in a preallocated slot so
/// the output order is independent of scheduling. Failed runs are logged
/// to `log` and kept in the report with ok = false.
inline SweepReport run_sweep(const ExperimentSpec& spec, std::size_t workers, std::ostream& log = std::cerr) {
  struct Job {
    GridPoint point;
    std::size_t realization;
  };
  std::vector<Job> jobs;
  for (const auto& p : spec.grid())
    for (std::size_t r = 0; r < spec.realizations; ++r) jobs.push_back({p, r});

  SweepReport report;
  report.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      report.runs[i] = run_point(spec, jobs[i].point, jobs[i].realization);
      if (!report.runs[i].ok) {
        std::lock_guard lock(log_mutex);
        log << "run failed (" << graph_file_name(jobs[i].point, jobs[i].realization)
            << ", seed=" << report.runs[i].seed << "): " << report.runs[i].error << '\n';
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& r : report.runs) report.failures += r.ok ? 0 : 1;
  return report;
}

inline constexpr std::string_view kSweepHeader =
    "mu,tau_j,tau_l,kc,m,realization,seed,gamma_hat,giant_fraction,algo,ttl,mean_covered,success_rate";

inline std::string sweep_csv(const ExperimentSpec& spec, const SweepReport& report) {
  std::ostringstream out;
  out << "# adhocsf " << kVersion << " sweep base_seed=" << spec.base_seed << " n=" << spec.n
      << " realizations=" << spec.realizations << " queries=" << spec.queries << '\n'
      << kSweepHeader << '\n';
  for (const auto& r : report.runs) {
    if (!r.ok) continue;
    std::ostringstream prefix;
    prefix << format_double(r.point.mu) << ',' << r.point.tau_j << ',' << r.point.tau_l << ','
           << format_cutoff(r.point.k_c) << ',' << r.point.m << ',' << r.realization << ',' << r.seed << ','
           << format_double(r.gamma_hat) << ',' << format_double(r.giant_fraction) << ',';
    if (r.search.empty()) {
      out << prefix.str() << ",,,\n";
      continue;
    }
    for (const auto& s : r.search)
      out << prefix.str() << to_string(s.algo) << ',' << s.ttl << ',' << format_double(s.mean_covered) << ','
          << format_double(s.success_rate) << '\n';
  }
  return out.str();
}

}  // namespace adhocsf
