// adhocsf: grow local-information scale-free overlays, run FL/NF/RW
// searches on them, and sweep parameter grids.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adhocsf/analytic.hpp"
#include "adhocsf/csv.hpp"
#include "adhocsf/edge_list.hpp"
#include "adhocsf/experiment.hpp"
#include "adhocsf/growth.hpp"
#include "adhocsf/metrics.hpp"
#include "adhocsf/search.hpp"

namespace fs = std::filesystem;
using namespace adhocsf;

namespace {

constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::size_t> parse_cutoff_flag(const std::string& text) {
  if (text == "none" || text.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw UsageError("--kc expects an integer or 'none', got '" + text + "'");
  }
}

// "1..8", "1,2,4" or "3".
std::vector<std::size_t> parse_ttl_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = std::stoull(text.substr(0, dots));
    const auto hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty ttl range " + text);
    for (auto t = lo; t <= hi; ++t) out.push_back(t);
    return out;
  }
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoull(tok));
  if (out.empty()) throw UsageError("empty ttl list");
  return out;
}

std::vector<Algorithm> parse_algo_list(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(parse_algorithm(tok));
  if (out.empty()) throw UsageError("empty algorithm list");
  return out;
}

// Path next to `base` with its extension replaced by `suffix`.
fs::path sibling(const fs::path& base, const std::string& suffix) {
  auto p = base;
  p.replace_extension();
  p += suffix;
  return p;
}

EdgeListRecord load_record(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_edge_list(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Graph load_graph(const fs::path& path, const EdgeListRecord& rec) {
  try {
    return build_graph(rec);
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

// Looks for "key=<int>" in the provenance comments of an edge list.
std::optional<std::size_t> provenance_value(const EdgeListRecord& rec, const std::string& key) {
  const std::regex pattern("(^|\\s)" + key + "=([0-9]+)(\\s|$)");
  for (const auto& c : rec.comments) {
    std::smatch match;
    if (std::regex_search(c, match, pattern)) return std::stoull(match[2].str());
  }
  return std::nullopt;
}

std::string degdist_csv(const DegreeDistribution& d, const std::string& provenance) {
  std::ostringstream out;
  out << "# " << provenance << '\n' << "k,count,p_k\n";
  if (d.binning.kind == Binning::Kind::Log) {
    for (const auto& b : d.bins) out << format_double(b.center()) << ',' << b.count << ',' << format_double(b.density) << '\n';
  } else {
    for (const auto& [k, c] : d.counts) out << k << ',' << c << ',' << format_double(d.p(k)) << '\n';
  }
  return out.str();
}

void emit(const std::optional<fs::path>& path, const std::string& text) {
  if (path)
    write_file_atomic(*path, text);
  else
    std::cout << text;
}

// ---------------------------------------------------------------------------

struct GrowArgs {
  std::size_t n = 1000;
  std::size_t m = 1;
  double mu = 0.0;
  std::size_t tau_j = 1;
  std::size_t tau_l = 0;
  std::string kc = "none";
  std::uint64_t seed = 1;
  std::string out;
  bool audit = false;
};

int run_grow(const GrowArgs& a) {
  GrowthParams p;
  p.n_target = a.n;
  p.m = a.m;
  p.mu = a.mu;
  p.tau_j = a.tau_j;
  p.tau_l = a.tau_l;
  p.k_c = parse_cutoff_flag(a.kc);
  p.seed = a.seed;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto result = grow(p, a.audit);
  const auto prov = growth_provenance(p);

  std::ostringstream edges;
  write_edge_list(edges, result.graph, {prov});
  if (a.out.empty()) {
    std::cout << edges.str();
    return 0;
  }
  const fs::path out = a.out;
  write_file_atomic(out, edges.str());

  const auto& t = result.trace;
  std::ostringstream trace;
  trace << "# " << prov << '\n'
        << "joins,leaves,failed_stub_attachments,rewires_attempted,rewires_completed,live,edges\n"
        << t.joins << ',' << t.leaves << ',' << t.failed_stub_attachments << ',' << t.rewires_attempted << ','
        << t.rewires_completed << ',' << result.graph.live_count() << ',' << result.graph.edge_count() << '\n';
  write_file_atomic(sibling(out, ".trace.csv"), trace.str());
  write_file_atomic(sibling(out, ".degdist.csv"), degdist_csv(degree_distribution(result.graph), prov));
  std::cerr << "grew " << result.graph.live_count() << " nodes, " << result.graph.edge_count() << " edges ("
            << t.joins << " joins, " << t.leaves << " leaves, " << t.failed_stub_attachments
            << " short joins)\n";
  return 0;
}

struct SearchArgs {
  std::string graph;
  std::string algos = "FL,NF,RW";
  std::string ttl = "1..8";
  std::size_t queries = 1000;
  std::optional<std::size_t> m;
  std::uint64_t seed = 1;
  std::optional<NodeId> source;
  std::optional<NodeId> target;
  std::string out;
};

int run_search(const SearchArgs& a) {
  const auto rec = load_record(a.graph);
  const Graph g = load_graph(a.graph, rec);
  SearchPlan plan;
  plan.algos = parse_algo_list(a.algos);
  plan.ttls = parse_ttl_list(a.ttl);
  plan.m = a.m ? *a.m : provenance_value(rec, "m").value_or(1);
  if (plan.m < 1) throw UsageError("--m must be >= 1");

  Rng rng = Rng(a.seed).split(kSearchStream);
  const auto queries = sample_queries(g, a.queries, rng, a.source, a.target);
  const auto rows = run_queries(g, queries, plan, rng);
  const auto summary = summarize(rows);

  std::ostringstream prov;
  prov << "adhocsf " << kVersion << " search graph=" << fs::path(a.graph).filename().string() << " seed=" << a.seed
       << " m=" << plan.m << " queries=" << a.queries << " ttl=" << a.ttl << " algos=" << a.algos;
  if (a.out.empty()) {
    std::cout << summary_csv(summary, prov.str());
    return 0;
  }
  write_file_atomic(a.out, query_csv(rows, prov.str()));
  write_file_atomic(sibling(a.out, ".summary.csv"), summary_csv(summary, prov.str()));
  return 0;
}

struct DegdistArgs {
  std::string graph;
  std::optional<double> log_base;
  std::optional<std::size_t> fit_min;
  std::optional<std::size_t> fit_max;
  std::string out;
};

int run_degdist(const DegdistArgs& a) {
  const auto rec = load_record(a.graph);
  const Graph g = load_graph(a.graph, rec);
  const Binning binning = a.log_base ? Binning::log(*a.log_base) : Binning::raw();
  const auto d = degree_distribution(g, binning);
  const std::string prov = "adhocsf " + std::string(kVersion) + " degdist graph=" + fs::path(a.graph).filename().string();
  if (a.out.empty()) {
    std::cout << degdist_csv(d, prov);
    return 0;
  }
  write_file_atomic(a.out, degdist_csv(d, prov));

  const auto m = provenance_value(rec, "m").value_or(1);
  const auto kc = provenance_value(rec, "kc");
  auto [lo, hi] = default_fit_window(g, m, kc);
  if (a.fit_min) lo = *a.fit_min;
  if (a.fit_max) hi = *a.fit_max;
  std::ostringstream fit;
  fit << "# " << prov << '\n' << "gamma_hat,stderr,k_min,k_max\n";
  try {
    const auto f = fit_power_law(d, lo, hi);
    fit << format_double(f.gamma_hat) << ',' << format_double(f.std_error) << ',' << f.k_min << ',' << f.k_max << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "power-law fit skipped: " << e.what() << '\n';
    fit << "nan,nan," << lo << ',' << hi << '\n';
  }
  write_file_atomic(sibling(a.out, ".fit.csv"), fit.str());

  const auto comp = components(g);
  std::ostringstream cc;
  cc << "# " << prov << '\n'
     << "n_components,giant_fraction,isolated\n"
     << comp.n_components << ',' << format_double(comp.giant_fraction) << ',' << comp.isolated_nodes << '\n';
  write_file_atomic(sibling(a.out, ".components.csv"), cc.str());
  return 0;
}

struct AnalyticArgs {
  std::size_t m = 1;
  std::size_t kc = 10;
  double tol = 1e-12;
  std::string out;
};

int run_analytic(const AnalyticArgs& a) {
  if (a.kc <= a.m) throw UsageError("--kc must exceed --m");
  const auto sol = solve_master_equation(a.m, a.kc, a.tol);
  std::ostringstream csv;
  csv << "# adhocsf " << kVersion << " analytic m=" << a.m << " kc=" << a.kc << " tol=" << format_double(a.tol) << '\n'
      << "k,n_k\n";
  for (std::size_t k = sol.m; k <= sol.k_c; ++k) csv << k << ',' << format_double(sol.n_k(k)) << '\n';
  csv << "# nu=" << format_double(sol.nu) << " bulk_exponent=" << format_double(sol.bulk_exponent) << '\n';
  emit(a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out), csv.str());
  return 0;
}

struct SweepArgs {
  std::string config;
  std::optional<std::size_t> workers;
  std::string output_dir;
};

int run_sweep_cmd(const SweepArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw std::runtime_error("cannot open " + a.config);
  ExperimentSpec spec;
  try {
    spec = ExperimentSpec::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(a.config + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(a.config + ": " + e.what());
  }
  if (!a.output_dir.empty()) spec.output_dir = a.output_dir;
  const auto workers = a.workers ? *a.workers : default_workers();
  const auto report = run_sweep(spec, workers);
  const auto path = spec.output_dir / "sweep.csv";
  write_file_atomic(path, sweep_csv(spec, report));
  std::cerr << "sweep: " << report.runs.size() - report.failures << " runs ok, " << report.failures
            << " failed; wrote " << path.string() << '\n';
  return report.failures == 0 ? 0 : 1;
}

struct AuditArgs {
  std::string graph;
  std::string kc;
};

int run_audit(const AuditArgs& a) {
  std::ifstream in(a.graph);
  if (!in) throw std::runtime_error("cannot open " + a.graph);
  EdgeListRecord rec;
  try {
    rec = parse_edge_list(in);
  } catch (const ParseError& e) {
    std::cout << e.what() << "\nFAIL: unreadable edge list\n";
    return 1;
  }
  auto findings = audit_edge_list(rec);
  std::optional<std::size_t> kc = a.kc.empty() ? provenance_value(rec, "kc") : parse_cutoff_flag(a.kc);
  std::size_t live = 0, edges = 0;
  try {
    const Graph g = build_graph(rec);
    for (auto& p : g.audit()) findings.push_back(std::move(p));
    if (kc)
      for (NodeId u : g.sorted_live_nodes())
        if (g.degree(u) > *kc)
          findings.push_back("node " + std::to_string(u) + " has degree " + std::to_string(g.degree(u)) +
                             " above cutoff " + std::to_string(*kc));
    live = g.live_count();
    edges = g.edge_count();
  } catch (const ParseError& e) {
    if (findings.empty()) findings.push_back(e.what());
  }
  for (const auto& f : findings) std::cout << f << '\n';
  std::cout << (findings.empty() ? "OK" : "FAIL") << ": " << live << " nodes, " << edges << " edges, "
            << findings.size() << " finding(s)\n";
  return findings.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-information scale-free overlay growth and search toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GrowArgs ga;
  auto* grow_cmd = app.add_subcommand("grow", "grow a network and write its edge list");
  grow_cmd->add_option("--n", ga.n, "final live node count")->capture_default_str();
  grow_cmd->add_option("--m", ga.m, "links per joining node")->capture_default_str();
  grow_cmd->add_option("--mu", ga.mu, "deletion probability per step, [0,1)")->capture_default_str();
  grow_cmd->add_option("--tau-j", ga.tau_j, "join horizon (hops)")->capture_default_str();
  grow_cmd->add_option("--tau-l", ga.tau_l, "leave/rewire horizon (hops)")->capture_default_str();
  grow_cmd->add_option("--kc", ga.kc, "hard degree cutoff or 'none'")->capture_default_str();
  grow_cmd->add_option("--seed", ga.seed, "RNG seed")->capture_default_str();
  grow_cmd->add_option("--out", ga.out, "edge-list path; trace and degree CSVs are written beside it");
  grow_cmd->add_flag("--audit", ga.audit, "check invariants after every join and leave");

  SearchArgs sa;
  auto* search_cmd = app.add_subcommand("search", "run FL/NF/RW queries on an edge list");
  search_cmd->add_option("--graph", sa.graph, "edge-list file")->required();
  search_cmd->add_option("--algo", sa.algos, "comma list of FL,NF,RW")->capture_default_str();
  search_cmd->add_option("--ttl", sa.ttl, "TTL list: 'a..b' or comma list")->capture_default_str();
  search_cmd->add_option("--queries", sa.queries, "queries per TTL")->capture_default_str();
  search_cmd->add_option("--m", sa.m, "NF fanout (default: m from the graph header, else 1)");
  search_cmd->add_option("--seed", sa.seed, "RNG seed")->capture_default_str();
  search_cmd->add_option("--source", sa.source, "fixed source node");
  search_cmd->add_option("--target", sa.target, "fixed target node");
  search_cmd->add_option("--out", sa.out, "per-query CSV; a .summary.csv is written beside it");

  DegdistArgs da;
  auto* deg_cmd = app.add_subcommand("degdist", "degree distribution, power-law fit and components");
  deg_cmd->add_option("--graph", da.graph, "edge-list file")->required();
  deg_cmd->add_option("--log-bin", da.log_base, "geometric bin base (e.g. 1.3)");
  deg_cmd->add_option("--fit-min", da.fit_min, "fit window lower degree");
  deg_cmd->add_option("--fit-max", da.fit_max, "fit window upper degree");
  deg_cmd->add_option("--out", da.out, "distribution CSV; .fit.csv and .components.csv beside it");

  AnalyticArgs aa;
  auto* an_cmd = app.add_subcommand("analytic", "solve the cutoff master equation");
  an_cmd->add_option("--m", aa.m)->capture_default_str();
  an_cmd->add_option("--kc", aa.kc)->capture_default_str();
  an_cmd->add_option("--tol", aa.tol)->capture_default_str();
  an_cmd->add_option("--out", aa.out, "CSV path (default stdout)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid from a JSON config");
  sweep_cmd->add_option("--config", sw.config, "sweep JSON")->required();
  sweep_cmd->add_option("--workers", sw.workers, "worker threads (default: $ADHOCSF_WORKERS or #cores)");
  sweep_cmd->add_option("--output-dir", sw.output_dir, "override output_dir from the config");

  AuditArgs au;
  auto* audit_cmd = app.add_subcommand("audit", "check an edge-list file for invariant violations");
  audit_cmd->add_option("--graph", au.graph, "edge-list file")->required();
  audit_cmd->add_option("--kc", au.kc, "degree bound to enforce (default: kc from header)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grow_cmd) return run_grow(ga);
    if (*search_cmd) return run_search(sa);
    if (*deg_cmd) return run_degdist(da);
    if (*an_cmd) return run_analytic(aa);
    if (*sweep_cmd) return run_sweep_cmd(sw);
    if (*audit_cmd) return run_audit(au);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
