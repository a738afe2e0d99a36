// edgecount: command-line front end for graph-based two-sample tests.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 data error,
// 4 internal inconsistency, 1 anything else.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgecount/construct.hpp"
#include "edgecount/data_io.hpp"
#include "edgecount/digest.hpp"
#include "edgecount/edge_tests.hpp"
#include "edgecount/errors.hpp"
#include "edgecount/experiments.hpp"
#include "edgecount/graph_io.hpp"
#include "edgecount/json_io.hpp"
#include "edgecount/stein.hpp"

#ifndef EDGECOUNT_VERSION
#define EDGECOUNT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace edgecount;

namespace {

const auto g_start = std::chrono::steady_clock::now();

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Write to a sibling temporary file, then rename over the target.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw DataError("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

struct Manifest {
  std::string subcommand;
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  int workers = 1;

  void write(const fs::path& path) const {
    Json j;
    j["tool"] = "edgecount";
    j["version"] = EDGECOUNT_VERSION;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["workers"] = workers;
    j["inputs"] = Json::array();
    for (const auto& p : inputs) j["inputs"].push_back(Json{{"path", p.string()}, {"sha256", sha256_file(p)}});
    j["outputs"] = Json::array();
    for (const auto& p : outputs) j["outputs"].push_back(Json{{"path", p.string()}, {"sha256", sha256_file(p)}});
    j["timestamp"] = utc_timestamp();
    j["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start).count();
    write_atomic(path, j.dump(2) + "\n");
  }
};

fs::path manifest_path_for(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

// Emits text to --out (with a manifest next to it) or to stdout.
void emit(const std::string& text, const std::string& out, Manifest& manifest) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  write_atomic(out, text);
  manifest.outputs.push_back(out);
  manifest.write(manifest_path_for(out));
}

struct GraphOptions {
  std::string kind = "kmst";
  std::size_t k = 5;
};

Graph build_graph(const PointCloud& pooled, const GraphOptions& go) {
  const auto dm = euclidean_distances(pooled);
  if (go.kind == "kmst") return kmst(dm, go.k);
  if (go.kind == "knng") {
    if (go.k == 0 || go.k >= pooled.size())
      throw std::invalid_argument("knng needs 1 <= K <= N-1 (got K=" + std::to_string(go.k) + ", N=" +
                                  std::to_string(pooled.size()) + ")");
    return knng(dm, go.k);
  }
  throw std::invalid_argument("graph must be kmst or knng");
}

Graph build_graph(const DistanceMatrix& dm, const GraphOptions& go) {
  if (go.kind == "kmst") return kmst(dm, go.k);
  if (go.k == 0 || go.k >= dm.size()) throw std::invalid_argument("knng needs 1 <= K <= N-1");
  return knng(dm, go.k);
}

PointCloud pool_checked(const PointCloud& x, const PointCloud& y) {
  if (x.dim() != y.dim())
    throw DataError("sample X has " + std::to_string(x.dim()) + " columns but sample Y has " +
                    std::to_string(y.dim()));
  return pool(x, y);
}

// ------------------------------------------------------------------ test

struct TestArgs {
  std::string x, y, graph_file, labels, dist;
  GraphOptions go;
  std::string test = "get";
  std::string pvalue = "asymptotic";
  std::int64_t perms = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool met_abs_zd = false;
  bool all = false;
};

int run_test(const TestArgs& a) {
  Manifest man;
  man.subcommand = "test";
  man.workers = omp_get_max_threads();
  Graph g(1, {});
  std::vector<int> labels;
  if (!a.x.empty() || !a.y.empty()) {
    if (a.x.empty() || a.y.empty()) throw std::invalid_argument("--x and --y must be given together");
    const auto x = read_csv(fs::path(a.x));
    const auto y = read_csv(fs::path(a.y));
    g = build_graph(pool_checked(x, y), a.go);
    labels.assign(x.size(), 1);
    labels.insert(labels.end(), y.size(), 2);
    man.inputs = {a.x, a.y};
  } else if (!a.graph_file.empty() || !a.dist.empty()) {
    if (a.labels.empty()) throw std::invalid_argument("--labels is required with --graph-file or --dist");
    if (!a.graph_file.empty() && !a.dist.empty()) throw std::invalid_argument("give --graph-file or --dist, not both");
    g = !a.graph_file.empty() ? read_graph(fs::path(a.graph_file)) : build_graph(read_distances(a.dist), a.go);
    labels = read_labels(a.labels);
    man.inputs = {!a.graph_file.empty() ? a.graph_file : a.dist, a.labels};
    if (labels.size() != g.num_nodes())
      throw DataError("labels file has " + std::to_string(labels.size()) + " entries but the graph has " +
                      std::to_string(g.num_nodes()) + " nodes");
  } else {
    throw std::invalid_argument("give --x/--y, --graph-file/--labels or --dist/--labels");
  }

  const Labels lab(labels);
  const TestOptions opt{a.met_abs_zd};
  const TestKind kind = parse_test_kind(a.test);
  Json result;
  man.config = Json{{"graph", a.go.kind}, {"k", a.go.k},       {"test", a.test},
                    {"pvalue", a.pvalue}, {"perms", a.perms},   {"met_abs_zd", a.met_abs_zd},
                    {"all_tests", a.all}, {"graph_file", a.graph_file}, {"dist", a.dist}};
  if (a.pvalue == "asymptotic") {
    if (a.all) {
      result = Json::array();
      for (TestKind t : {TestKind::oet, TestKind::get, TestKind::wet, TestKind::met})
        result.push_back(to_json(asymptotic_test(g, lab, t, opt)));
    } else {
      result = to_json(asymptotic_test(g, lab, kind, opt));
    }
  } else if (a.pvalue == "perm" || a.pvalue == "permutation") {
    const std::uint64_t seed = a.seed.value_or(entropy_seed());
    man.seed = seed;
    const auto all = permutation_test_all(g, lab, a.perms, seed, opt);
    if (a.all) {
      result = Json::array();
      for (const auto& r : all) result.push_back(to_json(r));
    } else {
      result = to_json(all[static_cast<std::size_t>(kind)]);
    }
  } else {
    throw std::invalid_argument("--pvalue must be asymptotic or perm");
  }
  emit(result.dump(2) + "\n", a.out, man);
  return 0;
}

// -------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::string graph_file, x, y, data, rule;
  GraphOptions go;
  double alpha = 0.5;
  std::size_t nodes = 1000;
  std::optional<std::uint64_t> seed;
  bool induced = false;
  bool table = false;
  std::string out;
};

// Reference behaviour for each ratio: the asymptotic conditions ask for the
// listed quantity to vanish (o(1)) as N grows.
const std::vector<std::pair<std::string, std::string>>& references() {
  static const std::vector<std::pair<std::string, std::string>> refs = {
      {"c1_ratio_a", "-> 0  (sum|G_i|^2 = o(|G|^1.5))"},
      {"c1_ratio_b", "-> 0  (N_sq = o(|G|^2))"},
      {"c2_ratio_a", "-> 0  (sum|d_i|^3 = o(V_G^1.5))"},
      {"c2_ratio_b", "-> 0  (sum d_i^3 = o(V_G sqrt|G|))"},
      {"c2_ratio_c", "-> 0  (crosspair = o(|G| V_G))"},
      {"c3_ratio", "-> 0  (max d_i^2 = o(V_G))"},
      {"c4_ratio_a", "-> 0  (T = |G| + V_G)"},
      {"c4_ratio_b", "-> 0"},
      {"c4_ratio_c", "-> 0"},
      {"legacy_ae2", "-> 0  (older condition)"},
      {"legacy_aebe", "-> 0  (older condition)"},
      {"legacy_gi2_over_n", "bounded  (older condition)"},
  };
  return refs;
}

int run_diagnose(const DiagnoseArgs& a) {
  Manifest man;
  man.subcommand = "diagnose";
  man.workers = omp_get_max_threads();
  Graph g(1, {});
  if (!a.graph_file.empty()) {
    g = read_graph(fs::path(a.graph_file));
    man.inputs = {a.graph_file};
  } else if (!a.x.empty() || !a.data.empty()) {
    if (!a.data.empty()) {
      g = build_graph(read_csv(fs::path(a.data)), a.go);
      man.inputs = {a.data};
    } else {
      if (a.y.empty()) throw std::invalid_argument("--x needs --y (or use --data for a single file)");
      g = build_graph(pool_checked(read_csv(fs::path(a.x)), read_csv(fs::path(a.y))), a.go);
      man.inputs = {a.x, a.y};
    }
  } else if (!a.rule.empty()) {
    const std::uint64_t seed = a.seed.value_or(entropy_seed());
    man.seed = seed;
    g = gen_rule(parse_gen_rule(a.rule), a.nodes, a.alpha, seed);
  } else {
    throw std::invalid_argument("give --graph-file, --data, --x/--y or --rule");
  }
  man.config = Json{{"graph", a.go.kind}, {"k", a.go.k}, {"rule", a.rule}, {"alpha", a.alpha},
                    {"nodes", a.nodes}, {"induced_squares", a.induced}};

  const auto report = condition_report(g, a.induced);
  Json j = to_json(report);
  Json refs = Json::object();
  for (const auto& [key, text] : references()) refs[key] = text;
  j["reference"] = refs;
  if (report.v_g == 0.0) j["warning"] = "V_G = 0 (regular graph): centered ratios are undefined";
  emit(j.dump(2) + "\n", a.out, man);

  if (a.table) {
    std::fprintf(stderr, "N = %zu, |G| = %lld, V_G = %.6g, squares = %lld, max degree = %lld\n", report.num_nodes,
                 static_cast<long long>(report.num_edges), report.v_g, static_cast<long long>(report.squares),
                 static_cast<long long>(report.max_degree));
    if (report.v_g == 0.0) std::fprintf(stderr, "warning: V_G = 0 (regular graph)\n");
    for (const auto& [key, text] : references()) {
      const auto& v = j.at(key);
      const std::string shown = v.is_null() ? "undefined" : v.dump();
      std::fprintf(stderr, "  %-18s %-24s %s\n", key.c_str(), shown.c_str(), text.c_str());
    }
  }
  return 0;
}

// -------------------------------------------------------------- simulate

int run_simulate(const std::string& config_path, const std::string& out_dir, int workers) {
  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open config '" + config_path + "'");
  Json config;
  try {
    config = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const int w = workers > 0 ? workers : default_workers();
  const auto res = run_experiment(config, w);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / "results.csv";
  const fs::path summary = dir / "summary.json";
  write_atomic(csv, rows_to_csv(res));
  Json s;
  s["experiment"] = res.kind;
  s["config"] = res.config;
  s["trials"] = res.trials;
  s["rows"] = Json::array();
  for (const auto& r : res.rows) s["rows"].push_back(r);
  s["extras"] = res.extras;
  write_atomic(summary, s.dump(2) + "\n");

  Manifest man;
  man.subcommand = "simulate";
  man.config = res.config;
  if (res.config.contains("seed")) man.seed = res.config.at("seed").get<std::uint64_t>();
  man.inputs = {config_path};
  man.outputs = {csv, summary};
  man.workers = w;
  man.write(dir / "manifest.json");
  std::cout << rows_to_csv(res);
  return 0;
}

// ----------------------------------------------------------------- stein

struct SteinArgs {
  std::vector<std::size_t> nodes{200, 1000};
  std::string d = "100";
  std::string k = "5";
  std::vector<double> direction{0.5773502691896258, 0.5773502691896258, 0.5773502691896258};
  std::int64_t samples = 20000;
  std::int64_t replicates = 20;
  std::optional<std::uint64_t> seed;
  std::string graph_file;
  std::optional<std::int64_t> m;
  int workers = 0;
  std::string out;
};

int run_stein(const SteinArgs& a) {
  Manifest man;
  man.subcommand = "stein";
  const std::uint64_t seed = a.seed.value_or(entropy_seed());
  man.seed = seed;
  if (a.direction.size() != 3) throw std::invalid_argument("--direction takes three values");
  const Direction dir{a.direction[0], a.direction[1], a.direction[2]};

  if (!a.graph_file.empty()) {
    const Graph g = read_graph(fs::path(a.graph_file));
    const auto nn = static_cast<std::int64_t>(g.num_nodes());
    const std::int64_t m = a.m.value_or(nn / 2);
    const auto est = mc_stein_bound(g, SampleSizes{m, nn - m}, dir, a.samples, seed);
    std::ostringstream csv;
    csv << "N,d,K,a_direction,bound,mc_se,n_samples,seed\n";
    csv << nn << ",,," << dir[0] << ";" << dir[1] << ";" << dir[2] << "," << Json(est.bound).dump() << ","
        << Json(est.mc_se).dump() << "," << est.n_samples << "," << seed << "\n";
    man.inputs = {a.graph_file};
    man.config = Json{{"m", m}, {"direction", a.direction}, {"samples", a.samples}};
    man.workers = omp_get_max_threads();
    emit(csv.str(), a.out, man);
    return 0;
  }

  Json cfg{{"experiment", "stein"}, {"nodes", a.nodes}, {"direction", a.direction},
           {"samples", a.samples},  {"replicates", a.replicates}, {"seed", seed}};
  cfg["d"] = a.d == "N" ? Json("N") : Json(std::stoull(a.d));
  cfg["k"] = a.k == "sqrt" ? Json("sqrt") : Json(std::stoull(a.k));
  const int w = a.workers > 0 ? a.workers : default_workers();
  const auto res = run_experiment(cfg, w);
  man.config = res.config;
  man.workers = w;
  emit(rows_to_csv(res), a.out, man);
  return 0;
}

// ----------------------------------------------------------------- graph

struct GraphArgs {
  std::string x, y, data, dist, rule;
  GraphOptions go;
  double alpha = 0.5;
  std::size_t nodes = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_graph(const GraphArgs& a) {
  Manifest man;
  man.subcommand = "graph";
  man.workers = omp_get_max_threads();
  Graph g(1, {});
  if (!a.rule.empty()) {
    const std::uint64_t seed = a.seed.value_or(entropy_seed());
    man.seed = seed;
    g = gen_rule(parse_gen_rule(a.rule), a.nodes, a.alpha, seed);
  } else if (!a.dist.empty()) {
    g = build_graph(read_distances(a.dist), a.go);
    man.inputs = {a.dist};
  } else if (!a.data.empty()) {
    g = build_graph(read_csv(fs::path(a.data)), a.go);
    man.inputs = {a.data};
  } else if (!a.x.empty() && !a.y.empty()) {
    g = build_graph(pool_checked(read_csv(fs::path(a.x)), read_csv(fs::path(a.y))), a.go);
    man.inputs = {a.x, a.y};
  } else {
    throw std::invalid_argument("give --rule, --dist, --data or --x/--y");
  }
  man.config = Json{{"graph", a.go.kind}, {"k", a.go.k}, {"rule", a.rule}, {"alpha", a.alpha}, {"nodes", a.nodes}};
  std::ostringstream os;
  write_graph(os, g);
  emit(os.str(), a.out, man);
  return 0;
}

template <class T>
void add_seed_option(CLI::App* app, std::optional<T>& seed) {
  app->add_option("--seed", seed, "Base random seed (drawn from entropy and recorded when absent)");
}

void add_graph_options(CLI::App* app, GraphOptions& go) {
  app->add_option("--graph", go.kind, "Graph type built on pooled data")
      ->check(CLI::IsMember({"kmst", "knng"}))
      ->capture_default_str();
  app->add_option("--k", go.k, "K for the K-MST or K-NNG")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based two-sample edge-count tests, graph diagnostics and simulations"};
  app.set_version_flag("--version", EDGECOUNT_VERSION);
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Run an edge-count test and print the result as JSON");
  test->add_option("--x", ta.x, "CSV file with sample X (one observation per row)");
  test->add_option("--y", ta.y, "CSV file with sample Y");
  test->add_option("--graph-file", ta.graph_file, "Prebuilt graph in edge-list format");
  test->add_option("--dist", ta.dist, "Condensed distance matrix file (binary EDM1 or text)");
  test->add_option("--labels", ta.labels, "Labels file (1 = sample X, 2 = sample Y), one per node");
  add_graph_options(test, ta.go);
  test->add_option("--test", ta.test, "oet, get, wet or met")
      ->check(CLI::IsMember({"oet", "get", "wet", "met", "OET", "GET", "WET", "MET"}))
      ->capture_default_str();
  test->add_option("--pvalue", ta.pvalue, "asymptotic or perm")
      ->check(CLI::IsMember({"asymptotic", "perm", "permutation"}))
      ->capture_default_str();
  test->add_option("--perms", ta.perms, "Number of permutations (>= 100)")->capture_default_str();
  add_seed_option(test, ta.seed);
  test->add_option("--out", ta.out, "Output file (default stdout); a manifest is written next to it");
  test->add_flag("--met-abs-zd", ta.met_abs_zd, "Use |Z_diff| in the max-type statistic");
  test->add_flag("--all", ta.all, "Report all four tests");

  DiagnoseArgs da;
  auto* diag = app.add_subcommand("diagnose", "Report degree functionals and condition ratios of a graph");
  diag->add_option("--graph-file", da.graph_file, "Graph in edge-list format");
  diag->add_option("--data", da.data, "Single CSV of observations to build a graph on");
  diag->add_option("--x", da.x, "CSV with sample X");
  diag->add_option("--y", da.y, "CSV with sample Y");
  add_graph_options(diag, da.go);
  diag->add_option("--rule", da.rule, "Synthetic generating rule i..vi")
      ->check(CLI::IsMember({"i", "ii", "iii", "iv", "v", "vi"}));
  diag->add_option("--alpha", da.alpha, "Exponent for the generating rule")->capture_default_str();
  diag->add_option("--nodes", da.nodes, "Number of nodes for the generating rule")->capture_default_str();
  add_seed_option(diag, da.seed);
  diag->add_flag("--induced-squares", da.induced, "Also count chordless 4-cycles");
  diag->add_flag("--table", da.table, "Print a readable table with reference behaviour to stderr");
  diag->add_option("--out", da.out, "Output file (default stdout)");

  std::string config_path, out_dir;
  int sim_workers = 0;
  auto* sim = app.add_subcommand("simulate", "Run an experiment described by a JSON config");
  sim->add_option("config", config_path, "Experiment config (JSON)")->required();
  sim->add_option("--out", out_dir, "Output directory for results.csv, summary.json and manifest.json")->required();
  sim->add_option("--workers", sim_workers, "Worker threads (default EDGECOUNT_THREADS or all cores)");

  SteinArgs sa;
  auto* stein = app.add_subcommand("stein", "Monte Carlo Stein bound as CSV rows");
  stein->add_option("--nodes", sa.nodes, "Sample sizes N")->delimiter(',')->capture_default_str();
  stein->add_option("--d", sa.d, "Dimension, or N for d = N")->capture_default_str();
  stein->add_option("--k", sa.k, "K of the K-MST, or sqrt for ceil(sqrt(N))")->capture_default_str();
  stein->add_option("--direction", sa.direction, "a1,a2,a3")->delimiter(',')->expected(3);
  stein->add_option("--samples", sa.samples, "Bootstrap samples per estimate (>= 1000)")->capture_default_str();
  stein->add_option("--replicates", sa.replicates, "Datasets per N")->capture_default_str();
  add_seed_option(stein, sa.seed);
  stein->add_option("--graph-file", sa.graph_file, "Use this graph instead of simulated data");
  stein->add_option("--m", sa.m, "Sample X size for --graph-file (default floor(N/2))");
  stein->add_option("--workers", sa.workers, "Worker threads");
  stein->add_option("--out", sa.out, "Output CSV (default stdout)");

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "Build a graph and write it as an edge list");
  graph->add_option("--x", ga.x, "CSV with sample X");
  graph->add_option("--y", ga.y, "CSV with sample Y");
  graph->add_option("--data", ga.data, "Single CSV of observations");
  graph->add_option("--dist", ga.dist, "Condensed distance matrix file");
  add_graph_options(graph, ga.go);
  graph->add_option("--rule", ga.rule, "Synthetic generating rule i..vi")
      ->check(CLI::IsMember({"i", "ii", "iii", "iv", "v", "vi"}));
  graph->add_option("--alpha", ga.alpha, "Exponent for the generating rule")->capture_default_str();
  graph->add_option("--nodes", ga.nodes, "Number of nodes for the generating rule")->capture_default_str();
  add_seed_option(graph, ga.seed);
  graph->add_option("--out", ga.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*test) return run_test(ta);
    if (*diag) return run_diagnose(da);
    if (*sim) return run_simulate(config_path, out_dir, sim_workers);
    if (*stein) return run_stein(sa);
    if (*graph) return run_graph(ga);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
