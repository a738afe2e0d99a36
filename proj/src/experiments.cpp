#include "edgecount/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <set>
#include <sstream>

#include "edgecount/construct.hpp"
#include "edgecount/digest.hpp"
#include "edgecount/ks.hpp"
#include "edgecount/rng.hpp"
#include "edgecount/samplers.hpp"

namespace edgecount {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Typed access to a JSON object; keys outside the allowed set are rejected
// up front, all of them in one message.
class ConfigReader {
 public:
  ConfigReader(const Json& j, std::string experiment, std::set<std::string> allowed)
      : j_(j), experiment_(std::move(experiment)), allowed_(std::move(allowed)) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    allowed_.insert("experiment");
    std::vector<std::string> unknown;
    for (const auto& [key, value] : j.items())
      if (!allowed_.count(key)) unknown.push_back(key);
    if (!unknown.empty()) {
      std::string msg = "unknown key(s) for experiment '" + experiment_ + "':";
      for (const auto& k : unknown) msg += " " + k;
      msg += " (allowed:";
      for (const auto& k : allowed_) msg += " " + k;
      throw ConfigError(msg + ")");
    }
  }

  template <class T>
  void get(const std::string& key, T& out) const {
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("key '" + key + "' has the wrong type: " + j_.at(key).dump());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

 private:
  const Json& j_;
  std::string experiment_;
  std::set<std::string> allowed_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::vector<TestKind> parse_tests(const ConfigReader& r) {
  std::vector<std::string> names;
  r.get("tests", names);
  if (names.empty()) return {TestKind::get};
  std::vector<TestKind> out;
  for (const auto& s : names) {
    try {
      out.push_back(parse_test_kind(s));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

PValueMethod parse_pvalue(const ConfigReader& r) {
  std::string s = "asymptotic";
  r.get("pvalue", s);
  if (s == "asymptotic") return PValueMethod::asymptotic;
  if (s == "perm" || s == "permutation") return PValueMethod::permutation;
  throw ConfigError("pvalue must be 'asymptotic' or 'perm', got '" + s + "'");
}

Json tests_json(const std::vector<TestKind>& tests) {
  Json a = Json::array();
  for (auto t : tests) a.push_back(std::string(to_string(t)));
  return a;
}

int resolve_workers(int workers) { return workers > 0 ? workers : default_workers(); }

std::size_t floor_pow(double base, double alpha) {
  const double v = std::pow(base, alpha);
  const double r = std::round(v);
  // exact integer powers should not fall one short through rounding error
  if (std::abs(v - r) < 1e-9 * std::max(1.0, v)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(v));
}

double binomial_se(double rate, std::int64_t n) {
  return n > 0 ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(n)) : kNaN;
}

// p-values for each requested test on one labelled graph. Permutation
// p-values share one set of resamples across the tests.
std::vector<double> p_values(const Graph& g, const Labels& lab, const std::vector<TestKind>& tests,
                             PValueMethod method, std::int64_t perms, std::uint64_t seed, const TestOptions& opt) {
  std::vector<double> out;
  if (method == PValueMethod::asymptotic) {
    const auto st = statistics(g, lab);
    for (auto t : tests) out.push_back(asymptotic_p(t, st, opt));
  } else {
    const auto all = permutation_test_all(g, lab, perms, seed, opt);
    for (auto t : tests) out.push_back(all[static_cast<std::size_t>(t)].p_value);
  }
  return out;
}

// Exceptions must not escape an OpenMP region; the first unexpected one is
// kept and rethrown after the loop.
class ErrorSink {
 public:
  void record() {
#pragma omp critical(edgecount_error_sink)
    if (!first_) first_ = std::current_exception();
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::exception_ptr first_;
};

struct RejectionTally {
  std::int64_t valid = 0;
  std::int64_t rejections = 0;
};

RejectionTally tally(const std::vector<double>& ps, double level) {
  RejectionTally t;
  for (double p : ps) {
    if (std::isnan(p)) continue;
    ++t.valid;
    t.rejections += p < level;
  }
  return t;
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("EDGECOUNT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

// ---------------------------------------------------------------- configs

SizeConfig parse_size_config(const Json& j) {
  ConfigReader r(j, "size",
                 {"distributions", "dims", "dims_over_n", "m", "n", "alphas", "trials", "tests", "pvalue", "perms",
                  "level", "seed", "met_abs_zd"});
  SizeConfig c;
  r.get("distributions", c.distributions);
  r.get("dims", c.dims);
  r.get("dims_over_n", c.dims_over_n);
  r.get("m", c.m);
  r.get("n", c.n);
  r.get("alphas", c.alphas);
  r.get("trials", c.trials);
  c.tests = parse_tests(r);
  c.pvalue = parse_pvalue(r);
  r.get("perms", c.perms);
  r.get("level", c.level);
  r.get("seed", c.seed);
  r.get("met_abs_zd", c.met_abs_zd);
  if (c.dims.empty() && c.dims_over_n.empty()) c.dims_over_n = {0.5};
  require(c.trials >= 100, "size experiments need trials >= 100");
  require(c.m >= 2 && c.n >= 2, "m and n must be at least 2");
  require(c.level > 0 && c.level < 1, "level must lie in (0, 1)");
  require(c.pvalue == PValueMethod::asymptotic || c.perms >= 100, "perms must be at least 100");
  for (double a : c.alphas) require(a > 0 && a <= 1, "alphas must lie in (0, 1]");
  for (double r2 : c.dims_over_n) require(r2 > 0, "dims_over_n entries must be positive");
  for (std::size_t d : c.dims) require(d >= 1, "dims entries must be positive");
  for (const auto& name : c.distributions) {
    try {
      size_distribution(name, 1);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

Json to_json(const SizeConfig& c) {
  return Json{{"experiment", "size"}, {"distributions", c.distributions}, {"dims", c.dims},
              {"dims_over_n", c.dims_over_n}, {"m", c.m}, {"n", c.n}, {"alphas", c.alphas},
              {"trials", c.trials}, {"tests", tests_json(c.tests)},
              {"pvalue", c.pvalue == PValueMethod::asymptotic ? "asymptotic" : "perm"}, {"perms", c.perms},
              {"level", c.level}, {"seed", c.seed}, {"met_abs_zd", c.met_abs_zd}};
}

PowerConfig parse_power_config(const Json& j) {
  ConfigReader r(j, "power",
                 {"scenarios", "d", "m", "n", "ks", "betas", "graph", "tests", "pvalue", "perms", "trials", "level",
                  "seed", "met_abs_zd"});
  PowerConfig c;
  r.get("scenarios", c.scenarios);
  r.get("d", c.d);
  r.get("m", c.m);
  r.get("n", c.n);
  r.get("ks", c.ks);
  r.get("betas", c.betas);
  std::string graph = "kmst";
  r.get("graph", graph);
  require(graph == "kmst" || graph == "knng", "graph must be 'kmst' or 'knng'");
  c.graph = graph == "kmst" ? GraphKind::kmst : GraphKind::knng;
  c.tests = parse_tests(r);
  c.pvalue = parse_pvalue(r);
  r.get("perms", c.perms);
  r.get("trials", c.trials);
  r.get("level", c.level);
  r.get("seed", c.seed);
  r.get("met_abs_zd", c.met_abs_zd);
  if (c.ks.empty() && c.betas.empty()) c.ks = {5};
  require(c.ks.empty() || c.betas.empty(), "give either ks or betas, not both");
  require(c.trials >= 100, "power experiments need trials >= 100");
  require(c.m >= 2 && c.n >= 2, "m and n must be at least 2");
  require(c.d >= 1, "d must be positive");
  require(c.level > 0 && c.level < 1, "level must lie in (0, 1)");
  require(c.pvalue == PValueMethod::asymptotic || c.perms >= 100, "perms must be at least 100");
  for (int s : c.scenarios) require(s >= 0 && s <= 9, "scenarios must lie in 0..9");
  for (std::size_t k : c.ks) require(k >= 1, "ks entries must be positive");
  for (double b : c.betas) require(b >= 0 && b < 1, "betas must lie in [0, 1)");
  return c;
}

Json to_json(const PowerConfig& c) {
  return Json{{"experiment", "power"}, {"scenarios", c.scenarios}, {"d", c.d}, {"m", c.m}, {"n", c.n},
              {"ks", c.ks}, {"betas", c.betas}, {"graph", c.graph == GraphKind::kmst ? "kmst" : "knng"},
              {"tests", tests_json(c.tests)},
              {"pvalue", c.pvalue == PValueMethod::asymptotic ? "asymptotic" : "perm"}, {"perms", c.perms},
              {"trials", c.trials}, {"level", c.level}, {"seed", c.seed}, {"met_abs_zd", c.met_abs_zd}};
}

ValidityConfig parse_validity_config(const Json& j) {
  ConfigReader r(j, "validity", {"rules", "alphas", "nodes", "m", "graphs", "permutations", "level", "seed"});
  ValidityConfig c;
  r.get("rules", c.rules);
  r.get("alphas", c.alphas);
  r.get("nodes", c.nodes);
  if (r.has("m")) {
    std::size_t m = 0;
    r.get("m", m);
    c.m = m;
  }
  r.get("graphs", c.graphs);
  r.get("permutations", c.permutations);
  r.get("level", c.level);
  r.get("seed", c.seed);
  require(c.graphs >= 20, "validity experiments need graphs >= 20");
  require(c.permutations >= 1000, "validity experiments need permutations >= 1000");
  require(c.nodes >= 4, "nodes must be at least 4");
  require(!c.m || (*c.m >= 2 && *c.m + 2 <= c.nodes), "m must satisfy 2 <= m <= nodes - 2");
  require(c.level > 0 && c.level < 1, "level must lie in (0, 1)");
  for (double a : c.alphas) require(a >= 0 && a <= 1, "alphas must lie in [0, 1]");
  for (const auto& rule : c.rules) {
    try {
      parse_gen_rule(rule);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

Json to_json(const ValidityConfig& c) {
  return Json{{"experiment", "validity"}, {"rules", c.rules}, {"alphas", c.alphas}, {"nodes", c.nodes},
              {"m", c.m ? Json(*c.m) : Json(nullptr)}, {"graphs", c.graphs}, {"permutations", c.permutations},
              {"level", c.level}, {"seed", c.seed}};
}

MaxDegreeConfig parse_max_degree_config(const Json& j) {
  ConfigReader r(j, "max_degree", {"d", "nodes", "k_grid", "replicates", "seed"});
  MaxDegreeConfig c;
  r.get("d", c.d);
  r.get("nodes", c.nodes);
  r.get("k_grid", c.k_grid);
  r.get("replicates", c.replicates);
  r.get("seed", c.seed);
  require(c.d >= 1, "d must be positive");
  require(c.nodes >= 3, "nodes must be at least 3");
  require(c.replicates >= 1, "replicates must be positive");
  require(c.k_grid.size() >= 2, "k_grid needs at least two values");
  for (std::size_t k : c.k_grid) require(k >= 1 && 2 * k <= c.nodes, "k_grid entries must satisfy 1 <= K <= N/2");
  return c;
}

Json to_json(const MaxDegreeConfig& c) {
  return Json{{"experiment", "max_degree"}, {"d", c.d}, {"nodes", c.nodes}, {"k_grid", c.k_grid},
              {"replicates", c.replicates}, {"seed", c.seed}};
}

SteinConfig parse_stein_config(const Json& j) {
  ConfigReader r(j, "stein", {"nodes", "d", "k", "direction", "samples", "replicates", "seed"});
  SteinConfig c;
  r.get("nodes", c.nodes);
  if (r.has("d")) {
    if (j.at("d").is_string()) {
      require(j.at("d").get<std::string>() == "N", "d must be a positive integer or \"N\"");
      c.d_equals_n = true;
    } else {
      r.get("d", c.d);
    }
  }
  if (r.has("k")) {
    if (j.at("k").is_string()) {
      require(j.at("k").get<std::string>() == "sqrt", "k must be a positive integer or \"sqrt\"");
      c.k_sqrt = true;
    } else {
      r.get("k", c.k);
    }
  }
  if (r.has("direction")) {
    std::vector<double> dir;
    r.get("direction", dir);
    require(dir.size() == 3, "direction must have three entries");
    c.direction = {dir[0], dir[1], dir[2]};
  }
  r.get("samples", c.samples);
  r.get("replicates", c.replicates);
  r.get("seed", c.seed);
  require(c.samples >= 1000, "stein experiments need samples >= 1000");
  require(c.replicates >= 1, "replicates must be positive");
  require(!c.nodes.empty(), "nodes must be nonempty");
  require(c.d >= 1 && c.k >= 1, "d and k must be positive");
  require(c.direction[0] != 0 || c.direction[1] != 0 || c.direction[2] != 0, "direction must be nonzero");
  for (std::size_t nn : c.nodes) require(nn >= 6, "nodes entries must be at least 6");
  return c;
}

Json to_json(const SteinConfig& c) {
  return Json{{"experiment", "stein"}, {"nodes", c.nodes}, {"d", c.d_equals_n ? Json("N") : Json(c.d)},
              {"k", c.k_sqrt ? Json("sqrt") : Json(c.k)},
              {"direction", {c.direction[0], c.direction[1], c.direction[2]}}, {"samples", c.samples},
              {"replicates", c.replicates}, {"seed", c.seed}};
}

// ---------------------------------------------------------------- runners

ExperimentResult run_size_experiment(const SizeConfig& c, int workers) {
  const int w = resolve_workers(workers);
  const std::size_t nn = c.m + c.n;
  const double pairs = static_cast<double>(nn) * static_cast<double>(nn - 1) / 2.0;
  const TestOptions opt{c.met_abs_zd};

  std::vector<std::size_t> dims = c.dims;
  for (double r : c.dims_over_n)
    dims.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(r * static_cast<double>(nn)))));

  struct Cell {
    std::size_t target;
    std::size_t layers;
    bool feasible;
  };
  std::vector<Cell> cells;
  std::size_t max_target = 0;
  for (double a : c.alphas) {
    const std::size_t target = floor_pow(pairs, a);
    const std::size_t layers = (target + nn - 2) / (nn - 1);
    const bool feasible = target >= 1 && static_cast<double>(target) <= pairs;
    cells.push_back({target, layers, feasible});
    if (feasible) max_target = std::max(max_target, target);
  }

  ExperimentResult res;
  res.kind = "size";
  res.config = to_json(c);
  res.trials = c.trials;
  res.columns = {"distribution", "d", "alpha", "num_edges", "k_layers", "test", "trials", "valid_trials",
                 "rejections", "rejection_rate", "binomial_se", "skipped", "seeds_digest"};

  std::size_t group = 0;
  for (const auto& dist : c.distributions) {
    for (std::size_t d : dims) {
      const auto spec = size_distribution(dist, d);
      const std::uint64_t group_seed = derive_seed(c.seed, group++);
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(c.trials));
      for (std::int64_t t = 0; t < c.trials; ++t) seeds[static_cast<std::size_t>(t)] = derive_seed(group_seed, t);
      // pv[cell][test][trial]
      std::vector<std::vector<std::vector<double>>> pv(
          cells.size(), std::vector<std::vector<double>>(c.tests.size(),
                                                         std::vector<double>(static_cast<std::size_t>(c.trials), kNaN)));
      if (max_target > 0) {
        ErrorSink sink;
#pragma omp parallel for num_threads(w) schedule(dynamic)
        for (std::int64_t t = 0; t < c.trials; ++t) {
          const std::uint64_t s = seeds[static_cast<std::size_t>(t)];
          const auto [x, y] = sample_scenario(spec, c.m, c.n, s);
          // Every cell is a prefix of the largest one.
          const auto full = kmst_of_size(euclidean_distances(pool(x, y)), max_target);
          const auto lab = Labels::blocks(static_cast<std::int64_t>(c.m), static_cast<std::int64_t>(c.n));
          for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            if (!cells[ci].feasible) continue;
            try {
              const auto g = truncate_to_size(full, cells[ci].target);
              const auto ps = p_values(g, lab, c.tests, c.pvalue, c.perms, derive_seed(s, 1 + ci), opt);
              for (std::size_t k = 0; k < ps.size(); ++k) pv[ci][k][static_cast<std::size_t>(t)] = ps[k];
            } catch (const std::invalid_argument&) {
              // degenerate graph for this draw (e.g. zero variance); counted as invalid
            } catch (...) {
              sink.record();
            }
          }
        }
        sink.rethrow();
      }
      const std::string digest = seeds_digest(seeds);
      for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        for (std::size_t k = 0; k < c.tests.size(); ++k) {
          const auto tl = tally(pv[ci][k], c.level);
          const double rate =
              tl.valid > 0 ? static_cast<double>(tl.rejections) / static_cast<double>(tl.valid) : kNaN;
          res.rows.push_back(Json{{"distribution", dist},
                                  {"d", d},
                                  {"alpha", c.alphas[ci]},
                                  {"num_edges", cells[ci].target},
                                  {"k_layers", cells[ci].layers},
                                  {"test", std::string(to_string(c.tests[k]))},
                                  {"trials", c.trials},
                                  {"valid_trials", tl.valid},
                                  {"rejections", tl.rejections},
                                  {"rejection_rate", number_or_null(rate)},
                                  {"binomial_se", number_or_null(binomial_se(rate, tl.valid))},
                                  {"skipped", !cells[ci].feasible},
                                  {"seeds_digest", digest}});
        }
      }
    }
  }
  return res;
}

namespace {

ScenarioSpec power_spec(int scenario, std::size_t d) {
  if (scenario == 0) {
    auto s = size_distribution("normal", d);
    s.name = "null";
    return s;
  }
  return power_scenario(scenario, d);
}

}  // namespace

ExperimentResult run_power_experiment(const PowerConfig& c, int workers) {
  const int w = resolve_workers(workers);
  const std::size_t nn = c.m + c.n;
  const TestOptions opt{c.met_abs_zd};

  std::vector<std::size_t> ks = c.ks;
  for (double b : c.betas) ks.push_back(ceil_pow(nn, b));
  std::vector<bool> feasible(ks.size());
  std::size_t max_k = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    feasible[i] = c.graph == GraphKind::kmst ? 2 * ks[i] <= nn : ks[i] <= nn - 1;
    if (feasible[i]) max_k = std::max(max_k, ks[i]);
  }

  ExperimentResult res;
  res.kind = "power";
  res.config = to_json(c);
  res.trials = c.trials;
  res.columns = {"scenario", "d", "m", "n", "graph", "k", "beta", "test", "trials", "valid_trials",
                 "rejections", "power", "binomial_se", "skipped", "seeds_digest"};

  for (std::size_t si = 0; si < c.scenarios.size(); ++si) {
    const auto spec = power_spec(c.scenarios[si], c.d);
    const std::uint64_t scen_seed = derive_seed(c.seed, si);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(c.trials));
    for (std::int64_t t = 0; t < c.trials; ++t) seeds[static_cast<std::size_t>(t)] = derive_seed(scen_seed, t);
    std::vector<std::vector<std::vector<double>>> pv(
        ks.size(), std::vector<std::vector<double>>(c.tests.size(),
                                                    std::vector<double>(static_cast<std::size_t>(c.trials), kNaN)));
    if (max_k > 0) {
      ErrorSink sink;
#pragma omp parallel for num_threads(w) schedule(dynamic)
      for (std::int64_t t = 0; t < c.trials; ++t) {
        const std::uint64_t s = seeds[static_cast<std::size_t>(t)];
        const auto [x, y] = sample_scenario(spec, c.m, c.n, s);
        const auto dm = euclidean_distances(pool(x, y));
        const auto lab = Labels::blocks(static_cast<std::int64_t>(c.m), static_cast<std::int64_t>(c.n));
        std::optional<LayeredGraph> layered;
        if (c.graph == GraphKind::kmst) layered = kmst_layered(dm, max_k);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          if (!feasible[ki]) continue;
          try {
            const Graph g = c.graph == GraphKind::kmst ? truncate_to_size(layered->graph, layered->layer_end[ks[ki] - 1])
                                                       : knng(dm, ks[ki]);
            const auto ps = p_values(g, lab, c.tests, c.pvalue, c.perms, derive_seed(s, 1 + ki), opt);
            for (std::size_t k = 0; k < ps.size(); ++k) pv[ki][k][static_cast<std::size_t>(t)] = ps[k];
          } catch (const std::invalid_argument&) {
          } catch (...) {
            sink.record();
          }
        }
      }
      sink.rethrow();
    }
    const std::string digest = seeds_digest(seeds);
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      const Json beta = ki >= c.ks.size() ? Json(c.betas[ki - c.ks.size()]) : Json(nullptr);
      for (std::size_t k = 0; k < c.tests.size(); ++k) {
        const auto tl = tally(pv[ki][k], c.level);
        const double rate = tl.valid > 0 ? static_cast<double>(tl.rejections) / static_cast<double>(tl.valid) : kNaN;
        res.rows.push_back(Json{{"scenario", c.scenarios[si]},
                                {"d", c.d},
                                {"m", c.m},
                                {"n", c.n},
                                {"graph", c.graph == GraphKind::kmst ? "kmst" : "knng"},
                                {"k", ks[ki]},
                                {"beta", beta},
                                {"test", std::string(to_string(c.tests[k]))},
                                {"trials", c.trials},
                                {"valid_trials", tl.valid},
                                {"rejections", tl.rejections},
                                {"power", number_or_null(rate)},
                                {"binomial_se", number_or_null(binomial_se(rate, tl.valid))},
                                {"skipped", !feasible[ki]},
                                {"seeds_digest", digest}});
      }
    }
  }
  return res;
}

ExperimentResult run_validity_experiment(const ValidityConfig& c, int workers) {
  const int w = resolve_workers(workers);
  const std::size_t m = c.m.value_or(c.nodes / 2);
  const SampleSizes sz{static_cast<std::int64_t>(m), static_cast<std::int64_t>(c.nodes - m)};

  ExperimentResult res;
  res.kind = "validity";
  res.config = to_json(c);
  res.trials = c.graphs;
  res.columns = {"rule", "alpha", "nodes", "m", "graphs", "valid_graphs", "rejections", "rejection_rate",
                 "mean_ks_d", "mean_num_edges", "seeds_digest"};

  std::size_t cell = 0;
  for (const auto& rule_name : c.rules) {
    const GenRule rule = parse_gen_rule(rule_name);
    for (double alpha : c.alphas) {
      const std::uint64_t cell_seed = derive_seed(c.seed, cell++);
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(c.graphs));
      for (std::int64_t k = 0; k < c.graphs; ++k) seeds[static_cast<std::size_t>(k)] = derive_seed(cell_seed, k);
      std::vector<double> pvals(seeds.size(), kNaN), dstat(seeds.size(), kNaN), edges(seeds.size(), kNaN);
      ErrorSink sink;
#pragma omp parallel for num_threads(w) schedule(dynamic)
      for (std::int64_t k = 0; k < c.graphs; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
          const Graph g = gen_rule(rule, c.nodes, alpha, seeds[idx]);
          edges[idx] = static_cast<double>(g.num_edges());
          const auto mo = perm_moments(degree_stats(g), sz);
          const auto counts = resample_counts(g, sz, c.permutations, derive_seed(seeds[idx], 1));
          std::vector<double> s;
          s.reserve(counts.size());
          for (const auto& ct : counts) s.push_back(statistics(mo, ct).s);
          dstat[idx] = ks_statistic(s, chi2_2_cdf);
          pvals[idx] = ks_pvalue(dstat[idx], s.size());
        } catch (const std::invalid_argument&) {
        } catch (...) {
          sink.record();
        }
      }
      sink.rethrow();
      const auto tl = tally(pvals, c.level);
      double dsum = 0.0, esum = 0.0;
      std::int64_t ecount = 0;
      for (std::size_t k = 0; k < seeds.size(); ++k) {
        if (!std::isnan(dstat[k])) dsum += dstat[k];
        if (!std::isnan(edges[k])) {
          esum += edges[k];
          ++ecount;
        }
      }
      const double rate = tl.valid > 0 ? static_cast<double>(tl.rejections) / static_cast<double>(tl.valid) : kNaN;
      res.rows.push_back(Json{{"rule", rule_name},
                              {"alpha", alpha},
                              {"nodes", c.nodes},
                              {"m", m},
                              {"graphs", c.graphs},
                              {"valid_graphs", tl.valid},
                              {"rejections", tl.rejections},
                              {"rejection_rate", number_or_null(rate)},
                              {"mean_ks_d", number_or_null(tl.valid > 0 ? dsum / static_cast<double>(tl.valid) : kNaN)},
                              {"mean_num_edges", number_or_null(ecount > 0 ? esum / static_cast<double>(ecount) : kNaN)},
                              {"seeds_digest", seeds_digest(seeds)}});
    }
  }
  return res;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("power-law fit needs >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("power-law fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0)) throw std::invalid_argument("power-law fit needs distinct x values");
  PowerLawFit f;
  f.gamma = (n * sxy - sx * sy) / den;
  f.log_c = (sy - f.gamma * sx) / n;
  return f;
}

ExperimentResult run_max_degree_study(const MaxDegreeConfig& c, int workers) {
  const int w = resolve_workers(workers);
  std::vector<std::size_t> grid = c.k_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t kmax = grid.back();

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(c.replicates));
  for (std::int64_t r = 0; r < c.replicates; ++r) seeds[static_cast<std::size_t>(r)] = derive_seed(c.seed, r);
  // maxdeg[replicate][grid index]
  std::vector<std::vector<double>> maxdeg(seeds.size(), std::vector<double>(grid.size()));
  SampleLaw law;  // standard Gaussian
  ErrorSink sink;
#pragma omp parallel for num_threads(w) schedule(dynamic)
  for (std::int64_t r = 0; r < c.replicates; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    try {
      const auto pc = sample_law(law, c.nodes, c.d, seeds[idx]);
      const auto layered = kmst_layered(euclidean_distances(pc), kmax);
      std::vector<std::int64_t> deg(c.nodes, 0);
      std::int64_t best = 0;
      std::size_t next = 0;
      const auto& edges = layered.graph.edges();
      for (std::size_t layer = 0; layer < kmax; ++layer) {
        const std::size_t begin = layer == 0 ? 0 : layered.layer_end[layer - 1];
        for (std::size_t e = begin; e < layered.layer_end[layer]; ++e) {
          best = std::max({best, ++deg[edges[e].u], ++deg[edges[e].v]});
        }
        if (next < grid.size() && grid[next] == layer + 1) maxdeg[idx][next++] = static_cast<double>(best);
      }
    } catch (...) {
      sink.record();
    }
  }
  sink.rethrow();

  ExperimentResult res;
  res.kind = "max_degree";
  res.config = to_json(c);
  res.trials = c.replicates;
  res.columns = {"k", "mean_max_degree", "min_max_degree", "max_max_degree", "replicates"};
  std::vector<double> xs, ys;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& row : maxdeg) {
      sum += row[gi];
      lo = std::min(lo, row[gi]);
      hi = std::max(hi, row[gi]);
    }
    const double mean = sum / static_cast<double>(maxdeg.size());
    xs.push_back(static_cast<double>(grid[gi]));
    ys.push_back(mean);
    res.rows.push_back(Json{{"k", grid[gi]},
                            {"mean_max_degree", mean},
                            {"min_max_degree", lo},
                            {"max_max_degree", hi},
                            {"replicates", c.replicates}});
  }
  const auto fit = fit_power_law(xs, ys);
  res.extras = Json{{"gamma", fit.gamma}, {"log_c", fit.log_c}, {"seeds_digest", seeds_digest(seeds)}};
  return res;
}

ExperimentResult run_stein_experiment(const SteinConfig& c, int workers) {
  const int w = resolve_workers(workers);
  const std::size_t reps = static_cast<std::size_t>(c.replicates);
  const std::size_t jobs = c.nodes.size() * reps;
  std::vector<SteinBoundEstimate> est(jobs);
  std::vector<std::uint64_t> seeds(jobs);
  std::vector<std::size_t> dims(c.nodes.size()), kvals(c.nodes.size());
  for (std::size_t ci = 0; ci < c.nodes.size(); ++ci) {
    const std::size_t nn = c.nodes[ci];
    dims[ci] = c.d_equals_n ? nn : c.d;
    kvals[ci] = c.k_sqrt ? ceil_pow(nn, 0.5) : c.k;
    if (2 * kvals[ci] > nn) throw ConfigError("K = " + std::to_string(kvals[ci]) + " is infeasible for N = " +
                                              std::to_string(nn) + " (need K(N-1) <= N(N-1)/2)");
    for (std::size_t r = 0; r < reps; ++r) seeds[ci * reps + r] = derive_seed(derive_seed(c.seed, ci), r);
  }
  ErrorSink sink;
  SampleLaw law;
#pragma omp parallel for num_threads(w) schedule(dynamic)
  for (std::size_t j = 0; j < jobs; ++j) {
    const std::size_t ci = j / reps;
    const std::size_t nn = c.nodes[ci];
    try {
      const auto pc = sample_law(law, nn, dims[ci], seeds[j]);
      const Graph g = kmst(euclidean_distances(pc), kvals[ci]);
      const SampleSizes sz{static_cast<std::int64_t>(nn / 2), static_cast<std::int64_t>(nn - nn / 2)};
      est[j] = mc_stein_bound(g, sz, c.direction, c.samples, derive_seed(seeds[j], 1));
    } catch (...) {
      sink.record();
    }
  }
  sink.rethrow();

  ExperimentResult res;
  res.kind = "stein";
  res.config = to_json(c);
  res.trials = c.replicates;
  res.columns = {"N", "d", "K", "a_direction", "replicate", "bound", "mc_se", "term_a1", "term_a2", "term_a3",
                 "var_w", "n_samples", "seed"};
  std::ostringstream dir;
  dir << c.direction[0] << ";" << c.direction[1] << ";" << c.direction[2];
  Json summary = Json::array();
  for (std::size_t ci = 0; ci < c.nodes.size(); ++ci) {
    double sum = 0, sumsq = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& e = est[ci * reps + r];
      sum += e.bound;
      sumsq += e.bound * e.bound;
      res.rows.push_back(Json{{"N", c.nodes[ci]},
                              {"d", dims[ci]},
                              {"K", kvals[ci]},
                              {"a_direction", dir.str()},
                              {"replicate", r},
                              {"bound", e.bound},
                              {"mc_se", e.mc_se},
                              {"term_a1", e.term_a1},
                              {"term_a2", e.term_a2},
                              {"term_a3", e.term_a3},
                              {"var_w", e.var_w},
                              {"n_samples", e.n_samples},
                              {"seed", seeds[ci * reps + r]}});
    }
    const double nr = static_cast<double>(reps);
    const double mean = sum / nr;
    const double sd = reps > 1 ? std::sqrt(std::max(0.0, (sumsq - nr * mean * mean) / (nr - 1))) : 0.0;
    summary.push_back(Json{{"N", c.nodes[ci]}, {"d", dims[ci]}, {"K", kvals[ci]}, {"mean_bound", mean},
                           {"sd_bound", sd}, {"se_mean_bound", sd / std::sqrt(nr)}, {"replicates", reps}});
  }
  res.extras = Json{{"per_n", summary}, {"seeds_digest", seeds_digest(seeds)}};
  return res;
}

ExperimentResult run_experiment(const Json& config, int workers) {
  if (!config.is_object() || !config.contains("experiment") || !config.at("experiment").is_string())
    throw ConfigError("configuration needs a string key 'experiment' (size, power, validity, max_degree, stein)");
  const auto kind = config.at("experiment").get<std::string>();
  if (kind == "size") return run_size_experiment(parse_size_config(config), workers);
  if (kind == "power") return run_power_experiment(parse_power_config(config), workers);
  if (kind == "validity") return run_validity_experiment(parse_validity_config(config), workers);
  if (kind == "max_degree") return run_max_degree_study(parse_max_degree_config(config), workers);
  if (kind == "stein") return run_stein_experiment(parse_stein_config(config), workers);
  throw ConfigError("unknown experiment '" + kind + "' (expected size, power, validity, max_degree or stein)");
}

std::string rows_to_csv(const ExperimentResult& r) {
  auto cell = [](const Json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
    return v.dump();
  };
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      if (i) out += ",";
      out += cell(row.contains(r.columns[i]) ? row.at(r.columns[i]) : Json(nullptr));
    }
    out += "\n";
  }
  return out;
}

}  // namespace edgecount
