#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgecount/edge_tests.hpp"
#include "edgecount/json_io.hpp"
#include "edgecount/stein.hpp"

namespace edgecount {

/// Bad experiment configuration (unknown keys, wrong types, out-of-range values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GraphKind { kmst, knng };

/// Null-size study: both samples from one distribution, graph with
/// |G| = floor(M^alpha) edges where M = C(N, 2), realized as the smallest
/// K-MST with enough edges truncated in construction order.
struct SizeConfig {
  std::vector<std::string> distributions{"normal"};
  std::vector<std::size_t> dims;          // absolute dimensions
  std::vector<double> dims_over_n;        // dimensions as multiples of N (rounded)
  std::size_t m = 100;
  std::size_t n = 100;
  std::vector<double> alphas{0.5};
  std::int64_t trials = 1000;
  std::vector<TestKind> tests{TestKind::get};
  PValueMethod pvalue = PValueMethod::asymptotic;
  std::int64_t perms = 1000;
  double level = 0.05;
  std::uint64_t seed = 1;
  bool met_abs_zd = false;
};

/// Power study. Scenario 0 is the null (both samples Gaussian with AR(0.5)
/// covariance); 1..9 are the alternatives of power_scenario(). The graph
/// sizes are given either as K values or as exponents beta with K = ceil(N^beta).
struct PowerConfig {
  std::vector<int> scenarios{1};
  std::size_t d = 500;
  std::size_t m = 100;
  std::size_t n = 100;
  std::vector<std::size_t> ks;
  std::vector<double> betas;
  GraphKind graph = GraphKind::kmst;
  std::vector<TestKind> tests{TestKind::get};
  PValueMethod pvalue = PValueMethod::asymptotic;
  std::int64_t perms = 1000;
  std::int64_t trials = 1000;
  double level = 0.05;
  std::uint64_t seed = 1;
  bool met_abs_zd = false;
};

/// Chi-square(2) validity map: for each (rule, alpha) generate graphs, draw
/// the permutation distribution of S and KS-test it against chi-square(2).
struct ValidityConfig {
  std::vector<std::string> rules{"i"};
  std::vector<double> alphas{0.3};
  std::size_t nodes = 500;
  std::optional<std::size_t> m;  // default floor(N/2)
  std::int64_t graphs = 100;
  std::int64_t permutations = 2000;
  double level = 0.05;
  std::uint64_t seed = 1;
};

struct MaxDegreeConfig {
  std::size_t d = 50;
  std::size_t nodes = 1000;
  std::vector<std::size_t> k_grid{2, 4, 8, 16, 32, 64, 128};
  std::int64_t replicates = 1;
  std::uint64_t seed = 1;
};

/// Stein bound versus N on Gaussian data. k_sqrt selects K = ceil(sqrt(N));
/// d_equals_n sets d = N.
struct SteinConfig {
  std::vector<std::size_t> nodes{200, 1000};
  std::size_t d = 100;
  bool d_equals_n = false;
  std::size_t k = 5;
  bool k_sqrt = false;
  Direction direction{0.5773502691896258, 0.5773502691896258, 0.5773502691896258};
  std::int64_t samples = 20000;
  std::int64_t replicates = 20;
  std::uint64_t seed = 1;
};

struct ExperimentResult {
  std::string kind;
  Json config;                       // resolved configuration echo
  std::vector<std::string> columns;  // CSV column order
  std::vector<Json> rows;            // one object per cell
  Json extras = Json::object();      // experiment-specific summary values
  std::int64_t trials = 0;
};

SizeConfig parse_size_config(const Json& j);
PowerConfig parse_power_config(const Json& j);
ValidityConfig parse_validity_config(const Json& j);
MaxDegreeConfig parse_max_degree_config(const Json& j);
SteinConfig parse_stein_config(const Json& j);

Json to_json(const SizeConfig& c);
Json to_json(const PowerConfig& c);
Json to_json(const ValidityConfig& c);
Json to_json(const MaxDegreeConfig& c);
Json to_json(const SteinConfig& c);

/// `workers` <= 0 selects default_workers(). Results do not depend on it.
ExperimentResult run_size_experiment(const SizeConfig& c, int workers = 0);
ExperimentResult run_power_experiment(const PowerConfig& c, int workers = 0);
ExperimentResult run_validity_experiment(const ValidityConfig& c, int workers = 0);
ExperimentResult run_max_degree_study(const MaxDegreeConfig& c, int workers = 0);
ExperimentResult run_stein_experiment(const SteinConfig& c, int workers = 0);

/// Dispatches on the "experiment" key (size, power, validity, max_degree, stein).
/// Throws ConfigError listing any keys the chosen experiment does not accept.
ExperimentResult run_experiment(const Json& config, int workers = 0);

/// EDGECOUNT_THREADS if set to a positive integer, otherwise the OpenMP default.
int default_workers();

struct PowerLawFit {
  double gamma = 0.0;
  double log_c = 0.0;
};
/// Least squares fit of log y = log c + gamma log x. Needs >= 2 distinct x > 0 and y > 0.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// CSV rendering of result rows in column order; strings are quoted only when needed.
std::string rows_to_csv(const ExperimentResult& r);

}  // namespace edgecount
