#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "edgecount/graph.hpp"
#include "edgecount/nulldist.hpp"

namespace edgecount {

using Direction = std::array<double, 3>;  // (a1, a2, a3)

/// Coefficients of W = sum_e b0 h(e+) h(e-) + sum_i b_i h(i), where
/// h(i) = 1{node i in sample X} - p under the bootstrap null.
struct SteinCoefficients {
  Direction a{};
  double b0 = 0.0;
  std::vector<double> b;
};

/// Throws std::invalid_argument if a is the zero vector, if sigma_w^B == 0
/// while a1 != 0, or if V_G == 0 while a2 != 0.
SteinCoefficients stein_coefficients(const DegreeStats& ds, const SampleSizes& sz, const Direction& a);

/// Closed-form bootstrap variance of W:
///   a1^2 + a2^2 + a3^2
///   + 4 a1 a3 sqrt(pq) (n-m)/(N-2) |G| / (N^1.5 sigma_w^B)
///   + 2 a1 a2 sqrt(pq) (n-m)/(N-2) sqrt(V_G) / (N sigma_w^B).
double var_b_w(const DegreeStats& ds, const SampleSizes& sz, const Direction& a);

/// Var(W) = b0^2 |G| p^2 q^2 + pq sum b_i^2, valid because the summands of W
/// are pairwise uncorrelated.
double var_w_from_coefficients(const SteinCoefficients& c, const SampleSizes& sz, std::int64_t num_edges);

struct SteinBoundEstimate {
  double var_w = 0.0;     // closed form
  double term_a1 = 0.0;   // E|sum (xi_i eta_i - E) + sum (xi_e eta_e - E)|
  double term_a2 = 0.0;   // sum_i E|xi_i| eta_i^2
  double term_a3 = 0.0;   // sum_e E|xi_e| eta_e^2
  double bound = 0.0;     // sqrt(2/pi) A1 / var + (A2 + A3) / var^1.5
  double mc_se = 0.0;     // standard error of term_a1
  double se_a2 = 0.0;
  double se_a3 = 0.0;
  double w_mean = 0.0;    // Monte Carlo mean and variance of W itself
  double w_var = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

double assemble_bound(double term_a1, double term_a2, double term_a3, double var_w);

/// Per-assignment quantities for a fixed labelling x (1 = sample X).
struct SteinTerms {
  std::vector<double> xi_eta_node;   // xi_i eta_i
  std::vector<double> xi_eta_edge;   // xi_e eta_e, in edge order
  double centered_sum = 0.0;         // summand of the A1 expectation (before |.|)
  double a2_sum = 0.0;               // sum_i |xi_i| eta_i^2
  double a3_sum = 0.0;               // sum_e |xi_e| eta_e^2
  double w = 0.0;
};
SteinTerms stein_terms(const Graph& g, const SteinCoefficients& c, double p, std::span<const std::uint8_t> x);

/// Monte Carlo estimate over iid Bernoulli(p) labellings. Sample s uses the
/// stream derive_seed(seed, s); sums are taken in sample order, so the result
/// does not depend on the thread count. Requires n_samples >= 1000.
SteinBoundEstimate mc_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a, std::int64_t n_samples,
                                  std::uint64_t seed);

/// Exact expectation over all 2^N labellings. Refuses N > 20.
SteinBoundEstimate exact_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a);

/// Monte Carlo mean and standard error of xi_i eta_i for every node, for
/// comparison against the analytic value b_i^2 pq.
struct NodeProductEstimate {
  std::vector<double> mean;
  std::vector<double> se;
  std::vector<double> analytic;
};
NodeProductEstimate mc_node_products(const Graph& g, const SampleSizes& sz, const Direction& a,
                                     std::int64_t n_samples, std::uint64_t seed);

namespace serial {
SteinBoundEstimate mc_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a, std::int64_t n_samples,
                                  std::uint64_t seed);
}  // namespace serial

}  // namespace edgecount
