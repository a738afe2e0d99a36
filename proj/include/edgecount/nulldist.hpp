#pragma once

#include <cstdint>

#include "edgecount/graph.hpp"

namespace edgecount {

struct SampleSizes {
  std::int64_t m = 0;  // sample X
  std::int64_t n = 0;  // sample Y

  std::int64_t total() const noexcept { return m + n; }
  double p() const noexcept { return static_cast<double>(m) / static_cast<double>(m + n); }
  double q() const noexcept { return static_cast<double>(n) / static_cast<double>(m + n); }
};

/// Moments of R_w, R_diff = R1 - R2 and R1 + R2 under the permutation null.
struct PermNullMoments {
  double mu_w = 0.0;
  double sigma_w = 0.0;
  double mu_d = 0.0;
  double sigma_d = 0.0;
  double mu_o = 0.0;
  double sigma_o = 0.0;
  bool sigma_w_clipped = false;  // radicand was slightly negative and set to zero
};

/// Moments under the bootstrap null (iid Bernoulli(m/N) labels).
struct BootNullMoments {
  double mu_w_b = 0.0;
  double sigma_w_b = 0.0;
  double mu_d_b = 0.0;
  double sigma_d_b = 0.0;
  double sigma_nx = 0.0;  // sd of the number of nodes labelled X, sqrt(Npq)
  double cov_zw_zd = 0.0;
  double cov_zw_zx = 0.0;
  double cov_zd_zx = 0.0;
};

/// Closed-form permutation moments. Requires m, n >= 2 (and so N >= 4).
/// The OET moments come from R1 + R2 = 2 R_w + ((m-n)/(N-2)) R_diff with
/// R_w and R_diff uncorrelated. Throws InconsistencyError if the R_w
/// variance radicand is below -1e-9 |G|.
PermNullMoments perm_moments(const DegreeStats& ds, const SampleSizes& sz);

/// Closed-form bootstrap moments. Requires N >= 3 and m, n >= 1.
BootNullMoments boot_moments(const DegreeStats& ds, const SampleSizes& sz);

/// Permutation mean vector and covariance matrix of (R1, R2), computed by
/// counting edge pairs (same edge, sharing one node, disjoint). This is the
/// route used by the quadratic-form generalized statistic.
struct R1R2Moments {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double var1 = 0.0;
  double var2 = 0.0;
  double cov12 = 0.0;
};
R1R2Moments perm_r1r2_moments(const DegreeStats& ds, const SampleSizes& sz);

/// Full-enumeration oracles for small graphs.
struct PermOracle {
  PermNullMoments moments;
  R1R2Moments r1r2;
  double cov_rw_rd = 0.0;
  double mean_r1 = 0.0;
};
/// Refuses (std::invalid_argument) when C(N, m) > 1e6 or N > 63.
PermOracle brute_force_perm_oracle(const Graph& g, const SampleSizes& sz);

/// Refuses (std::invalid_argument) when N > 20.
BootNullMoments brute_force_boot_oracle(const Graph& g, const SampleSizes& sz);

}  // namespace edgecount
