#include <gtest/gtest.h>

#include <cmath>

#include "edgecount/errors.hpp"
#include "edgecount/nulldist.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

using namespace edgecount;
using namespace edgecount::testing;

namespace {

void expect_rel(double actual, double expected, double rel, const char* what) {
  EXPECT_NEAR(actual, expected, rel * std::max(1.0, std::abs(expected))) << what;
}

double safe_ratio(double c, double a, double b) { return (a > 0 && b > 0) ? c / (a * b) : 0.0; }

void check_perm(const Graph& g, std::int64_t m) {
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes()) - m;
  const SampleSizes sz{m, n};
  const auto ds = degree_stats(g);
  const auto mo = perm_moments(ds, sz);
  const auto ref = enumerate_permutation(g, m);
  expect_rel(mo.mu_w, ref.mean_w, 1e-10, "mu_w");
  expect_rel(mo.sigma_w * mo.sigma_w, ref.var_w, 1e-10, "var_w");
  expect_rel(mo.mu_d, ref.mean_d, 1e-10, "mu_d");
  expect_rel(mo.sigma_d * mo.sigma_d, ref.var_d, 1e-10, "var_d");
  expect_rel(mo.mu_o, ref.mean_o, 1e-10, "mu_o");
  expect_rel(mo.sigma_o * mo.sigma_o, ref.var_o, 1e-10, "var_o");
  EXPECT_NEAR(ref.cov_wd, 0.0, 1e-12);

  const auto r = perm_r1r2_moments(ds, sz);
  expect_rel(r.mean1, ref.mean_r1, 1e-10, "mean1");
  expect_rel(r.var1, ref.var_r1, 1e-10, "var1");
  expect_rel(r.var2, ref.var_r2, 1e-10, "var2");
  expect_rel(r.cov12, ref.cov_r12, 1e-10, "cov12");

  const auto bf = brute_force_perm_oracle(g, sz);
  expect_rel(bf.moments.sigma_w * bf.moments.sigma_w, mo.sigma_w * mo.sigma_w, 1e-10, "oracle var_w");
  expect_rel(bf.moments.sigma_d * bf.moments.sigma_d, mo.sigma_d * mo.sigma_d, 1e-10, "oracle var_d");
  EXPECT_NEAR(bf.cov_rw_rd, 0.0, 1e-12);
}

void check_boot(const Graph& g, std::int64_t m) {
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes()) - m;
  const SampleSizes sz{m, n};
  const auto bo = boot_moments(degree_stats(g), sz);
  const auto ref = enumerate_bootstrap(g, m);
  expect_rel(bo.mu_w_b, ref.mean_w, 1e-10, "mu_w_b");
  expect_rel(bo.sigma_w_b * bo.sigma_w_b, ref.var_w, 1e-10, "var_w_b");
  expect_rel(bo.mu_d_b, ref.mean_d, 1e-10, "mu_d_b");
  expect_rel(bo.sigma_d_b * bo.sigma_d_b, ref.var_d, 1e-10, "var_d_b");
  expect_rel(bo.sigma_nx * bo.sigma_nx, ref.var_nx, 1e-10, "var_nx");
  const double sw = std::sqrt(ref.var_w), sd = std::sqrt(ref.var_d), sx = std::sqrt(ref.var_nx);
  EXPECT_NEAR(bo.cov_zw_zd, safe_ratio(ref.cov_wd, sw, sd), 1e-10);
  EXPECT_NEAR(bo.cov_zw_zx, safe_ratio(ref.cov_w_nx, sw, sx), 1e-10);
  EXPECT_NEAR(bo.cov_zd_zx, safe_ratio(ref.cov_d_nx, sd, sx), 1e-10);
}

}  // namespace

TEST(PermMoments, EqualGroupsHaveZeroDiffMean) {
  const auto mo = perm_moments(degree_stats(random_graph(12, 0.4, 1)), {6, 6});
  EXPECT_EQ(mo.mu_d, 0.0);
}

TEST(PermMoments, RejectsSingletonGroups) {
  EXPECT_THROW(perm_moments(degree_stats(cycle_graph(6)), {1, 5}), std::invalid_argument);
  EXPECT_THROW(perm_moments(degree_stats(cycle_graph(6)), {5, 1}), std::invalid_argument);
}

TEST(PermMoments, SixCycleMatchesEnumeration) { check_perm(cycle_graph(6), 3); }

TEST(PermMoments, PathOfThreeOracleMean) {
  // Oracle only (m = 2, n = 1 is outside the closed-form domain).
  const auto bf = brute_force_perm_oracle(path_graph(3), {2, 1});
  EXPECT_NEAR(bf.mean_r1, 2.0 / 3.0, 1e-15);
}

TEST(PermMoments, CompleteGraphZeroCovariance) {
  const auto bf = brute_force_perm_oracle(complete_graph(4), {2, 2});
  EXPECT_NEAR(bf.cov_rw_rd, 0.0, 1e-12);
  EXPECT_NEAR(bf.r1r2.mean1, bf.r1r2.mean2, 1e-15);
}

TEST(PermMoments, MatchEnumerationOnNamedAndRandomGraphs) {
  std::vector<Graph> graphs = named_small_graphs();
  for (std::uint64_t s = 0; s < 25; ++s) graphs.push_back(random_graph(5 + s % 6, 0.5, 60 + s));
  for (const Graph& g : graphs) {
    if (g.num_edges() == 0) continue;
    const auto big_n = static_cast<std::int64_t>(g.num_nodes());
    for (std::int64_t m = 2; m <= big_n - 2; ++m) check_perm(g, m);
  }
}

TEST(PermMoments, RegularGraphHasZeroDiffSigma) {
  const auto mo = perm_moments(degree_stats(petersen_graph()), {4, 6});
  EXPECT_NEAR(mo.sigma_d, 0.0, 1e-12);
  const auto mo2 = perm_moments(degree_stats(path_graph(6)), {3, 3});
  EXPECT_GT(mo2.sigma_d, 0.0);
}

TEST(PermMoments, OracleGuard) {
  EXPECT_THROW(brute_force_perm_oracle(random_graph(64, 0.1, 1), {32, 32}), std::invalid_argument);
}

TEST(BootMoments, EqualGroupsZeroCovariances) {
  const auto bo = boot_moments(degree_stats(random_graph(10, 0.4, 2)), {5, 5});
  EXPECT_EQ(bo.cov_zw_zd, 0.0);
  EXPECT_EQ(bo.cov_zw_zx, 0.0);
}

TEST(BootMoments, SigmaNx) {
  EXPECT_DOUBLE_EQ(boot_moments(degree_stats(cycle_graph(4)), {2, 2}).sigma_nx, 1.0);
}

TEST(BootMoments, PathOfThreeAndSixCycle) {
  check_boot(path_graph(3), 1);
  check_boot(cycle_graph(6), 3);
}

TEST(BootMoments, MatchEnumeration) {
  std::vector<Graph> graphs = named_small_graphs();
  for (std::uint64_t s = 0; s < 15; ++s) graphs.push_back(random_graph(4 + s % 8, 0.45, 700 + s));
  for (const Graph& g : graphs) {
    if (g.num_edges() == 0) continue;
    const auto big_n = static_cast<std::int64_t>(g.num_nodes());
    for (std::int64_t m = 1; m <= big_n - 1; ++m) {
      check_boot(g, m);
      const auto bo = boot_moments(degree_stats(g), {m, big_n - m});
      EXPECT_DOUBLE_EQ(bo.sigma_d_b * bo.sigma_d_b,
                       static_cast<double>(m * (big_n - m)) / static_cast<double>(big_n * big_n) *
                           static_cast<double>(degree_stats(g).moment2));
    }
  }
}

TEST(BootMoments, LibraryOracleAgrees) {
  const Graph g = random_graph(11, 0.4, 5);
  const auto a = boot_moments(degree_stats(g), {4, 7});
  const auto b = brute_force_boot_oracle(g, {4, 7});
  EXPECT_NEAR(a.sigma_w_b, b.sigma_w_b, 1e-10);
  EXPECT_NEAR(a.cov_zd_zx, b.cov_zd_zx, 1e-10);
  EXPECT_THROW(brute_force_boot_oracle(random_graph(21, 0.2, 1), {10, 11}), std::invalid_argument);
}

TEST(BootMoments, DiffMeanEqualsPermutationDiffMean) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Graph g = random_graph(15, 0.3, s);
    for (std::int64_t m : {2, 5, 9}) {
      const SampleSizes sz{m, 15 - m};
      EXPECT_EQ(boot_moments(degree_stats(g), sz).mu_d_b, perm_moments(degree_stats(g), sz).mu_d);
    }
  }
}

TEST(BootMoments, EmptyGraph) {
  const auto ref = enumerate_bootstrap(Graph(6, {}), 2);
  EXPECT_EQ(ref.mean_w, 0.0);
  EXPECT_NEAR(ref.var_nx, 6.0 * (2.0 / 6.0) * (4.0 / 6.0), 1e-12);
  const auto bo = boot_moments(degree_stats(Graph(6, {})), {2, 4});
  EXPECT_EQ(bo.mu_w_b, 0.0);
  EXPECT_EQ(bo.sigma_w_b, 0.0);
}

TEST(PermMoments, LargeSizesStayFinite) {
  DegreeStats ds;
  ds.num_nodes = 100000;
  ds.num_edges = 500000;
  ds.moment2 = 11000000;
  ds.v_g = 1000000.0;
  const auto mo = perm_moments(ds, {40000, 60000});
  EXPECT_TRUE(std::isfinite(mo.sigma_w));
  EXPECT_TRUE(std::isfinite(mo.sigma_d));
  EXPECT_GT(mo.sigma_w, 0.0);
}
