#include "edgecount/nulldist.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edgecount/errors.hpp"

namespace edgecount {

namespace {

using i128 = __int128;

void require_perm_sizes(const SampleSizes& sz) {
  if (sz.m < 2 || sz.n < 2)
    throw std::invalid_argument("permutation moments need m >= 2 and n >= 2 (got m=" + std::to_string(sz.m) +
                                ", n=" + std::to_string(sz.n) + ")");
}

// m(m-1)n(n-1) / (N(N-1)(N-2)(N-3)) as a product of ratios.
double four_ratio(double m, double n) {
  const double nn = m + n;
  return (m / nn) * ((m - 1) / (nn - 1)) * (n / (nn - 2)) * ((n - 1) / (nn - 3));
}

double safe_cov(double cov, double s1, double s2) {
  if (s1 == 0.0 || s2 == 0.0) return 0.0;
  return cov / (s1 * s2);
}

}  // namespace

PermNullMoments perm_moments(const DegreeStats& ds, const SampleSizes& sz) {
  require_perm_sizes(sz);
  const double m = static_cast<double>(sz.m);
  const double n = static_cast<double>(sz.n);
  const double nn = m + n;
  const double edges = static_cast<double>(ds.num_edges);
  const double c4 = four_ratio(m, n);

  PermNullMoments out;
  out.mu_w = ((n - 1) / (nn - 1)) * ((m - 1) / (nn - 2)) * edges;
  out.mu_d = (m - n) / nn * edges;

  const double var_d = c4 * ((m - 2) / (n - 1) + (n - 2) / (m - 1) + 2.0) * ds.v_g;
  out.sigma_d = std::sqrt(std::max(var_d, 0.0));

  const double radicand = edges * (1.0 - 2.0 * edges / (nn * (nn - 1))) - ds.v_g / (nn - 2);
  if (radicand < 0.0) {
    if (radicand < -1e-9 * std::max(edges, 1.0))
      throw InconsistencyError("negative variance radicand for R_w (" + std::to_string(radicand) +
                               "); graph and sample sizes are inconsistent");
    out.sigma_w_clipped = true;
  }
  const double var_w = c4 * std::max(radicand, 0.0);
  out.sigma_w = std::sqrt(var_w);

  const double slope = (m - n) / (nn - 2);
  out.mu_o = 2.0 * out.mu_w + slope * out.mu_d;
  out.sigma_o = std::sqrt(4.0 * var_w + slope * slope * var_d);
  return out;
}

BootNullMoments boot_moments(const DegreeStats& ds, const SampleSizes& sz) {
  if (sz.total() < 3 || sz.m < 1 || sz.n < 1) throw std::invalid_argument("bootstrap moments need N >= 3, m, n >= 1");
  const double m = static_cast<double>(sz.m);
  const double n = static_cast<double>(sz.n);
  const double nn = m + n;
  const double p = m / nn;
  const double q = n / nn;
  const double edges = static_cast<double>(ds.num_edges);
  const double t = static_cast<double>(ds.moment2);

  BootNullMoments out;
  out.mu_w_b = (m * n * nn - m * m - n * n) / (nn * nn * (nn - 2)) * edges;
  out.mu_d_b = (m - n) / nn * edges;
  out.sigma_d_b = std::sqrt(p * q * t);
  const double skew = (m - n) / (nn - 2);
  out.sigma_w_b = std::sqrt(p * p * q * q * edges + p * q / (nn * nn) * skew * skew * t);
  out.sigma_nx = std::sqrt(nn * p * q);

  out.cov_zw_zd = safe_cov(p * q * (n - m) / (nn - 2) * t / nn, out.sigma_w_b, out.sigma_d_b);
  out.cov_zw_zx = safe_cov(p * q * 2.0 * (n - m) / (nn - 2) * edges / nn, out.sigma_w_b, out.sigma_nx);
  out.cov_zd_zx = safe_cov(2.0 * p * q * edges, out.sigma_d_b, out.sigma_nx);
  return out;
}

R1R2Moments perm_r1r2_moments(const DegreeStats& ds, const SampleSizes& sz) {
  require_perm_sizes(sz);
  using ld = long double;
  const i128 m = sz.m;
  const i128 n = sz.n;
  const i128 nn = m + n;
  const ld edges = static_cast<ld>(ds.num_edges);
  const ld adjacent_pairs = static_cast<ld>(ds.moment2 - 2 * ds.num_edges) / 2;  // sum_i C(d_i, 2)

  const i128 fall2 = nn * (nn - 1);
  const i128 fall4 = fall2 * (nn - 2) * (nn - 3);
  auto ratio = [](i128 num, i128 den) { return static_cast<ld>(num) / static_cast<ld>(den); };

  // P(two given nodes both X), P(three given nodes X), P(four given nodes X),
  // and the excess of the four-node probability over the squared two-node one.
  auto within = [&](i128 k, ld& mean, ld& var) {
    const ld p1 = ratio(k * (k - 1), fall2);
    const ld p2 = ratio(k * (k - 1) * (k - 2), fall2 * (nn - 2));
    const ld p3 = ratio(k * (k - 1) * (k - 2) * (k - 3), fall4);
    const i128 excess_num = (k - 2) * (k - 3) * fall2 - k * (k - 1) * (nn - 2) * (nn - 3);
    const ld excess = p1 * ratio(excess_num, (nn - 2) * (nn - 3) * fall2);  // p3 - p1^2
    mean = edges * p1;
    var = edges * p1 + 2 * adjacent_pairs * p2 + edges * edges * excess - (edges + 2 * adjacent_pairs) * p3;
  };

  ld mean1, var1, mean2, var2;
  within(m, mean1, var1);
  within(n, mean2, var2);
  const ld q4 = ratio(m * (m - 1) * n * (n - 1), fall4);
  const ld cross_excess = ratio(m * (m - 1) * n * (n - 1) * (4 * nn - 6), fall2 * fall2 * (nn - 2) * (nn - 3));
  const ld cov = edges * edges * cross_excess - (edges + 2 * adjacent_pairs) * q4;

  return {static_cast<double>(mean1), static_cast<double>(mean2), static_cast<double>(var1),
          static_cast<double>(var2), static_cast<double>(cov)};
}

PermOracle brute_force_perm_oracle(const Graph& g, const SampleSizes& sz) {
  const std::int64_t total = sz.total();
  if (static_cast<std::size_t>(total) != g.num_nodes()) throw std::invalid_argument("m + n must equal N");
  if (total > 63) throw std::invalid_argument("permutation oracle limited to N <= 63");
  if (sz.m < 1 || sz.n < 1) throw std::invalid_argument("permutation oracle needs m, n >= 1");
  i128 count = 1;
  for (std::int64_t k = 1; k <= sz.m; ++k) {
    count = count * (total - sz.m + k) / k;
    if (count > 1'000'000) throw std::invalid_argument("permutation oracle refuses more than 1e6 assignments");
  }

  // Exact integer sums over all m-subsets (bit set = sample X).
  i128 s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  const std::uint64_t limit = std::uint64_t{1} << total;
  std::uint64_t mask = (std::uint64_t{1} << sz.m) - 1;
  while (mask < limit) {
    std::int64_t r1 = 0, r2 = 0;
    for (const auto& e : g.edges()) {
      const bool xu = (mask >> e.u) & 1u;
      const bool xv = (mask >> e.v) & 1u;
      r1 += xu && xv;
      r2 += !xu && !xv;
    }
    s1 += r1;
    s2 += r2;
    s11 += r1 * r1;
    s22 += r2 * r2;
    s12 += r1 * r2;
    // Next subset with the same popcount.
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }

  // Variances as exact numerators over count^2.
  const i128 v1 = count * s11 - s1 * s1;
  const i128 v2 = count * s22 - s2 * s2;
  const i128 c12 = count * s12 - s1 * s2;
  using ld = long double;
  const ld c2 = static_cast<ld>(count) * static_cast<ld>(count);
  const ld mean1 = static_cast<ld>(s1) / static_cast<ld>(count);
  const ld mean2 = static_cast<ld>(s2) / static_cast<ld>(count);

  const ld nn = static_cast<ld>(total);
  const ld a = static_cast<ld>(sz.n - 1) / (nn - 2);
  const ld b = static_cast<ld>(sz.m - 1) / (nn - 2);
  // (N-2)^2 Var(R_w) and (N-2) Cov(R_w, R_diff), still exact.
  const i128 var_w_num = (sz.n - 1) * (sz.n - 1) * v1 + (sz.m - 1) * (sz.m - 1) * v2 + 2 * (sz.n - 1) * (sz.m - 1) * c12;
  const i128 cov_wd_num = (sz.n - 1) * v1 - (sz.m - 1) * v2 + (sz.m - sz.n) * c12;

  PermOracle out;
  out.mean_r1 = static_cast<double>(mean1);
  out.r1r2 = {static_cast<double>(mean1), static_cast<double>(mean2), static_cast<double>(static_cast<ld>(v1) / c2),
              static_cast<double>(static_cast<ld>(v2) / c2), static_cast<double>(static_cast<ld>(c12) / c2)};
  auto& mo = out.moments;
  mo.mu_w = static_cast<double>(a * mean1 + b * mean2);
  mo.sigma_w = static_cast<double>(std::sqrt(static_cast<ld>(var_w_num) / c2) / (nn - 2));
  mo.mu_d = static_cast<double>(mean1 - mean2);
  mo.sigma_d = static_cast<double>(std::sqrt(static_cast<ld>(v1 + v2 - 2 * c12) / c2));
  mo.mu_o = static_cast<double>(mean1 + mean2);
  mo.sigma_o = static_cast<double>(std::sqrt(static_cast<ld>(v1 + v2 + 2 * c12) / c2));
  out.cov_rw_rd = static_cast<double>(static_cast<ld>(cov_wd_num) / c2 / (nn - 2));
  return out;
}

BootNullMoments brute_force_boot_oracle(const Graph& g, const SampleSizes& sz) {
  const std::int64_t total = sz.total();
  if (static_cast<std::size_t>(total) != g.num_nodes()) throw std::invalid_argument("m + n must equal N");
  if (total > 20) throw std::invalid_argument("bootstrap oracle limited to N <= 20");
  if (total < 3) throw std::invalid_argument("bootstrap oracle needs N >= 3");

  // Integer sums per popcount class; each assignment with k X-labels has
  // probability p^k q^(N-k).
  struct Sums {
    std::int64_t r1 = 0, r2 = 0, r11 = 0, r22 = 0, r12 = 0;
  };
  std::vector<Sums> by_k(static_cast<std::size_t>(total) + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    std::int64_t r1 = 0, r2 = 0;
    for (const auto& e : g.edges()) {
      const bool xu = (mask >> e.u) & 1u;
      const bool xv = (mask >> e.v) & 1u;
      r1 += xu && xv;
      r2 += !xu && !xv;
    }
    auto& s = by_k[static_cast<std::size_t>(std::popcount(mask))];
    s.r1 += r1;
    s.r2 += r2;
    s.r11 += r1 * r1;
    s.r22 += r2 * r2;
    s.r12 += r1 * r2;
  }

  using ld = long double;
  const ld p = static_cast<ld>(sz.m) / static_cast<ld>(total);
  const ld q = 1 - p;
  ld e1 = 0, e2 = 0, e11 = 0, e22 = 0, e12 = 0, ek = 0, ekk = 0, e1k = 0, e2k = 0;
  ld binom = 1;  // C(N, k)
  for (std::int64_t k = 0; k <= total; ++k) {
    const ld w = std::pow(p, static_cast<ld>(k)) * std::pow(q, static_cast<ld>(total - k));
    const auto& s = by_k[static_cast<std::size_t>(k)];
    const ld kk = static_cast<ld>(k);
    e1 += w * s.r1;
    e2 += w * s.r2;
    e11 += w * s.r11;
    e22 += w * s.r22;
    e12 += w * s.r12;
    e1k += w * s.r1 * kk;
    e2k += w * s.r2 * kk;
    ek += w * binom * kk;
    ekk += w * binom * kk * kk;
    binom = binom * static_cast<ld>(total - k) / static_cast<ld>(k + 1);
  }
  const ld v1 = e11 - e1 * e1;
  const ld v2 = e22 - e2 * e2;
  const ld c12 = e12 - e1 * e2;
  const ld vk = ekk - ek * ek;
  const ld c1k = e1k - e1 * ek;
  const ld c2k = e2k - e2 * ek;

  const ld nn = static_cast<ld>(total);
  const ld a = static_cast<ld>(sz.n - 1) / (nn - 2);
  const ld b = static_cast<ld>(sz.m - 1) / (nn - 2);
  const ld var_w = a * a * v1 + b * b * v2 + 2 * a * b * c12;
  const ld var_d = v1 + v2 - 2 * c12;
  const ld cov_wd = a * v1 - b * v2 + (b - a) * c12;
  const ld cov_wk = a * c1k + b * c2k;
  const ld cov_dk = c1k - c2k;

  auto root = [](ld v) { return static_cast<double>(std::sqrt(std::max<ld>(v, 0))); };
  BootNullMoments out;
  out.mu_w_b = static_cast<double>(a * e1 + b * e2);
  out.mu_d_b = static_cast<double>(e1 - e2);
  out.sigma_w_b = root(var_w);
  out.sigma_d_b = root(var_d);
  out.sigma_nx = root(vk);
  out.cov_zw_zd = safe_cov(static_cast<double>(cov_wd), out.sigma_w_b, out.sigma_d_b);
  out.cov_zw_zx = safe_cov(static_cast<double>(cov_wk), out.sigma_w_b, out.sigma_nx);
  out.cov_zd_zx = safe_cov(static_cast<double>(cov_dk), out.sigma_d_b, out.sigma_nx);
  return out;
}

}  // namespace edgecount
