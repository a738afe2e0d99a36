#include "edgecount/stein.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "edgecount/rng.hpp"

namespace edgecount {

SteinCoefficients stein_coefficients(const DegreeStats& ds, const SampleSizes& sz, const Direction& a) {
  if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) throw std::invalid_argument("direction (a1, a2, a3) must be nonzero");
  const double nn = static_cast<double>(sz.total());
  const double p = sz.p();
  const double q = sz.q();
  const double edges = static_cast<double>(ds.num_edges);

  double sigma_wb = 0.0;
  if (a[0] != 0.0) {
    sigma_wb = boot_moments(ds, sz).sigma_w_b;
    if (!(sigma_wb > 0.0)) throw std::invalid_argument("sigma_w^B is zero; a1 must be 0 for this graph");
  }
  if (a[1] != 0.0 && !(ds.v_g > 0.0)) throw std::invalid_argument("V_G is zero (regular graph); a2 must be 0");

  SteinCoefficients c;
  c.a = a;
  c.b0 = a[0] != 0.0 ? a[0] / sigma_wb : 0.0;
  c.b.resize(ds.num_nodes);
  const double k2 = a[1] != 0.0 ? a[1] / std::sqrt(p * q * ds.v_g) : 0.0;
  const double k1 = a[0] != 0.0 ? a[0] * (p - q) / (sigma_wb * (nn - 2)) : 0.0;
  const double k3 = a[2] / std::sqrt(p * q * nn);
  for (std::size_t i = 0; i < ds.num_nodes; ++i) {
    const double deg = static_cast<double>(ds.degrees[i]);
    c.b[i] = k2 * (deg - 2.0 * edges / nn) - k1 * deg + k3;
  }
  return c;
}

double var_b_w(const DegreeStats& ds, const SampleSizes& sz, const Direction& a) {
  const double nn = static_cast<double>(sz.total());
  const double spq = std::sqrt(sz.p() * sz.q());
  const double skew = static_cast<double>(sz.n - sz.m) / (nn - 2);
  double v = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
  if (a[0] != 0.0 && skew != 0.0) {
    const double sigma_wb = boot_moments(ds, sz).sigma_w_b;
    if (!(sigma_wb > 0.0)) throw std::invalid_argument("sigma_w^B is zero");
    const double edges = static_cast<double>(ds.num_edges);
    v += 4.0 * a[0] * a[2] * spq * skew * edges / (std::pow(nn, 1.5) * sigma_wb);
    v += 2.0 * a[0] * a[1] * spq * skew * std::sqrt(ds.v_g) / (sigma_wb * nn);
  }
  return v;
}

double var_w_from_coefficients(const SteinCoefficients& c, const SampleSizes& sz, std::int64_t num_edges) {
  const double pq = sz.p() * sz.q();
  double s = 0.0;
  for (double bi : c.b) s += bi * bi;
  return c.b0 * c.b0 * static_cast<double>(num_edges) * pq * pq + pq * s;
}

double assemble_bound(double term_a1, double term_a2, double term_a3, double var_w) {
  return std::sqrt(2.0 / std::numbers::pi) * term_a1 / var_w + (term_a2 + term_a3) / std::pow(var_w, 1.5);
}

namespace {

struct SampleSums {
  double centered = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double w = 0.0;
};

// Scratch buffers for one evaluation: h(i) and S_i = sum of xi_e over edges at i.
struct Workspace {
  std::vector<double> h;
  std::vector<double> s;
  std::vector<std::uint8_t> x;
  explicit Workspace(std::size_t n) : h(n), s(n), x(n) {}
};

// Sum of the analytic centering constants E(xi_i eta_i) = b_i^2 pq and
// E(xi_e eta_e) = b0^2 p^2 q^2.
double centering_total(const SteinCoefficients& c, double p, std::size_t num_edges) {
  const double pq = p * (1.0 - p);
  double t = 0.0;
  for (double bi : c.b) t += bi * bi * pq;
  return t + static_cast<double>(num_edges) * c.b0 * c.b0 * pq * pq;
}

// O(N + |G|) evaluation. eta_e = xi_{e+} + xi_{e-} + S_{e+} + S_{e-} - xi_e since
// A_e counts e once while S_{e+} and S_{e-} both contain it.
SampleSums evaluate(const Graph& g, const SteinCoefficients& c, double p, double centering, Workspace& ws,
                    std::vector<double>* node_products = nullptr, std::vector<double>* edge_products = nullptr) {
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    ws.h[i] = (ws.x[i] ? 1.0 : 0.0) - p;
    ws.s[i] = 0.0;
  }
  SampleSums out;
  double xe_sum = 0.0;
  for (const auto& e : g.edges()) {
    const double xe = c.b0 * ws.h[e.u] * ws.h[e.v];
    ws.s[e.u] += xe;
    ws.s[e.v] += xe;
    xe_sum += xe;
  }
  double prod_sum = 0.0;
  double xi_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = c.b[i] * ws.h[i];
    const double eta = xi + ws.s[i];
    prod_sum += xi * eta;
    out.a2 += std::abs(xi) * eta * eta;
    xi_sum += xi;
    if (node_products) (*node_products)[i] = xi * eta;
  }
  const auto& edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const double xe = c.b0 * ws.h[e.u] * ws.h[e.v];
    const double eta = c.b[e.u] * ws.h[e.u] + c.b[e.v] * ws.h[e.v] + ws.s[e.u] + ws.s[e.v] - xe;
    prod_sum += xe * eta;
    out.a3 += std::abs(xe) * eta * eta;
    if (edge_products) (*edge_products)[k] = xe * eta;
  }
  out.centered = prod_sum - centering;
  out.w = xe_sum + xi_sum;
  return out;
}

void draw_labels(std::uint64_t seed, std::int64_t s, double p, std::vector<std::uint8_t>& x) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
  std::bernoulli_distribution coin(p);
  for (auto& xi : x) xi = coin(rng) ? 1 : 0;
}

void check_mc_args(const Graph& g, const SampleSizes& sz, std::int64_t n_samples) {
  if (static_cast<std::size_t>(sz.total()) != g.num_nodes()) throw std::invalid_argument("m + n must equal N");
  if (n_samples < 1000) throw std::invalid_argument("Stein bound estimation needs at least 1000 samples");
}

SteinBoundEstimate summarize(const std::vector<SampleSums>& samples, double var_w, std::uint64_t seed) {
  const double cnt = static_cast<double>(samples.size());
  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0, s3 = 0, s3sq = 0, sw = 0, swsq = 0;
  for (const auto& v : samples) {
    const double a = std::abs(v.centered);
    s1 += a;
    s1sq += a * a;
    s2 += v.a2;
    s2sq += v.a2 * v.a2;
    s3 += v.a3;
    s3sq += v.a3 * v.a3;
    sw += v.w;
    swsq += v.w * v.w;
  }
  auto se = [cnt](double sum, double sumsq) {
    const double mean = sum / cnt;
    const double var = std::max(0.0, (sumsq - cnt * mean * mean) / (cnt - 1));
    return std::sqrt(var / cnt);
  };
  SteinBoundEstimate est;
  est.var_w = var_w;
  est.term_a1 = s1 / cnt;
  est.term_a2 = s2 / cnt;
  est.term_a3 = s3 / cnt;
  est.mc_se = se(s1, s1sq);
  est.se_a2 = se(s2, s2sq);
  est.se_a3 = se(s3, s3sq);
  est.w_mean = sw / cnt;
  est.w_var = (swsq - cnt * est.w_mean * est.w_mean) / (cnt - 1);
  est.bound = assemble_bound(est.term_a1, est.term_a2, est.term_a3, var_w);
  est.n_samples = static_cast<std::int64_t>(samples.size());
  est.seed = seed;
  return est;
}

struct Prepared {
  SteinCoefficients coef;
  double var_w;
  double centering;
};

Prepared prepare(const Graph& g, const SampleSizes& sz, const Direction& a) {
  const auto ds = degree_stats(g);
  Prepared pr{stein_coefficients(ds, sz, a), var_b_w(ds, sz, a), 0.0};
  if (!(pr.var_w > 0.0)) throw std::invalid_argument("Var_B(W) is not positive for this direction");
  pr.centering = centering_total(pr.coef, sz.p(), g.num_edges());
  return pr;
}

}  // namespace

SteinTerms stein_terms(const Graph& g, const SteinCoefficients& c, double p, std::span<const std::uint8_t> x) {
  if (x.size() != g.num_nodes() || c.b.size() != g.num_nodes())
    throw std::invalid_argument("labelling and coefficients must have one entry per node");
  Workspace ws(g.num_nodes());
  std::copy(x.begin(), x.end(), ws.x.begin());
  SteinTerms t;
  t.xi_eta_node.resize(g.num_nodes());
  t.xi_eta_edge.resize(g.num_edges());
  const auto sums = evaluate(g, c, p, centering_total(c, p, g.num_edges()), ws, &t.xi_eta_node, &t.xi_eta_edge);
  t.centered_sum = sums.centered;
  t.a2_sum = sums.a2;
  t.a3_sum = sums.a3;
  t.w = sums.w;
  return t;
}

SteinBoundEstimate mc_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a, std::int64_t n_samples,
                                  std::uint64_t seed) {
  check_mc_args(g, sz, n_samples);
  const auto pr = prepare(g, sz, a);
  const double p = sz.p();
  std::vector<SampleSums> samples(static_cast<std::size_t>(n_samples));
#pragma omp parallel
  {
    Workspace ws(g.num_nodes());
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < n_samples; ++s) {
      draw_labels(seed, s, p, ws.x);
      samples[static_cast<std::size_t>(s)] = evaluate(g, pr.coef, p, pr.centering, ws);
    }
  }
  return summarize(samples, pr.var_w, seed);
}

SteinBoundEstimate serial::mc_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a,
                                          std::int64_t n_samples, std::uint64_t seed) {
  check_mc_args(g, sz, n_samples);
  const auto pr = prepare(g, sz, a);
  const double p = sz.p();
  std::vector<SampleSums> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  Workspace ws(g.num_nodes());
  for (std::int64_t s = 0; s < n_samples; ++s) {
    draw_labels(seed, s, p, ws.x);
    samples.push_back(evaluate(g, pr.coef, p, pr.centering, ws));
  }
  return summarize(samples, pr.var_w, seed);
}

SteinBoundEstimate exact_stein_bound(const Graph& g, const SampleSizes& sz, const Direction& a) {
  const std::size_t n = g.num_nodes();
  if (n > 20) throw std::invalid_argument("exact Stein enumeration is limited to N <= 20");
  if (static_cast<std::size_t>(sz.total()) != n) throw std::invalid_argument("m + n must equal N");
  const auto pr = prepare(g, sz, a);
  const double p = sz.p();
  const double q = sz.q();
  Workspace ws(n);
  double e1 = 0, e2 = 0, e3 = 0, ew = 0, ew2 = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ws.x[i] = (mask >> i) & 1U;
      k += ws.x[i];
    }
    const double weight = std::pow(p, k) * std::pow(q, static_cast<double>(n) - k);
    const auto v = evaluate(g, pr.coef, p, pr.centering, ws);
    e1 += weight * std::abs(v.centered);
    e2 += weight * v.a2;
    e3 += weight * v.a3;
    ew += weight * v.w;
    ew2 += weight * v.w * v.w;
  }
  SteinBoundEstimate est;
  est.var_w = pr.var_w;
  est.term_a1 = e1;
  est.term_a2 = e2;
  est.term_a3 = e3;
  est.w_mean = ew;
  est.w_var = ew2 - ew * ew;
  est.bound = assemble_bound(e1, e2, e3, pr.var_w);
  return est;
}

NodeProductEstimate mc_node_products(const Graph& g, const SampleSizes& sz, const Direction& a,
                                     std::int64_t n_samples, std::uint64_t seed) {
  check_mc_args(g, sz, n_samples);
  const auto pr = prepare(g, sz, a);
  const double p = sz.p();
  const std::size_t n = g.num_nodes();
  // Fixed-size blocks combined in block order keep the result independent of
  // the number of threads.
  constexpr std::int64_t block = 1024;
  const std::int64_t n_blocks = (n_samples + block - 1) / block;
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(n_blocks), std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> sqs(static_cast<std::size_t>(n_blocks), std::vector<double>(n, 0.0));
#pragma omp parallel
  {
    Workspace ws(n);
    std::vector<double> prod(n);
#pragma omp for schedule(dynamic)
    for (std::int64_t bk = 0; bk < n_blocks; ++bk) {
      auto& sum = sums[static_cast<std::size_t>(bk)];
      auto& sq = sqs[static_cast<std::size_t>(bk)];
      const std::int64_t end = std::min(n_samples, (bk + 1) * block);
      for (std::int64_t s = bk * block; s < end; ++s) {
        draw_labels(seed, s, p, ws.x);
        evaluate(g, pr.coef, p, pr.centering, ws, &prod);
        for (std::size_t i = 0; i < n; ++i) {
          sum[i] += prod[i];
          sq[i] += prod[i] * prod[i];
        }
      }
    }
  }
  NodeProductEstimate out;
  out.mean.assign(n, 0.0);
  out.se.assign(n, 0.0);
  out.analytic.resize(n);
  std::vector<double> sq_total(n, 0.0);
  for (std::int64_t bk = 0; bk < n_blocks; ++bk) {
    for (std::size_t i = 0; i < n; ++i) {
      out.mean[i] += sums[static_cast<std::size_t>(bk)][i];
      sq_total[i] += sqs[static_cast<std::size_t>(bk)][i];
    }
  }
  const double cnt = static_cast<double>(n_samples);
  const double pq = p * sz.q();
  for (std::size_t i = 0; i < n; ++i) {
    out.mean[i] /= cnt;
    const double var = std::max(0.0, (sq_total[i] - cnt * out.mean[i] * out.mean[i]) / (cnt - 1));
    out.se[i] = std::sqrt(var / cnt);
    out.analytic[i] = pr.coef.b[i] * pr.coef.b[i] * pq;
  }
  return out;
}

}  // namespace edgecount
