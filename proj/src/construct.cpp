#include "edgecount/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <parallel/algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "edgecount/rng.hpp"

namespace edgecount {

PointCloud::PointCloud(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n < 2) throw std::invalid_argument("point cloud needs at least 2 observations");
  if (d < 1) throw std::invalid_argument("point cloud needs dimension >= 1");
  if (values_.size() != n * d) throw std::invalid_argument("point cloud value count does not match n*d");
  for (double x : values_)
    if (!std::isfinite(x)) throw std::invalid_argument("point cloud contains a non-finite value");
}

PointCloud pool(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("cannot pool samples of different dimension");
  std::vector<double> values(a.values().begin(), a.values().end());
  values.insert(values.end(), b.values().begin(), b.values().end());
  return PointCloud(a.size() + b.size(), a.dim(), std::move(values));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed) : n_(n), values_(std::move(condensed)) {
  if (n < 2) throw std::invalid_argument("distance matrix needs at least 2 points");
  if (values_.size() != n * (n - 1) / 2) throw std::invalid_argument("condensed distance array has wrong length");
  for (double x : values_)
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("distances must be finite and nonnegative");
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

void fill_row(const PointCloud& pc, std::size_t i, std::vector<double>& out) {
  const std::size_t n = pc.size();
  std::size_t base = DistanceMatrix::index(n, i, i + 1);
  for (std::size_t j = i + 1; j < n; ++j) out[base++] = std::sqrt(sq_dist(pc.row(i), pc.row(j)));
}

// Recover (i, j) from a condensed index.
std::pair<NodeId, NodeId> unrank_pair(std::size_t n, std::size_t idx) {
  const double nn = static_cast<double>(n);
  auto i = static_cast<std::size_t>(
      std::floor((2.0 * nn - 1.0 - std::sqrt((2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(idx))) / 2.0));
  auto row_start = [n](std::size_t r) { return r * (2 * n - r - 1) / 2; };
  while (i > 0 && row_start(i) > idx) --i;
  while (i + 1 < n && row_start(i + 1) <= idx) ++i;
  const std::size_t j = idx - row_start(i) + i + 1;
  return {static_cast<NodeId>(i), static_cast<NodeId>(j)};
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { reset(); }
  void reset() {
    std::iota(parent_.begin(), parent_.end(), 0u);
    std::fill(size_.begin(), size_.end(), 1u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

std::vector<std::uint32_t> sorted_pairs(const DistanceMatrix& dm, bool parallel) {
  if (dm.num_pairs() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("too many points for K-MST construction");
  std::vector<std::uint32_t> order(dm.num_pairs());
  std::iota(order.begin(), order.end(), 0u);
  const auto d = dm.condensed();
  auto less = [d](std::uint32_t a, std::uint32_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); };
  if (parallel)
    __gnu_parallel::sort(order.begin(), order.end(), less);
  else
    std::sort(order.begin(), order.end(), less);
  return order;
}

// Kruskal layers over the globally sorted pair list; stops after max_layers
// layers or once edge_target edges exist, whichever is first.
LayeredGraph kruskal_layers(const DistanceMatrix& dm, const std::vector<std::uint32_t>& order, std::size_t max_layers,
                            std::size_t edge_target) {
  const std::size_t n = dm.size();
  std::vector<std::uint8_t> used(order.size(), 0);  // indexed by position in `order`
  std::size_t first_unused = 0;
  DisjointSets sets(n);
  std::vector<Edge> edges;
  LayeredGraph out;
  while (out.layer_end.size() < max_layers && edges.size() < edge_target && first_unused < order.size()) {
    sets.reset();
    std::size_t added = 0;
    for (std::size_t pos = first_unused; pos < order.size() && added + 1 < n; ++pos) {
      if (used[pos]) continue;
      const auto [i, j] = unrank_pair(n, order[pos]);
      if (sets.unite(i, j)) {
        used[pos] = 1;
        edges.push_back({i, j});
        ++added;
      }
    }
    if (added + 1 < n) ++out.short_layers;
    out.layer_end.push_back(edges.size());
    while (first_unused < order.size() && used[first_unused]) ++first_unused;
  }
  out.graph = Graph(n, std::move(edges));
  return out;
}

void check_kmst_feasible(std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("K must be positive");
  if (n < 2) throw std::invalid_argument("K-MST needs at least 2 points");
  if (k * (n - 1) > n * (n - 1) / 2)
    throw std::invalid_argument("K-MST infeasible: K*(N-1) = " + std::to_string(k * (n - 1)) +
                                " exceeds N(N-1)/2 = " + std::to_string(n * (n - 1) / 2));
}

}  // namespace

DistanceMatrix euclidean_distances(const PointCloud& pc) {
  const std::size_t n = pc.size();
  std::vector<double> out(n * (n - 1) / 2);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < rows - 1; ++i) fill_row(pc, static_cast<std::size_t>(i), out);
  return DistanceMatrix(n, std::move(out));
}

DistanceMatrix serial::euclidean_distances(const PointCloud& pc) {
  const std::size_t n = pc.size();
  std::vector<double> out(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) fill_row(pc, i, out);
  return DistanceMatrix(n, std::move(out));
}

LayeredGraph kmst_layered(const DistanceMatrix& dm, std::size_t k) {
  check_kmst_feasible(dm.size(), k);
  return kruskal_layers(dm, sorted_pairs(dm, true), k, std::numeric_limits<std::size_t>::max());
}

LayeredGraph serial::kmst_layered(const DistanceMatrix& dm, std::size_t k) {
  check_kmst_feasible(dm.size(), k);
  return kruskal_layers(dm, sorted_pairs(dm, false), k, std::numeric_limits<std::size_t>::max());
}

Graph kmst_of_size(const DistanceMatrix& dm, std::size_t target) {
  if (target == 0) throw std::invalid_argument("target graph size must be positive");
  if (target > dm.num_pairs())
    throw std::invalid_argument("target graph size " + std::to_string(target) + " exceeds N(N-1)/2");
  auto layered = kruskal_layers(dm, sorted_pairs(dm, true), std::numeric_limits<std::size_t>::max(), target);
  return truncate_to_size(layered.graph, target);
}

Graph knng(const DistanceMatrix& dm, std::size_t k) {
  const std::size_t n = dm.size();
  if (k == 0 || k > n - 1) throw std::invalid_argument("K-NNG needs 1 <= K <= N-1");
  std::vector<std::vector<NodeId>> nearest(n);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<std::pair<double, NodeId>> cand;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      cand.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) cand.emplace_back(dm(i, j), static_cast<NodeId>(j));
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      for (std::size_t t = 0; t < k; ++t) nearest[i].push_back(cand[t].second);
    }
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (NodeId j : nearest[i]) edges.push_back({std::min<NodeId>(static_cast<NodeId>(i), j), std::max<NodeId>(static_cast<NodeId>(i), j)});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u < b.u || (a.u == b.u && a.v < b.v); });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(n, std::move(edges));
}

Graph truncate_to_size(const Graph& g, std::size_t target) {
  if (target > g.num_edges())
    throw std::invalid_argument("cannot truncate a graph with " + std::to_string(g.num_edges()) + " edges to " +
                                std::to_string(target));
  auto e = g.edges();
  return Graph(g.num_nodes(), std::vector<Edge>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(target)));
}

std::size_t ceil_pow(std::size_t n, double alpha) {
  const double p = std::pow(static_cast<double>(n), alpha);
  const double r = std::round(p);
  if (std::abs(p - r) <= 1e-9 * std::max(1.0, p)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(p));
}

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Distinct uniformly random pairs among nodes [lo, hi), appended in draw order.
void random_pairs(std::size_t count, NodeId lo, NodeId hi, Rng& rng, std::vector<Edge>& edges) {
  const std::size_t span = hi - lo;
  if (count > span * (span - 1) / 2)
    throw std::invalid_argument("requested " + std::to_string(count) + " random edges among " + std::to_string(span) +
                                " nodes, only " + std::to_string(span * (span - 1) / 2) + " pairs exist");
  std::uniform_int_distribution<NodeId> pick(lo, hi - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  while (seen.size() < count) {
    const NodeId a = pick(rng);
    const NodeId b = pick(rng);
    if (a == b || !seen.insert(pair_key(a, b)).second) continue;
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
}

void hub_edges(std::size_t n, std::size_t hub, Rng& rng, std::vector<Edge>& edges) {
  if (hub > n - 1) throw std::invalid_argument("hub size exceeds N-1");
  std::vector<NodeId> others(n - 1);
  std::iota(others.begin(), others.end(), 1u);
  std::shuffle(others.begin(), others.end(), rng);
  for (std::size_t t = 0; t < hub; ++t) edges.push_back({0, others[t]});
}

Graph gaussian_kmst(std::size_t n, std::size_t d, double alpha, Rng& rng) {
  std::normal_distribution<double> z;
  std::vector<double> values(n * d);
  for (double& x : values) x = z(rng);
  const std::size_t k = ceil_pow(n, alpha);
  return kmst(euclidean_distances(PointCloud(n, d, std::move(values))), k);
}

}  // namespace

GenRule parse_gen_rule(std::string_view s) {
  constexpr GenRule all[] = {GenRule::i, GenRule::ii, GenRule::iii, GenRule::iv, GenRule::v, GenRule::vi};
  for (GenRule r : all)
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown generating rule '" + std::string(s) + "' (expected i..vi)");
}

std::string_view to_string(GenRule r) {
  switch (r) {
    case GenRule::i: return "i";
    case GenRule::ii: return "ii";
    case GenRule::iii: return "iii";
    case GenRule::iv: return "iv";
    case GenRule::v: return "v";
    case GenRule::vi: return "vi";
  }
  return "?";
}

Graph gen_rule(GenRule rule, std::size_t n, double alpha, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("generating rules need N >= 4");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  Rng rng(seed);
  const std::size_t c = ceil_pow(n, alpha);
  const auto nn = static_cast<NodeId>(n);
  std::vector<Edge> edges;
  switch (rule) {
    case GenRule::i:
      hub_edges(n, c, rng, edges);
      random_pairs(n, 1, nn, rng, edges);
      break;
    case GenRule::ii:
      hub_edges(n, c, rng, edges);
      for (NodeId i = 1; i + 1 < nn; ++i) edges.push_back({i, i + 1});
      edges.push_back({1, nn - 1});
      break;
    case GenRule::iii: {
      const auto block = static_cast<NodeId>(c);
      if (block >= nn) throw std::invalid_argument("rule (iii) needs ceil(N^alpha) < N");
      for (NodeId i = 0; i < block; ++i)
        for (NodeId j = i + 1; j < block; ++j) edges.push_back({i, j});
      random_pairs(2 * (n - block), block, nn, rng, edges);
      std::uniform_int_distribution<NodeId> left(0, block - 1);
      std::uniform_int_distribution<NodeId> right(block, nn - 1);
      const NodeId a = left(rng);
      edges.push_back({a, right(rng)});
      break;
    }
    case GenRule::iv: {
      if (c >= n) throw std::invalid_argument("rule (iv) needs ceil(N^alpha) < N");
      std::unordered_set<std::uint64_t> seen;
      auto add = [&](NodeId a, NodeId b) {
        if (a != b && seen.insert(pair_key(a, b)).second) edges.push_back({std::min(a, b), std::max(a, b)});
      };
      for (NodeId i = 0; i < nn; ++i)
        for (std::size_t s = 1; s <= c; ++s) add(i, static_cast<NodeId>((i + s) % n));
      add(0, static_cast<NodeId>((1 + c) % n));
      break;
    }
    case GenRule::v:
      return gaussian_kmst(n, 2, alpha, rng);
    case GenRule::vi:
      return gaussian_kmst(n, 50, alpha, rng);
  }
  return Graph(n, std::move(edges));
}

}  // namespace edgecount
