#include "edgecount/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "edgecount/checked.hpp"

namespace edgecount {

using detail::checked_add;
using detail::checked_mul;

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (edges_.size() > UINT32_MAX) throw std::invalid_argument("too many edges");
  std::vector<std::size_t> deg(num_nodes_ + 1, 0);
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u >= num_nodes_ || e.v >= num_nodes_)
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(num_nodes_ + 1, 0);
  for (std::size_t i = 0; i < num_nodes_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];

  std::vector<std::pair<NodeId, std::uint32_t>> slots(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    slots[fill[e.u]++] = {e.v, id};
    slots[fill[e.v]++] = {e.u, id};
  }
  neighbors_.resize(slots.size());
  incident_.resize(slots.size());
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = slots.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last);
    for (auto it = first; it != last; ++it) {
      if (it != first && it->first == (it - 1)->first)
        throw std::invalid_argument("duplicate edge (" + std::to_string(std::min<std::size_t>(i, it->first)) + "," +
                                    std::to_string(std::max<std::size_t>(i, it->first)) + ")");
      const auto k = static_cast<std::size_t>(it - slots.begin());
      neighbors_[k] = it->first;
      incident_[k] = it->second;
    }
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (degree(a) > degree(b)) std::swap(a, b);
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw std::invalid_argument("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return Graph(g.num_nodes(), std::move(edges));
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats ds;
  const std::size_t n = g.num_nodes();
  ds.num_nodes = n;
  ds.num_edges = static_cast<std::int64_t>(g.num_edges());
  ds.degrees.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = static_cast<std::int64_t>(g.degree(static_cast<NodeId>(i)));
    ds.degrees[i] = d;
    ds.moment2 = checked_add(ds.moment2, checked_mul(d, d));
    ds.moment3 = checked_add(ds.moment3, checked_mul(checked_mul(d, d), d));
    ds.max_degree = std::max(ds.max_degree, d);
  }
  if (n == 0) return ds;

  // V_G = (N sum d^2 - 4|G|^2) / N with an exact integer numerator, so a
  // regular graph gives exactly zero.
  const std::int64_t nn = static_cast<std::int64_t>(n);
  const std::int64_t numer =
      checked_mul(nn, ds.moment2) - checked_mul(std::int64_t{4}, checked_mul(ds.num_edges, ds.num_edges));
  ds.v_g = static_cast<double>(numer) / static_cast<double>(n);

  const double mean = ds.mean_degree();
  ds.centered.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = static_cast<double>(ds.degrees[i]) - mean;
    ds.centered[i] = c;
    ds.abs_centered3 += std::abs(c) * c * c;
    ds.signed_centered3 += c * c * c;
    ds.max_abs_centered = std::max(ds.max_abs_centered, std::abs(c));
  }
  if (numer == 0) {
    // Regular: the float centered values are exactly zero as well.
    std::fill(ds.centered.begin(), ds.centered.end(), 0.0);
    ds.abs_centered3 = ds.signed_centered3 = ds.max_abs_centered = 0.0;
  }
  return ds;
}

std::int64_t common_neighbors(const Graph& g, NodeId i, NodeId j) {
  if (i == j) throw std::invalid_argument("common_neighbors requires i != j");
  if (i >= g.num_nodes() || j >= g.num_nodes()) throw std::invalid_argument("node out of range");
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::int64_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

namespace {

// Wedges i-k-j with j > i, counted per j; returns sum_j C(cnt_j, 2).
std::int64_t squares_from_node(const Graph& g, NodeId i, std::vector<std::int64_t>& cnt, std::vector<NodeId>& touched) {
  touched.clear();
  for (NodeId k : g.neighbors(i)) {
    for (NodeId j : g.neighbors(k)) {
      if (j <= i) continue;
      if (cnt[j]++ == 0) touched.push_back(j);
    }
  }
  std::int64_t total = 0;
  for (NodeId j : touched) {
    total = checked_add(total, cnt[j] * (cnt[j] - 1) / 2);
    cnt[j] = 0;
  }
  return total;
}

std::int64_t edges_touching(const Graph& g, std::span<const NodeId> nodes, std::vector<std::uint32_t>& stamp,
                            std::uint32_t mark) {
  std::int64_t count = 0;
  for (NodeId u : nodes) {
    for (std::uint32_t id : g.incident_edges(u)) {
      if (stamp[id] != mark) {
        stamp[id] = mark;
        ++count;
      }
    }
  }
  return count;
}

// |B_e| as the size of the union of edge sets incident to N(e+) and N(e-).
std::int64_t b_size(const Graph& g, const Edge& e, std::vector<std::uint32_t>& stamp, std::uint32_t mark) {
  return edges_touching(g, g.neighbors(e.u), stamp, mark) + edges_touching(g, g.neighbors(e.v), stamp, mark);
}

}  // namespace

std::int64_t count_squares(const Graph& g) {
  const auto n = static_cast<std::int64_t>(g.num_nodes());
  std::int64_t twice = 0;
#pragma omp parallel reduction(+ : twice)
  {
    std::vector<std::int64_t> cnt(g.num_nodes(), 0);
    std::vector<NodeId> touched;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) twice += squares_from_node(g, static_cast<NodeId>(i), cnt, touched);
  }
  return twice / 2;
}

std::int64_t serial::count_squares(const Graph& g) {
  std::vector<std::int64_t> cnt(g.num_nodes(), 0);
  std::vector<NodeId> touched;
  std::int64_t twice = 0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) twice = checked_add(twice, squares_from_node(g, i, cnt, touched));
  return twice / 2;
}

std::int64_t count_induced_squares(const Graph& g) {
  // Each induced 4-cycle has two non-adjacent diagonal pairs; count, for each
  // non-adjacent pair (i,j), the non-adjacent pairs among common neighbors.
  std::vector<std::int64_t> cnt(g.num_nodes(), 0);
  std::vector<NodeId> touched;
  std::vector<NodeId> common;
  std::int64_t twice = 0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    touched.clear();
    for (NodeId k : g.neighbors(i))
      for (NodeId j : g.neighbors(k))
        if (j > i && cnt[j]++ == 0) touched.push_back(j);
    for (NodeId j : touched) {
      const bool candidate = cnt[j] >= 2 && !g.has_edge(i, j);
      cnt[j] = 0;
      if (!candidate) continue;
      common.clear();
      auto a = g.neighbors(i);
      auto b = g.neighbors(j);
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      for (std::size_t x = 0; x < common.size(); ++x)
        for (std::size_t y = x + 1; y < common.size(); ++y)
          if (!g.has_edge(common[x], common[y])) ++twice;
    }
  }
  return twice / 2;
}

std::int64_t second_neighborhood_size(const Graph& g, NodeId i) {
  if (i >= g.num_nodes()) throw std::invalid_argument("node out of range");
  std::vector<std::uint32_t> stamp(g.num_edges(), 0);
  return edges_touching(g, g.neighbors(i), stamp, 1);
}

std::vector<EdgeNeighborhood> edge_neighborhood_sizes(const Graph& g) {
  const auto m = static_cast<std::int64_t>(g.num_edges());
  std::vector<EdgeNeighborhood> out(g.num_edges());
#pragma omp parallel
  {
    std::vector<std::uint32_t> stamp(g.num_edges(), 0);
    std::uint32_t mark = 0;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t id = 0; id < m; ++id) {
      const auto& e = g.edge(static_cast<std::size_t>(id));
      const auto a = static_cast<std::int64_t>(g.degree(e.u) + g.degree(e.v)) - 1;
      out[static_cast<std::size_t>(id)] = {a, b_size(g, e, stamp, ++mark)};
    }
  }
  return out;
}

std::vector<EdgeNeighborhood> serial::edge_neighborhood_sizes(const Graph& g) {
  std::vector<EdgeNeighborhood> out;
  out.reserve(g.num_edges());
  std::vector<std::uint32_t> stamp(g.num_edges(), 0);
  std::uint32_t mark = 0;
  for (const auto& e : g.edges()) {
    const auto a = static_cast<std::int64_t>(g.degree(e.u) + g.degree(e.v)) - 1;
    out.push_back({a, b_size(g, e, stamp, ++mark)});
  }
  return out;
}

double crosspair_sum(const Graph& g, const DegreeStats& ds) {
  double total = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double s = 0.0;
    double s2 = 0.0;
    for (NodeId j : g.neighbors(i)) {
      s += ds.centered[j];
      s2 += ds.centered[j] * ds.centered[j];
    }
    total += s * s - s2;
  }
  return total;
}

ConditionReport condition_report(const Graph& g, bool include_induced_squares) {
  if (g.num_edges() == 0) throw std::invalid_argument("condition report needs at least one edge");
  const DegreeStats ds = degree_stats(g);
  ConditionReport r;
  r.num_nodes = g.num_nodes();
  r.num_edges = ds.num_edges;
  r.v_g = ds.v_g;
  r.max_degree = ds.max_degree;
  r.squares = count_squares(g);
  if (include_induced_squares) r.squares_induced = count_induced_squares(g);

  const double edges = static_cast<double>(ds.num_edges);
  const double nodes = static_cast<double>(g.num_nodes());
  const double m2 = static_cast<double>(ds.moment2);
  r.crosspair = crosspair_sum(g, ds);

  r.c1_ratio_a = m2 / std::pow(edges, 1.5);
  r.c1_ratio_b = static_cast<double>(r.squares) / (edges * edges);
  if (ds.v_g > 0.0) {
    r.c2_ratio_a = ds.abs_centered3 / std::pow(ds.v_g, 1.5);
    r.c2_ratio_b = ds.signed_centered3 / (ds.v_g * std::sqrt(edges));
    r.c2_ratio_c = r.crosspair / (edges * ds.v_g);
    r.c3_ratio = ds.max_abs_centered * ds.max_abs_centered / ds.v_g;
  }
  const double t = edges + ds.v_g;
  r.c4_ratio_a = m2 / std::pow(t, 1.5);
  r.c4_ratio_b = ds.abs_centered3 / std::pow(t, 1.5);
  r.c4_ratio_c = r.crosspair / (t * t);

  std::uint64_t ae2 = 0;
  std::uint64_t aebe = 0;
  for (const auto& nb : edge_neighborhood_sizes(g)) {
    const auto a = static_cast<std::uint64_t>(nb.a);
    const auto b = static_cast<std::uint64_t>(nb.b);
    ae2 = checked_add(ae2, checked_mul(a, a));
    aebe = checked_add(aebe, checked_mul(a, b));
  }
  r.sum_ae2 = ae2;
  r.sum_aebe = aebe;
  r.legacy_ae2 = static_cast<double>(ae2) / (edges * std::sqrt(nodes));
  r.legacy_aebe = static_cast<double>(aebe) / std::pow(edges, 1.5);
  r.legacy_gi2_over_n = m2 / nodes;

  r.degree_mean = ds.mean_degree();
  r.degree_var = ds.v_g / nodes;
  r.degree_third_moment = static_cast<double>(ds.moment3) / nodes;
  return r;
}

}  // namespace edgecount
