#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace edgecount {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;  // u < v after normalization
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph.
///
/// The edge list keeps construction order (K-MST layers are appended in
/// order, and truncation relies on that). Adjacency is derived: for every
/// node a sorted neighbor list and, aligned with it, the id of the edge
/// joining the node to that neighbor.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges (in either
  /// orientation) or node ids outside [0, num_nodes).
  Graph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }

  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], degree(i)};
  }
  /// Edge ids incident to i, aligned with neighbors(i).
  std::span<const std::uint32_t> incident_edges(NodeId i) const {
    return {incident_.data() + offsets_[i], degree(i)};
  }
  bool has_edge(NodeId a, NodeId b) const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<std::uint32_t> incident_;
};

/// Relabels node i as perm[i]; edge order is kept.
Graph relabel(const Graph& g, std::span<const NodeId> perm);

struct DegreeStats {
  std::vector<std::int64_t> degrees;  // |G_i|
  std::int64_t num_edges = 0;         // |G|
  std::size_t num_nodes = 0;
  std::vector<double> centered;       // |G_i| - 2|G|/N
  double v_g = 0.0;                   // sum of centered^2, exact-numerator evaluation
  std::int64_t moment2 = 0;           // sum |G_i|^2
  std::int64_t moment3 = 0;           // sum |G_i|^3
  double abs_centered3 = 0.0;
  double signed_centered3 = 0.0;
  std::int64_t max_degree = 0;
  double max_abs_centered = 0.0;

  double mean_degree() const { return 2.0 * static_cast<double>(num_edges) / static_cast<double>(num_nodes); }
  bool regular() const { return v_g == 0.0; }
};

DegreeStats degree_stats(const Graph& g);

/// N_{i,j}: nodes adjacent to both i and j. Throws std::invalid_argument for i == j.
std::int64_t common_neighbors(const Graph& g, NodeId i, NodeId j);

/// Number of 4-cycles (unordered vertex cycles), (1/2) sum_{i<j} C(N_ij, 2).
std::int64_t count_squares(const Graph& g);
/// 4-cycles without either chord. Informational only.
std::int64_t count_induced_squares(const Graph& g);

/// |G_{i,2}|: edges with at least one endpoint adjacent to i.
std::int64_t second_neighborhood_size(const Graph& g, NodeId i);

struct EdgeNeighborhood {
  std::int64_t a;  // |A_e|
  std::int64_t b;  // |B_e|
};
std::vector<EdgeNeighborhood> edge_neighborhood_sizes(const Graph& g);

/// sum_i sum_{j != k in node_{G_i}} d~_j d~_k.
double crosspair_sum(const Graph& g, const DegreeStats& ds);

struct ConditionReport {
  std::size_t num_nodes = 0;
  std::int64_t num_edges = 0;
  double v_g = 0.0;
  std::int64_t squares = 0;                  // all 4-cycles
  std::optional<std::int64_t> squares_induced;
  std::int64_t max_degree = 0;

  // Edge concentration.
  double c1_ratio_a = 0.0;  // sum|G_i|^2 / |G|^1.5
  double c1_ratio_b = 0.0;  // N_sq / |G|^2
  // Degree-variability ratios need V_G > 0; empty when the graph is regular.
  std::optional<double> c2_ratio_a;  // sum|d~|^3 / V_G^1.5
  std::optional<double> c2_ratio_b;  // sum d~^3 / (V_G sqrt|G|)
  std::optional<double> c2_ratio_c;  // crosspair / (|G| V_G)
  std::optional<double> c3_ratio;    // max d~^2 / V_G
  // Combined ratios with T = |G| + V_G
  double c4_ratio_a = 0.0;  // sum|G_i|^2 / T^1.5
  double c4_ratio_b = 0.0;  // sum|d~|^3 / T^1.5
  double c4_ratio_c = 0.0;  // crosspair / T^2
  // Older sufficient conditions.
  double legacy_ae2 = 0.0;        // sum|A_e|^2 / (|G| sqrt N)
  double legacy_aebe = 0.0;       // sum|A_e||B_e| / |G|^1.5
  double legacy_gi2_over_n = 0.0; // sum|G_i|^2 / N
  double crosspair = 0.0;
  std::uint64_t sum_ae2 = 0;
  std::uint64_t sum_aebe = 0;
  // Degree distribution Q_G.
  double degree_mean = 0.0;
  double degree_var = 0.0;
  double degree_third_moment = 0.0;
};

/// Throws std::invalid_argument for graphs without edges.
ConditionReport condition_report(const Graph& g, bool include_induced_squares = false);

/// Serial reference versions of the parallel kernels above.
namespace serial {
std::int64_t count_squares(const Graph& g);
std::vector<EdgeNeighborhood> edge_neighborhood_sizes(const Graph& g);
}  // namespace serial

}  // namespace edgecount
