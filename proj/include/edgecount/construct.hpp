#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "edgecount/graph.hpp"

namespace edgecount {

/// n observations in d dimensions, row-major.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws std::invalid_argument on size mismatch, n < 2, d < 1 or non-finite values.
  PointCloud(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
};

/// Stacks the rows of a on top of the rows of b.
PointCloud pool(const PointCloud& a, const PointCloud& b);

/// Condensed upper-triangular pairwise distances; pair (i, j), i < j, lives at
/// i*(2n-i-1)/2 + (j-i-1), so index order equals lexicographic (i, j) order.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Throws std::invalid_argument if the array length is not n(n-1)/2 or any
  /// entry is negative or non-finite.
  DistanceMatrix(std::size_t n, std::vector<double> condensed);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_pairs() const noexcept { return values_.size(); }
  static std::size_t index(std::size_t n, std::size_t i, std::size_t j) noexcept {
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }
  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values_[index(n_, i, j)];
  }
  std::span<const double> condensed() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

DistanceMatrix euclidean_distances(const PointCloud& pc);

/// Union of K successive edge-disjoint minimum spanning trees. Each layer is a
/// Kruskal pass over the pairs not used by earlier layers, ties broken by
/// (smaller first node, smaller second node). Edges are stored layer by layer.
struct LayeredGraph {
  Graph graph;
  std::vector<std::size_t> layer_end;  // layer k occupies [layer_end[k-1], layer_end[k])
  std::size_t short_layers = 0;        // layers that could only form a spanning forest
};

/// Throws std::invalid_argument when K(N-1) > N(N-1)/2 or K == 0.
LayeredGraph kmst_layered(const DistanceMatrix& dm, std::size_t k);
inline Graph kmst(const DistanceMatrix& dm, std::size_t k) { return kmst_layered(dm, k).graph; }

/// Smallest K-MST with at least `target` edges, truncated to exactly `target`.
Graph kmst_of_size(const DistanceMatrix& dm, std::size_t target);

/// Edge (i,j) present iff j is among the K nearest neighbors of i or vice
/// versa. Distance ties go to the smaller node index. Edges sorted by (u, v).
Graph knng(const DistanceMatrix& dm, std::size_t k);

/// Keeps the first `target` edges. Throws std::invalid_argument if target > |G|.
Graph truncate_to_size(const Graph& g, std::size_t target);

enum class GenRule { i, ii, iii, iv, v, vi };

/// Roman numerals "i" .. "vi".
GenRule parse_gen_rule(std::string_view s);
std::string_view to_string(GenRule r);

/// Synthetic graphs for checking the chi-square approximation. Node 0 plays
/// the role of the hub in rules (i)/(ii); the hub size is ceil(N^alpha).
Graph gen_rule(GenRule rule, std::size_t n, double alpha, std::uint64_t seed);

/// ceil(N^alpha), guarded against floating error at exact integer powers.
std::size_t ceil_pow(std::size_t n, double alpha);

namespace serial {
DistanceMatrix euclidean_distances(const PointCloud& pc);
LayeredGraph kmst_layered(const DistanceMatrix& dm, std::size_t k);
}  // namespace serial

}  // namespace edgecount
