#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "edgecount/graph.hpp"

namespace edgecount {

// Edge-list text format:
//   N <num_nodes>
//   u v
//   ...
// Blank lines and lines starting with '#' are ignored. Node ids are 0-based.
Graph read_graph(std::istream& in);
Graph read_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph(const std::filesystem::path& path, const Graph& g);

// Labels: whitespace-separated values in {1, 2}, one per node.
std::vector<int> read_labels(const std::filesystem::path& path);

}  // namespace edgecount
