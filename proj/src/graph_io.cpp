#include "edgecount/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "edgecount/errors.hpp"

namespace edgecount {

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    if (!n) {
      std::string tag;
      long long count = -1;
      if (!(ls >> tag >> count) || tag != "N" || count <= 0)
        throw DataError("graph file line " + std::to_string(lineno) + ": expected header 'N <num_nodes>'");
      n = static_cast<std::size_t>(count);
      continue;
    }
    long long u = -1;
    long long v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0)
      throw DataError("graph file line " + std::to_string(lineno) + ": expected 'u v'");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    if (static_cast<std::size_t>(u) >= *n || static_cast<std::size_t>(v) >= *n)
      throw DataError("graph file line " + std::to_string(lineno) + ": node id out of range");
  }
  if (!n) throw DataError("graph file: missing 'N <num_nodes>' header");
  try {
    return Graph(*n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("graph file: ") + e.what());
  }
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file " + path.string());
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "N " << g.num_nodes() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_graph(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write graph file " + path.string());
  write_graph(out, g);
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labels file " + path.string());
  std::vector<int> labels;
  std::string tok;
  while (in >> tok) {
    if (tok == "1") labels.push_back(1);
    else if (tok == "2") labels.push_back(2);
    else throw DataError("labels file: unexpected token '" + tok + "' (labels must be 1 or 2)");
  }
  return labels;
}

}  // namespace edgecount
