#include "edgecount/data_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "edgecount/errors.hpp"

namespace edgecount {

namespace {

static_assert(std::endian::native == std::endian::little, "binary distance I/O assumes a little-endian host");

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

}  // namespace

PointCloud read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  char delim = 0;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> values;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (delim == 0) delim = view.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto cells = split(view, delim);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size() && numeric; ++c) numeric = parse_double(cells[c], row[c]);
    if (first_row) {
      first_row = false;
      cols = cells.size();
      if (!numeric) continue;  // header
    }
    if (!numeric) throw DataError("CSV line " + std::to_string(lineno) + ": non-numeric cell");
    if (cells.size() != cols)
      throw DataError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " columns, found " +
                      std::to_string(cells.size()));
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows < 2) throw DataError("CSV needs at least two observations");
  try {
    return PointCloud(rows, cols, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("CSV: ") + e.what());
  }
}

PointCloud read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file " + path.string());
  try {
    return read_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv(std::ostream& out, const PointCloud& pc) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf.precision(17);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    auto row = pc.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) buf << (k ? "," : "") << row[k];
    buf << '\n';
  }
  out << buf.str();
}

DistanceMatrix read_distances(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open distance file " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  try {
    if (in.gcount() == 4 && std::memcmp(magic, "EDM1", 4) == 0) {
      std::uint64_t n = 0;
      in.read(reinterpret_cast<char*>(&n), sizeof n);
      if (!in || n < 2 || n > (1u << 20)) throw DataError("distance file: bad point count");
      std::vector<double> values(n * (n - 1) / 2);
      in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
      if (!in) throw DataError("distance file: truncated payload");
      return DistanceMatrix(n, std::move(values));
    }
    in.clear();
    in.seekg(0);
    in.imbue(std::locale::classic());
    std::size_t n = 0;
    if (!(in >> n) || n < 2) throw DataError("distance file: expected point count");
    std::vector<double> values(n * (n - 1) / 2);
    for (double& v : values)
      if (!(in >> v)) throw DataError("distance file: expected " + std::to_string(values.size()) + " values");
    return DistanceMatrix(n, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("distance file: ") + e.what());
  }
}

void write_distances_binary(const std::filesystem::path& path, const DistanceMatrix& dm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  const std::uint64_t n = dm.size();
  out.write("EDM1", 4);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(dm.condensed().data()),
            static_cast<std::streamsize>(dm.num_pairs() * sizeof(double)));
}

void write_distances_text(const std::filesystem::path& path, const DistanceMatrix& dm) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.imbue(std::locale::classic());
  out.precision(17);
  out << dm.size() << '\n';
  for (double v : dm.condensed()) out << v << '\n';
}

}  // namespace edgecount
