#pragma once

#include <filesystem>
#include <iosfwd>

#include "edgecount/construct.hpp"

namespace edgecount {

/// One observation per row. The delimiter (comma or tab) is detected from the
/// first data line; a first row that does not parse as numbers is treated as
/// a header. Parsing is locale-independent. Throws DataError on ragged rows,
/// unparsable cells or fewer than two observations.
PointCloud read_csv(std::istream& in);
PointCloud read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const PointCloud& pc);

/// Condensed distance file. Binary: magic "EDM1", little-endian u64 N, then
/// N(N-1)/2 little-endian f64 values in row-major upper-triangle order.
/// Text: first token N, then the same N(N-1)/2 values, whitespace separated.
/// read_distances detects the binary form by its magic bytes.
DistanceMatrix read_distances(const std::filesystem::path& path);
void write_distances_binary(const std::filesystem::path& path, const DistanceMatrix& dm);
void write_distances_text(const std::filesystem::path& path, const DistanceMatrix& dm);

}  // namespace edgecount
