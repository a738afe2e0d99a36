#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace edgecount {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);
/// Throws DataError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
/// Digest of the seeds serialized as little-endian 64-bit words.
std::string seeds_digest(std::span<const std::uint64_t> seeds);

}  // namespace edgecount
