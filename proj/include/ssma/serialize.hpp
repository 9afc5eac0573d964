#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ssma/types.hpp"

namespace ssma {

/// Flat binary matrix container: 8-byte magic "SSMAPAR1", uint32 rows,
/// uint32 cols (little-endian), then row-major float64 payload.
std::string matrix_to_bytes(const Matrix& m);
Matrix matrix_from_bytes(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

/// FNV-1a 64-bit; stable across platforms and reruns.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

/// Fixed-format float for CSV/JSON output: shortest of %.17g that is
/// deterministic and round-trips.
std::string format_real(Real value);

}  // namespace ssma
