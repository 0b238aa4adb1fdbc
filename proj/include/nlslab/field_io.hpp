#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "nlslab/field.hpp"

namespace nlslab {

/// Unreadable or malformed file, or a format version this build does not know.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary field layout, little-endian, no padding:
///   bytes 0-3    magic "NLSF"
///   bytes 4-7    u32 version (1)
///   bytes 8-15   u64 n
///   bytes 16-23  f64 half_length L
///   then n pairs of f64 (Re u_j, Im u_j), j = 0..n-1, x_j = -L + 2 L j / n.
inline constexpr std::uint32_t kFieldFileVersion = 1;

void write_field_binary(const Field& u, const std::filesystem::path& path);

/// CSV form: "# nlslab-field v1", "# half_length=<L> n=<n>", header "x,re,im",
/// then one row per grid point.
void write_field_csv(const Field& u, const std::filesystem::path& path);

/// Reads either form (binary by magic, else CSV). The grid is rebuilt from
/// the header; CSV x columns must match it.
Field read_field(const std::filesystem::path& path);

}  // namespace nlslab
