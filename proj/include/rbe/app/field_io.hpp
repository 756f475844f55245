#pragma once

// Field files.
//
// Binary layout, little-endian:
//   bytes  0..7   magic "RBEFIELD"
//   u32           format version (1)
//   u32           reserved, 0
//   u64 × 4       n_x, n_radial, n_polar, n_azimuth
//   f64           pmax
//   f64 × N       values, N = n_x · n_radial · n_polar · n_azimuth, in
//                 DistField storage order: index (node · n_x + ix) with
//                 node = (i_r · n_polar + i_θ) · n_azimuth + k.
// The grid is rebuilt from the descriptors on load, so a reload reproduces
// the nodes and every value bit for bit.

#include <cstdint>
#include <string>

#include "rbe/field.hpp"

namespace rbe::app {

inline constexpr char kFieldMagic[8] = {'R', 'B', 'E', 'F', 'I', 'E', 'L', 'D'};
inline constexpr std::uint32_t kFieldVersion = 1;

/// Error on I/O failure.
void write_field(const std::string& path, const DistField& f);
/// Error on I/O failure, bad magic, unknown version or truncated data.
DistField read_field(const std::string& path);

/// One row per (x₁, node): "x1,p1,p2,p3,f", values with 17 significant digits.
void write_field_csv(const std::string& path, const DistField& f);

}  // namespace rbe::app
