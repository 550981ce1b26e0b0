// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nfuca/codebook.hpp"

namespace nfuca {

inline constexpr char kCodebookMagic[4] = {'S', 'P', 'H', 'W'};
inline constexpr std::uint32_t kCodebookFormatVersion = 1;

/// One line per column: "t,s,z,r,theta,phi". Far-field rows carry r = inf.
void write_grid_text(const std::filesystem::path& path,
                     const SphericalCodebook& codebook);
std::vector<GridPoint> read_grid_text(const std::filesystem::path& path);

/// 16-byte header (magic "SPHW", version, N, G as little-endian u32) followed
/// by column-major interleaved re/im little-endian float64.
void write_matrix_binary(const std::filesystem::path& path,
                         const CMatrix& matrix);
CMatrix read_matrix_binary(const std::filesystem::path& path);

}  // namespace nfuca
