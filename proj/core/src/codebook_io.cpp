// SPDX-License-Identifier: Apache-2.0

#include "nfuca/codebook_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace nfuca {
namespace {

std::runtime_error io_error(const std::filesystem::path& path, const char* action) {
  return std::runtime_error(std::string(action) + " '" + path.string() +
                            "': " + std::strerror(errno));
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  in.read(bytes.data(), bytes.size());
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::runtime_error("grid file: malformed number '" + std::string(text) + "'");
  return v;
}

}  // namespace

void write_grid_text(const std::filesystem::path& path, const SphericalCodebook& codebook) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open");
  for (const GridPoint& p : codebook.grid) {
    out << p.t << ',' << p.s << ',' << p.z << ','
        << (p.far_field() ? std::string("inf") : format_double(*p.distance_m)) << ','
        << format_double(p.elevation_rad) << ',' << format_double(p.azimuth_rad) << '\n';
  }
  out.flush();
  if (!out) throw io_error(path, "cannot write");
}

std::vector<GridPoint> read_grid_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open");
  std::vector<GridPoint> grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string, 6> fields;
    std::istringstream ss(line);
    for (auto& f : fields) {
      if (!std::getline(ss, f, ','))
        throw std::runtime_error("grid file: expected 6 fields in '" + line + "'");
    }
    GridPoint p;
    p.t = std::stoi(fields[0]);
    p.s = std::stoi(fields[1]);
    p.z = std::stoi(fields[2]);
    if (fields[3] != "inf") p.distance_m = parse_double(fields[3]);
    p.elevation_rad = parse_double(fields[4]);
    p.azimuth_rad = parse_double(fields[5]);
    grid.push_back(p);
  }
  return grid;
}

void write_matrix_binary(const std::filesystem::path& path, const CMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open");
  out.write(kCodebookMagic, sizeof(kCodebookMagic));
  put_le<std::uint32_t>(out, kCodebookFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.cols()));
  for (Index j = 0; j < matrix.cols(); ++j) {
    for (Index i = 0; i < matrix.rows(); ++i) {
      put_le<double>(out, matrix(i, j).real());
      put_le<double>(out, matrix(i, j).imag());
    }
  }
  out.flush();
  if (!out) throw io_error(path, "cannot write");
}

CMatrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path, "cannot open");
  char magic[4] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCodebookMagic, sizeof(magic)) != 0)
    throw std::runtime_error("codebook binary '" + path.string() + "': bad magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCodebookFormatVersion)
    throw std::runtime_error("codebook binary '" + path.string() + "': unsupported version " +
                             std::to_string(version));
  const auto rows = get_le<std::uint32_t>(in);
  const auto cols = get_le<std::uint32_t>(in);
  CMatrix m(rows, cols);
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      m(i, j) = {re, im};
    }
  }
  if (!in) throw std::runtime_error("codebook binary '" + path.string() + "': truncated");
  return m;
}

}  // namespace nfuca
