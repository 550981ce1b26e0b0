// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nfuca/harness.hpp"

namespace nfuca {
namespace {

void put_number(std::ostream& out, double v) {
  std::array<char, 64> buf{};
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  out.write(buf.data(), end - buf.data());
}

double get_number(const std::string& field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::runtime_error("csv: malformed number '" + field + "'");
  return v;
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const SweepRow& row : result.rows) {
    put_number(out, row.sweep_value);
    out << ',' << to_string(row.method) << ',';
    put_number(out, row.nmse_linear);
    out << ',';
    put_number(out, row.nmse_db);
    out << ',' << row.trials << ',';
    put_number(out, row.wall_time_s);
    out << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing: " +
                             std::strerror(errno));
  write_csv(result, out);
  out.flush();
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
}

SweepResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("csv: missing or unexpected header");
  SweepResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string, 6> f;
    std::istringstream ss(line);
    for (auto& field : f)
      if (!std::getline(ss, field, ',')) throw std::runtime_error("csv: short row '" + line + "'");
    SweepRow row;
    row.sweep_value = get_number(f[0]);
    const auto method = parse_method(f[1]);
    if (!method) throw std::runtime_error("csv: unknown method '" + f[1] + "'");
    row.method = *method;
    row.nmse_linear = get_number(f[2]);
    row.nmse_db = get_number(f[3]);
    row.trials = std::stoi(f[4]);
    row.wall_time_s = get_number(f[5]);
    result.rows.push_back(row);
  }
  return result;
}

SweepResult read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path.string() + "': " + std::strerror(errno));
  return read_csv(in);
}

}  // namespace nfuca
