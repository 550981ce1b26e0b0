// SPDX-License-Identifier: Apache-2.0

#include "nfuca/run_config.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace nfuca {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw ConfigError("config: '" + std::string(key) + "' has malformed value '" +
                      std::string(text) + "'");
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  return parse_number<double>(key, text);
}

Range parse_range(std::string_view key, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2)
    throw ConfigError("config: '" + std::string(key) + "' must be 'lo,hi'");
  return Range{parse_real(key, parts[0]), parse_real(key, parts[1])};
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("config: '" + std::string(key) + "' must be true or false");
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path.string() + "': " + std::strerror(errno));
  return parse_config(in);
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> methods;
  for (std::string_view name : split(text, ',')) {
    if (name.empty()) continue;
    const auto m = parse_method(name);
    if (!m) throw ConfigError("unknown method '" + std::string(name) + "'");
    methods.push_back(*m);
  }
  if (methods.empty()) throw ConfigError("method list is empty");
  return methods;
}

void apply_config(RunSpec& spec, const ConfigMap& config) {
  using Setter = std::function<void(std::string_view, std::string_view)>;
  auto& sys = spec.system;
  std::optional<std::vector<double>> snr_list;
  std::optional<std::vector<int>> pilot_list;
  std::optional<double> pilot_snr;

  const std::map<std::string_view, Setter> setters = {
      {"carrier_freq_hz", [&](auto k, auto v) { sys.carrier_freq_hz = parse_real(k, v); }},
      {"bandwidth_hz", [&](auto k, auto v) { sys.bandwidth_hz = parse_real(k, v); }},
      {"num_subcarriers", [&](auto k, auto v) { sys.num_subcarriers = parse_number<int>(k, v); }},
      {"num_antennas", [&](auto k, auto v) { sys.num_antennas = parse_number<int>(k, v); }},
      {"antenna_spacing_m", [&](auto k, auto v) { sys.antenna_spacing_m = parse_real(k, v); }},
      {"num_rf_chains", [&](auto k, auto v) { sys.num_rf_chains = parse_number<int>(k, v); }},
      {"num_pilot_slots", [&](auto k, auto v) { sys.num_pilot_slots = parse_number<int>(k, v); }},
      {"delta", [&](auto k, auto v) { spec.delta = parse_real(k, v); }},
      {"r_min", [&](auto k, auto v) { spec.r_min = parse_real(k, v); }},
      {"num_paths", [&](auto k, auto v) { spec.num_paths = parse_number<int>(k, v); }},
      {"l_hat", [&](auto k, auto v) { spec.l_hat = parse_number<int>(k, v); }},
      {"r_range", [&](auto k, auto v) { spec.user_ranges.distance_m = parse_range(k, v); }},
      {"theta_range", [&](auto k, auto v) { spec.user_ranges.elevation_rad = parse_range(k, v); }},
      {"phi_range", [&](auto k, auto v) { spec.user_ranges.azimuth_rad = parse_range(k, v); }},
      {"methods", [&](auto, auto v) { spec.methods = parse_method_list(v); }},
      {"trials", [&](auto k, auto v) { spec.trials = parse_number<int>(k, v); }},
      {"master_seed", [&](auto k, auto v) { spec.master_seed = parse_number<std::uint64_t>(k, v); }},
      {"workers", [&](auto k, auto v) { spec.workers = parse_number<int>(k, v); }},
      {"record_timing", [&](auto k, auto v) { spec.record_timing = parse_bool(k, v); }},
      {"nmse_averaging",
       [&](auto k, auto v) {
         if (v == "linear") {
           spec.averaging = NmseAveraging::kLinear;
         } else if (v == "db") {
           spec.averaging = NmseAveraging::kDb;
         } else {
           throw ConfigError("config: '" + std::string(k) + "' must be linear or db");
         }
       }},
      {"snr_list_db",
       [&](auto k, auto v) {
         std::vector<double> list;
         for (auto part : split(v, ',')) list.push_back(parse_real(k, part));
         snr_list = std::move(list);
       }},
      {"pilot_list",
       [&](auto k, auto v) {
         std::vector<int> list;
         for (auto part : split(v, ',')) list.push_back(parse_number<int>(k, part));
         pilot_list = std::move(list);
       }},
      {"snr_db", [&](auto k, auto v) { pilot_snr = parse_real(k, v); }},
  };

  for (const auto& [key, value] : config) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second(key, value);
  }

  // The caller picks the sweep kind; list keys for the other kind are ignored
  // so one file can serve both sweep commands.
  if (auto* snr = std::get_if<SnrSweep>(&spec.sweep)) {
    if (snr_list) snr->snr_db = *snr_list;
  } else {
    auto& pilot = std::get<PilotSweep>(spec.sweep);
    if (pilot_list) pilot.pilot_slots = *pilot_list;
    if (pilot_snr) pilot.snr_db = *pilot_snr;
  }
}

RunSpec profile_by_name(std::string_view name) {
  if (name == "desk") return desk_profile();
  if (name == "paper") return paper_profile();
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected desk or paper)");
}

}  // namespace nfuca
