// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "nfuca/harness.hpp"

namespace nfuca {

/// Ordered key/value pairs from a "key = value" text file.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// Blank lines and '#' comments are ignored. Throws ConfigError on a line
/// without '=' or a repeated key.
ConfigMap parse_config(std::istream& in);
ConfigMap load_config_file(const std::filesystem::path& path);

/// Overrides fields of `spec` named by RunSpec field names:
///   carrier_freq_hz bandwidth_hz num_subcarriers num_antennas
///   antenna_spacing_m num_rf_chains num_pilot_slots delta r_min num_paths
///   l_hat r_range theta_range phi_range methods trials master_seed workers
///   snr_list_db pilot_list snr_db record_timing nmse_averaging
/// Ranges are "lo,hi"; lists are comma-separated. snr_list_db updates an SNR
/// sweep; pilot_list and snr_db update a pilot sweep; keys for the other sweep
/// kind are ignored. Throws ConfigError on unknown keys or malformed values.
void apply_config(RunSpec& spec, const ConfigMap& config);

/// "desk" or "paper". Throws ConfigError otherwise.
RunSpec profile_by_name(std::string_view name);

std::vector<Method> parse_method_list(std::string_view text);

}  // namespace nfuca
