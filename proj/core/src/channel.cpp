// SPDX-License-Identifier: Apache-2.0

#include "nfuca/channel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace nfuca {

void SystemConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid system config: ") + what);
  };
  require(num_antennas >= 3, "num_antennas must be >= 3");
  require(num_subcarriers >= 1, "num_subcarriers must be >= 1");
  require(num_pilot_slots >= 1, "num_pilot_slots must be >= 1");
  require(num_rf_chains >= 1, "num_rf_chains must be >= 1");
  require(std::isfinite(carrier_freq_hz) && carrier_freq_hz > 0.0,
          "carrier_freq_hz must be positive");
  require(std::isfinite(bandwidth_hz) && bandwidth_hz > 0.0,
          "bandwidth_hz must be positive");
  require(std::isfinite(antenna_spacing_m) && antenna_spacing_m > 0.0,
          "antenna_spacing_m must be positive");
}

double SystemConfig::radius() const {
  return uca_radius(antenna_spacing_m, num_antennas);
}

double uca_radius(double spacing_m, int num_antennas) {
  if (num_antennas < 3) throw DomainError("uca_radius: need at least 3 antennas");
  if (!(spacing_m > 0.0)) throw DomainError("uca_radius: spacing must be positive");
  return spacing_m / (2.0 * std::sin(kPi / num_antennas));
}

UcaGeometry::UcaGeometry(int num_antennas, double radius_m) : radius_(radius_m) {
  if (num_antennas < 1) throw DomainError("UcaGeometry: need at least one antenna");
  if (!(radius_m >= 0.0)) throw DomainError("UcaGeometry: negative radius");
  azimuths_.resize(static_cast<std::size_t>(num_antennas));
  for (int n = 0; n < num_antennas; ++n)
    azimuths_[static_cast<std::size_t>(n)] = 2.0 * kPi * n / num_antennas;
}

UcaGeometry UcaGeometry::from_config(const SystemConfig& config) {
  return UcaGeometry(config.num_antennas, config.radius());
}

std::array<double, 3> UcaGeometry::position(int n) const {
  const double psi = azimuths_.at(static_cast<std::size_t>(n));
  return {radius_ * std::cos(psi), radius_ * std::sin(psi), 0.0};
}

std::vector<double> subcarrier_frequencies(const SystemConfig& config) {
  const int m_total = config.num_subcarriers;
  std::vector<double> f(static_cast<std::size_t>(m_total));
  for (int m = 1; m <= m_total; ++m) {
    f[static_cast<std::size_t>(m - 1)] =
        config.carrier_freq_hz +
        (2.0 * m - m_total) * config.bandwidth_hz / (2.0 * m_total);
  }
  return f;
}

double exact_distance(double r, double theta, double phi, int antenna,
                      const UcaGeometry& geom) {
  const double R = geom.radius();
  const double psi = geom.azimuths()[static_cast<std::size_t>(antenna)];
  const double sq = r * r + R * R - 2.0 * R * r * std::sin(theta) * std::cos(phi - psi);
  return std::sqrt(std::max(sq, 0.0));
}

double approx_distance(double r, double theta, double phi, int antenna,
                       const UcaGeometry& geom) {
  const double R = geom.radius();
  const double psi = geom.azimuths()[static_cast<std::size_t>(antenna)];
  const double proj = std::sin(theta) * std::cos(phi - psi);
  return r - R * proj + (R * R / (2.0 * r)) * (1.0 - proj * proj);
}

CVector near_field_steering(double r, double theta, double phi,
                            const UcaGeometry& geom, double wavelength) {
  const int n_ant = geom.size();
  const double k = 2.0 * kPi / wavelength;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
  CVector b(n_ant);
  for (int n = 0; n < n_ant; ++n) {
    const double path = exact_distance(r, theta, phi, n, geom) - r;
    b(n) = std::polar(scale, -k * path);
  }
  return b;
}

CVector far_field_steering(double theta, double phi, const UcaGeometry& geom,
                           double wavelength) {
  const int n_ant = geom.size();
  const double kr = 2.0 * kPi / wavelength * geom.radius() * std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
  CVector a(n_ant);
  const auto psi = geom.azimuths();
  for (int n = 0; n < n_ant; ++n)
    a(n) = std::polar(scale, kr * std::cos(phi - psi[static_cast<std::size_t>(n)]));
  return a;
}

ChannelMatrix generate_channel(std::span<const PathParams> paths,
                               const SystemConfig& config) {
  config.validate();
  if (paths.empty()) throw DomainError("generate_channel: empty path list");
  const int n_ant = config.num_antennas;
  if (static_cast<int>(paths.size()) > n_ant)
    throw DomainError("generate_channel: more paths than antennas");

  const UcaGeometry geom = UcaGeometry::from_config(config);
  const double lambda = config.wavelength();
  const auto freqs = subcarrier_frequencies(config);
  const double prefactor = std::sqrt(static_cast<double>(n_ant) / paths.size());

  ChannelMatrix out{CMatrix::Zero(n_ant, config.num_subcarriers), config};
  for (const PathParams& p : paths) {
    if (!(p.distance_m > geom.radius()))
      throw DomainError("generate_channel: path distance must exceed the array radius");
    const CVector b = near_field_steering(p.distance_m, p.elevation_rad,
                                          p.azimuth_rad, geom, lambda);
    for (int m = 0; m < config.num_subcarriers; ++m) {
      const double k_m = 2.0 * kPi * freqs[static_cast<std::size_t>(m)] / kSpeedOfLight;
      const Complex coeff = prefactor * p.gain * std::polar(1.0, -k_m * p.distance_m);
      out.entries.col(m) += coeff * b;
    }
  }
  return out;
}

void UserRanges::validate() const {
  auto check = [](const Range& r, const char* name) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi))
      throw DomainError(std::string("sample_paths: empty or non-finite ") + name + " range");
  };
  check(distance_m, "distance");
  check(elevation_rad, "elevation");
  check(azimuth_rad, "azimuth");
  if (distance_m.lo <= 0.0) throw DomainError("sample_paths: distance range must be positive");
  if (elevation_rad.lo < 0.0 || elevation_rad.hi > kPi / 2.0)
    throw DomainError("sample_paths: elevation range must lie in [0, pi/2]");
  if (azimuth_rad.hi - azimuth_rad.lo > 2.0 * kPi)
    throw DomainError("sample_paths: azimuth range wider than 2 pi");
}

std::vector<PathParams> sample_paths(std::uint64_t seed, int num_paths,
                                     const UserRanges& ranges) {
  ranges.validate();
  if (num_paths < 1) throw DomainError("sample_paths: need at least one path");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist_r(ranges.distance_m.lo, ranges.distance_m.hi);
  std::uniform_real_distribution<double> dist_theta(ranges.elevation_rad.lo,
                                                    ranges.elevation_rad.hi);
  std::uniform_real_distribution<double> dist_phi(ranges.azimuth_rad.lo,
                                                  ranges.azimuth_rad.hi);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

  std::vector<PathParams> paths(static_cast<std::size_t>(num_paths));
  for (PathParams& p : paths) {
    p.distance_m = dist_r(rng);
    do {
      p.elevation_rad = dist_theta(rng);
    } while (p.elevation_rad <= 0.0);
    double phi = std::fmod(dist_phi(rng), 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi = 0.0;
    p.azimuth_rad = phi;
    const double re = gauss(rng);
    const double im = gauss(rng);
    p.gain = {re, im};
  }
  return paths;
}

}  // namespace nfuca
