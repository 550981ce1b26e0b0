// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nfuca/types.hpp"

namespace nfuca {

/// Carrier, array and pilot parameters of one experiment.
struct SystemConfig {
  double carrier_freq_hz = 30e9;
  double bandwidth_hz = 100e6;
  int num_subcarriers = 16;
  int num_antennas = 128;
  double antenna_spacing_m = 0.005;
  int num_rf_chains = 4;
  int num_pilot_slots = 16;

  /// Throws ConfigError when any invariant is violated.
  void validate() const;

  double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
  double radius() const;
  int num_measurements() const { return num_pilot_slots * num_rf_chains; }
};

/// Radius of a UCA whose adjacent antennas are separated by a chord of length
/// `spacing_m`. Throws DomainError for fewer than three antennas.
double uca_radius(double spacing_m, int num_antennas);

/// Antennas on a circle of radius R in the z = 0 plane, antenna n at azimuth
/// 2*pi*n/N.
class UcaGeometry {
 public:
  UcaGeometry(int num_antennas, double radius_m);
  static UcaGeometry from_config(const SystemConfig& config);

  int size() const { return static_cast<int>(azimuths_.size()); }
  double radius() const { return radius_; }
  double aperture() const { return 2.0 * radius_; }
  std::span<const double> azimuths() const { return azimuths_; }
  std::array<double, 3> position(int n) const;

 private:
  double radius_;
  std::vector<double> azimuths_;
};

/// One propagation path. Angles in radians; elevation is measured from the
/// array normal (z axis).
struct PathParams {
  double distance_m = 0.0;
  double elevation_rad = 0.0;
  double azimuth_rad = 0.0;
  Complex gain{1.0, 0.0};
};

/// Frequency-domain channel, one column per subcarrier.
struct ChannelMatrix {
  CMatrix entries;
  SystemConfig config;
};

std::vector<double> subcarrier_frequencies(const SystemConfig& config);

double exact_distance(double r, double theta, double phi, int antenna,
                      const UcaGeometry& geom);

/// Second-order Taylor form of exact_distance; valid for r > R.
double approx_distance(double r, double theta, double phi, int antenna,
                       const UcaGeometry& geom);

/// Unit-norm spherical-wave steering vector, built from exact distances.
CVector near_field_steering(double r, double theta, double phi,
                            const UcaGeometry& geom, double wavelength);

/// Unit-norm plane-wave steering vector (the r -> infinity limit).
CVector far_field_steering(double theta, double phi, const UcaGeometry& geom,
                           double wavelength);

/// Superposition of L spherical-wave paths over all subcarriers.
///
/// Column m is sqrt(N/L) * sum_l g_l exp(-j k_m r_l) b(r_l, theta_l, phi_l).
/// The steering vector uses the centre wavelength; only the common path phase
/// follows the subcarrier wavenumber.
ChannelMatrix generate_channel(std::span<const PathParams> paths,
                               const SystemConfig& config);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct UserRanges {
  Range distance_m{4.0, 25.0};
  Range elevation_rad{0.0, kPi / 2.0};
  Range azimuth_rad{-kPi / 2.0, kPi / 2.0};

  void validate() const;
};

/// Uniform positions and CN(0, 1) gains. Azimuths are wrapped into [0, 2*pi);
/// a zero elevation draw is rejected and redrawn.
std::vector<PathParams> sample_paths(std::uint64_t seed, int num_paths,
                                     const UserRanges& ranges);

}  // namespace nfuca
