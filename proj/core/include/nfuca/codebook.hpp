// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nfuca/channel.hpp"
#include "nfuca/types.hpp"

namespace nfuca {

/// A sampled direction/distance. An empty distance is the far-field ring
/// (z = 0, r = infinity).
struct GridPoint {
  std::optional<double> distance_m;
  double elevation_rad = 0.0;
  double azimuth_rad = 0.0;
  int t = 0;
  int s = 0;
  int z = 0;

  bool far_field() const { return !distance_m.has_value(); }
};

enum class CodebookKind { kSpherical, kPolar, kAngular };

std::string_view to_string(CodebookKind kind);

struct CodebookParams {
  double delta = 0.0;
  double alpha = 0.0;       // first zero of J0
  double beta_delta = 0.0;  // J0(beta_delta) = delta
  double z_cap = 0.0;       // distance scale Z_delta, metres
  double r_min = 0.0;
};

/// Dictionary W (N x G) of unit-norm steering vectors plus one grid point per
/// column.
struct SphericalCodebook {
  CodebookKind kind = CodebookKind::kSpherical;
  CMatrix matrix;
  std::vector<GridPoint> grid;
  CodebookParams params;

  Index size() const { return matrix.cols(); }
};

/// theta_t = asin(t * lambda * alpha / (2 pi R)), t = 0..T.
std::vector<double> elevation_grid(double radius_m, double wavelength,
                                   double alpha);

/// phi_s = s * 2 asin(x), s = 0..floor(pi / asin(x)), x = lambda alpha /
/// (4 pi R sin theta). When pi / asin(x) is an integer (always at t = 1) the
/// last point is 2 pi and repeats phi_0. Returns {0} when x > 1. Throws
/// DomainError for theta <= 0.
std::vector<double> azimuth_grid(double radius_m, double wavelength,
                                 double alpha, double theta);

/// Distance scale Z_delta = pi R^2 / (2 lambda beta_delta).
double distance_scale(double radius_m, double wavelength, double beta_delta);

/// Far-field ring followed by r_z = Z sin^2(theta) / z for z = 1, 2, ... while
/// r_z >= r_min.
std::vector<std::optional<double>> distance_grid(double theta, double z_cap,
                                                 double r_min);

/// Smallest admissible r_min: 0.5 * sqrt(D^3 / lambda) for aperture D.
double min_admissible_distance(const SystemConfig& config);

/// Joint elevation x azimuth x distance dictionary.
///
/// The t = 0 elevation contributes a single constant far-field column. Throws
/// ConfigError when r_min is not above min_admissible_distance or delta is not
/// in (0, 1).
SphericalCodebook build_spherical_codebook(const SystemConfig& config,
                                           double delta, double r_min,
                                           int workers = 1);

/// Same grids restricted to the theta = pi/2 plane (distance x azimuth).
SphericalCodebook build_polar_codebook(const SystemConfig& config,
                                       double delta, double r_min,
                                       int workers = 1);

/// N x N unitary DFT over antenna index.
SphericalCodebook build_angular_codebook(const SystemConfig& config);

/// |b1^H b2|. Throws DomainError on length mismatch.
double column_correlation(const Eigen::Ref<const CVector>& b1,
                          const Eigen::Ref<const CVector>& b2);

struct CorrelationSummary {
  std::size_t pairs = 0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
};

struct CoherenceStats {
  CorrelationSummary elevation;  // (t, 0, 0) vs (t + 1, 0, 0)
  CorrelationSummary azimuth;    // (t, s, z) vs (t, s + 1, z)
  CorrelationSummary distance;   // (t, s, z) vs (t, s, z + 1)
  CorrelationSummary random;     // seeded sample of distinct column pairs
};

CorrelationSummary summarize_correlations(std::vector<double> values);

/// Adjacent-pair statistics in each grid dimension plus up to `sample_budget`
/// random column pairs. Deterministic for a given seed and worker count.
CoherenceStats coherence_stats(const SphericalCodebook& codebook,
                               std::size_t sample_budget,
                               std::uint64_t seed = 0, int workers = 1);

}  // namespace nfuca
