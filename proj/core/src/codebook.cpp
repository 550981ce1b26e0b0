// SPDX-License-Identifier: Apache-2.0

#include "nfuca/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nfuca/numerics.hpp"
#include "nfuca/parallel.hpp"

namespace nfuca {

std::string_view to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::kSpherical: return "spherical";
    case CodebookKind::kPolar: return "polar";
    case CodebookKind::kAngular: return "angular";
  }
  return "unknown";
}

std::vector<double> elevation_grid(double radius_m, double wavelength, double alpha) {
  if (!(radius_m > 0.0 && wavelength > 0.0 && alpha > 0.0))
    throw DomainError("elevation_grid: radius, wavelength and alpha must be positive");
  const double step = wavelength * alpha / (2.0 * kPi * radius_m);
  const auto count =
      static_cast<int>(std::floor(2.0 * kPi * radius_m / (wavelength * alpha)));
  std::vector<double> theta(static_cast<std::size_t>(count) + 1);
  for (int t = 0; t <= count; ++t)
    theta[static_cast<std::size_t>(t)] = std::asin(std::min(1.0, t * step));
  return theta;
}

namespace {
constexpr double kIntegerSnap = 1e-9;
}  // namespace

std::vector<double> azimuth_grid(double radius_m, double wavelength, double alpha,
                                 double theta) {
  if (!(theta > 0.0)) throw DomainError("azimuth_grid: elevation must be positive");
  if (!(radius_m > 0.0 && wavelength > 0.0 && alpha > 0.0))
    throw DomainError("azimuth_grid: radius, wavelength and alpha must be positive");
  const double x = wavelength * alpha / (4.0 * kPi * radius_m * std::sin(theta));
  if (x > 1.0) return {0.0};
  const double half_step = std::asin(x);
  const double turns = kPi / half_step;
  // At t = 1, x = 1/2 and pi / asin(x) = 6 exactly; snap so rounding cannot
  // drop phi_S = 2 pi, which then repeats phi_0.
  const double nearest = std::round(turns);
  const auto count = static_cast<int>(
      std::abs(turns - nearest) < kIntegerSnap ? nearest : std::floor(turns));
  std::vector<double> phi(static_cast<std::size_t>(count) + 1);
  for (int s = 0; s <= count; ++s)
    phi[static_cast<std::size_t>(s)] = s * 2.0 * half_step;
  return phi;
}

double distance_scale(double radius_m, double wavelength, double beta_delta) {
  return kPi * radius_m * radius_m / (2.0 * wavelength * beta_delta);
}

std::vector<std::optional<double>> distance_grid(double theta, double z_cap,
                                                 double r_min) {
  std::vector<std::optional<double>> rings{std::nullopt};
  const double s = std::sin(theta);
  const double scaled = z_cap * s * s;
  for (int z = 1;; ++z) {
    const double r = scaled / z;
    if (!(r >= r_min)) break;
    rings.emplace_back(r);
  }
  return rings;
}

double min_admissible_distance(const SystemConfig& config) {
  const double aperture = 2.0 * config.radius();
  return 0.5 * std::sqrt(aperture * aperture * aperture / config.wavelength());
}

namespace {

CodebookParams make_params(const SystemConfig& config, double delta, double r_min) {
  config.validate();
  if (!(delta > 0.0 && delta < 1.0))
    throw ConfigError("codebook: delta must lie in (0, 1)");
  const double limit = min_admissible_distance(config);
  if (!(r_min > limit)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "codebook: r_min = " << r_min << " m is not above the minimum admissible "
        << "distance " << limit << " m";
    throw ConfigError(msg.str());
  }
  CodebookParams params;
  params.delta = delta;
  params.alpha = first_j0_zero();
  params.beta_delta = solve_beta_delta(delta);
  params.z_cap = distance_scale(config.radius(), config.wavelength(), params.beta_delta);
  params.r_min = r_min;
  return params;
}

// Enumerates the (t, s, z) grid for the given elevations in loop
// order: elevation, then azimuth, then distance.
std::vector<GridPoint> enumerate_grid(std::span<const double> elevations,
                                      std::span<const int> elevation_index,
                                      double radius, double wavelength,
                                      const CodebookParams& params) {
  std::vector<GridPoint> grid;
  for (std::size_t i = 0; i < elevations.size(); ++i) {
    const double theta = elevations[i];
    const int t = elevation_index[i];
    if (theta <= 0.0) {
      grid.push_back(GridPoint{std::nullopt, 0.0, 0.0, t, 0, 0});
      continue;
    }
    const auto phis = azimuth_grid(radius, wavelength, params.alpha, theta);
    const auto rings = distance_grid(theta, params.z_cap, params.r_min);
    for (std::size_t s = 0; s < phis.size(); ++s) {
      for (std::size_t z = 0; z < rings.size(); ++z) {
        grid.push_back(GridPoint{rings[z], theta, phis[s], t, static_cast<int>(s),
                                 static_cast<int>(z)});
      }
    }
  }
  return grid;
}

CMatrix steering_columns(const std::vector<GridPoint>& grid, const UcaGeometry& geom,
                         double wavelength, int workers) {
  CMatrix w(geom.size(), static_cast<Index>(grid.size()));
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (grid.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(grid.size(), (b + 1) * kBlock);
    for (std::size_t g = b * kBlock; g < end; ++g) {
      const GridPoint& p = grid[g];
      w.col(static_cast<Index>(g)) =
          p.far_field()
              ? far_field_steering(p.elevation_rad, p.azimuth_rad, geom, wavelength)
              : near_field_steering(*p.distance_m, p.elevation_rad, p.azimuth_rad, geom,
                                    wavelength);
    }
  });
  return w;
}

}  // namespace

SphericalCodebook build_spherical_codebook(const SystemConfig& config, double delta,
                                           double r_min, int workers) {
  SphericalCodebook book;
  book.kind = CodebookKind::kSpherical;
  book.params = make_params(config, delta, r_min);
  const double radius = config.radius();
  const double lambda = config.wavelength();
  const auto thetas = elevation_grid(radius, lambda, book.params.alpha);
  std::vector<int> index(thetas.size());
  for (std::size_t t = 0; t < index.size(); ++t) index[t] = static_cast<int>(t);
  book.grid = enumerate_grid(thetas, index, radius, lambda, book.params);
  book.matrix = steering_columns(book.grid, UcaGeometry::from_config(config), lambda, workers);
  return book;
}

SphericalCodebook build_polar_codebook(const SystemConfig& config, double delta,
                                       double r_min, int workers) {
  SphericalCodebook book;
  book.kind = CodebookKind::kPolar;
  book.params = make_params(config, delta, r_min);
  const double radius = config.radius();
  const double lambda = config.wavelength();
  const double theta[] = {kPi / 2.0};
  const int index[] = {0};
  book.grid = enumerate_grid(theta, index, radius, lambda, book.params);
  book.matrix = steering_columns(book.grid, UcaGeometry::from_config(config), lambda, workers);
  return book;
}

SphericalCodebook build_angular_codebook(const SystemConfig& config) {
  config.validate();
  const int n_ant = config.num_antennas;
  SphericalCodebook book;
  book.kind = CodebookKind::kAngular;
  book.matrix.resize(n_ant, n_ant);
  book.grid.reserve(static_cast<std::size_t>(n_ant));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
  for (int g = 0; g < n_ant; ++g) {
    for (int n = 0; n < n_ant; ++n) {
      // Reduce n * g modulo N first so the phase stays exact for large N.
      const long long k = (static_cast<long long>(n) * g) % n_ant;
      book.matrix(n, g) = std::polar(scale, -2.0 * kPi * static_cast<double>(k) / n_ant);
    }
    // Azimuth carries the DFT bin angle; there is no physical elevation.
    book.grid.push_back(GridPoint{std::nullopt, kPi / 2.0, 2.0 * kPi * g / n_ant, 0, g, 0});
  }
  return book;
}

double column_correlation(const Eigen::Ref<const CVector>& b1,
                          const Eigen::Ref<const CVector>& b2) {
  if (b1.size() != b2.size())
    throw DomainError("column_correlation: vectors differ in length");
  return std::abs(b1.dot(b2));
}

}  // namespace nfuca
