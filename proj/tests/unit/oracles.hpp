// SPDX-License-Identifier: Apache-2.0

// Reference implementations used only by tests. Nothing here calls into the
// library code it is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace nfuca::test {

inline constexpr double kPiRef = 3.14159265358979323846;

/// J0 power series in extended precision, summed until terms vanish.
inline long double j0_series_ld(long double x) {
  const long double q = -(x * x) / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-30L) break;
  }
  return sum;
}

inline double j0_series(double x) {
  return static_cast<double>(j0_series_ld(x));
}

/// Bisection for j0_series(x) = target on a bracket where it decreases.
inline double j0_series_root(long double target, long double lo,
                             long double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-18L; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (j0_series_ld(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
  return m;
}

/// (A^H A)^{-1} A^H Y via an LDLT of the Gram matrix.
inline Eigen::MatrixXcd normal_equations(const Eigen::MatrixXcd& a,
                                         const Eigen::MatrixXcd& y) {
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  return gram.ldlt().solve(a.adjoint() * y);
}

/// Plain-loop Euclidean distance from antenna n of an N-element UCA.
inline double direct_distance(double r, double theta, double phi, int n,
                              int num_antennas, double radius) {
  const double psi = 2.0 * kPiRef * n / num_antennas;
  const double px = r * std::sin(theta) * std::cos(phi);
  const double py = r * std::sin(theta) * std::sin(phi);
  const double pz = r * std::cos(theta);
  const double dx = px - radius * std::cos(psi);
  const double dy = py - radius * std::sin(psi);
  return std::sqrt(dx * dx + dy * dy + pz * pz);
}

// Grid sizes counted by stepping each index until it leaves the admissible
// set; the Bessel constants come from the series oracle.
struct GridCount {
  int elevations = 0;
  long long columns = 0;
};

inline int count_azimuths(double radius, double lambda, double alpha, double theta) {
  const double x = lambda * alpha / (4.0 * kPiRef * radius * std::sin(theta));
  if (x > 1.0) return 1;
  // Azimuths s * 2 asin(x) in [0, 2 pi], the closed end included.
  const double step = 2.0 * std::asin(x);
  int count = 0;
  while (count * step <= 2.0 * kPiRef + 1e-9) ++count;
  return count;
}

inline int count_rings(double theta, double z_cap, double r_min) {
  int z = 1;
  while (z_cap * std::sin(theta) * std::sin(theta) / z >= r_min) ++z;
  return z;  // far-field ring included
}

/// Grid sizes for an N-element UCA with chord spacing `spacing`.
inline GridCount loop_oracle(double carrier_hz, double spacing, int num_antennas, double delta,
                             double r_min) {
  const double alpha = test::j0_series_root(0.0L, 2.0L, 3.0L);
  const double beta = test::j0_series_root(delta, 0.0L, alpha);
  const double lambda = 299792458.0 / carrier_hz;
  const double radius = spacing / (2.0 * std::sin(kPiRef / num_antennas));
  const double z_cap = kPiRef * radius * radius / (2.0 * lambda * beta);
  const double step = lambda * alpha / (2.0 * kPiRef * radius);
  GridCount out;
  out.columns = 1;  // the on-axis column
  for (int t = 1; t * step <= 1.0; ++t) {
    const double theta = std::asin(t * step);
    out.columns += static_cast<long long>(count_azimuths(radius, lambda, alpha, theta)) *
                   count_rings(theta, z_cap, r_min);
    out.elevations = t;
  }
  return out;
}

}  // namespace nfuca::test
