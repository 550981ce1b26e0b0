// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "nfuca/numerics.hpp"

namespace nfuca {
namespace {

constexpr double kSeriesLimit = 12.0;

double j0_power_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && std::abs(term) < 1e-17) break;
  }
  return sum;
}

// Hankel expansion J0(x) ~ sqrt(2 / (pi x)) (P cos chi - Q sin chi),
// chi = x - pi/4, with u_k = u_{k-1} * (-(2k - 1)^2) / (8 k x);
// P = u_0 - u_2 + u_4 - ..., Q = u_1 - u_3 + ... Summed up to the smallest
// term, where the divergent series is most accurate.
double j0_asymptotic(double x) {
  double p = 1.0;
  double q = 0.0;
  double u = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    u *= -(odd * odd) / (8.0 * k * x);
    if (std::abs(u) > last) break;
    last = std::abs(u);
    // Sign pattern for P and Q: k = 1 -> +Q, 2 -> -P, 3 -> -Q, 4 -> +P, ...
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * u;
    } else {
      q += sign * u;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Largest x in [lo, hi] with J0(x) >= target; J0 must decrease on the bracket.
double bisect_decreasing(double target, double lo, double hi) {
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j0(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j0: argument must be finite");
  x = std::abs(x);
  if (x <= kSeriesLimit) return j0_power_series(x);
  return j0_asymptotic(x);
}

double first_j0_zero() {
  static const double zero = bisect_decreasing(0.0, 2.0, 3.0);
  return zero;
}

double solve_beta_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw DomainError("solve_beta_delta: delta must lie in [0, 1]");
  if (delta == 1.0) return 0.0;
  if (delta == 0.0) return first_j0_zero();
  return bisect_decreasing(delta, 0.0, first_j0_zero());
}

}  // namespace nfuca
