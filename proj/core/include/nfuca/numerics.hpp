// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nfuca/types.hpp"

namespace nfuca {

/// Bessel function of the first kind, order zero.
///
/// Power series up to |x| = 12, Hankel asymptotic expansion beyond. Absolute
/// error stays below 1e-10 on [0, 50]. Negative arguments use J0(-x) = J0(x).
/// Throws DomainError for NaN or infinite input.
double bessel_j0(double x);

/// First positive zero of J0 (j_{0,1} ~ 2.4048), located by bisection on (2, 3).
double first_j0_zero();

/// Tolerance used by every bisection in this module.
inline constexpr double kBisectionTolerance = 1e-10;

/// Returns beta in [0, j_{0,1}] with J0(beta) = delta.
///
/// J0 decreases monotonically on that interval, so the root is unique.
/// Throws DomainError when delta is outside [0, 1].
double solve_beta_delta(double delta);

/// Condition estimate above which a least-squares system is treated as
/// rank-deficient.
inline constexpr double kRankConditionLimit = 1e12;

struct LeastSquaresSolution {
  CMatrix x;
  double condition_estimate = 1.0;
  bool rank_deficient = false;
};

/// Minimises ||a * x - y||_F over x.
///
/// Full-rank systems go through a column-pivoted Householder QR. When the
/// pivoted-R condition estimate exceeds kRankConditionLimit the minimum-norm
/// solution from a complete orthogonal decomposition is returned instead and
/// rank_deficient is set.
LeastSquaresSolution least_squares_solve(const CMatrix& a, const CMatrix& y);

}  // namespace nfuca
