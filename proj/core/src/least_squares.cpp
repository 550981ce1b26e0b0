// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "nfuca/numerics.hpp"

namespace nfuca {

LeastSquaresSolution least_squares_solve(const CMatrix& a, const CMatrix& y) {
  if (a.rows() < 1 || a.cols() < 1)
    throw DomainError("least_squares_solve: empty system matrix");
  if (a.rows() != y.rows())
    throw DomainError("least_squares_solve: row count mismatch");

  LeastSquaresSolution out;
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  // Pivoting sorts |R_ii| in decreasing order, so the first and last diagonal
  // entries bound the spectrum.
  const Index k = std::min(a.rows(), a.cols());
  const double largest = std::abs(qr.matrixQR()(0, 0));
  const double smallest = std::abs(qr.matrixQR()(k - 1, k - 1));
  if (largest == 0.0) {
    out.condition_estimate = std::numeric_limits<double>::infinity();
  } else {
    out.condition_estimate = smallest > 0.0
                                 ? largest / smallest
                                 : std::numeric_limits<double>::infinity();
  }

  const bool underdetermined = a.cols() > a.rows();
  if (!underdetermined && out.condition_estimate <= kRankConditionLimit) {
    out.x = qr.solve(y);
    return out;
  }

  out.rank_deficient = true;
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
  cod.setThreshold(1.0 / kRankConditionLimit);
  cod.compute(a);
  out.x = cod.solve(y);
  return out;
}

}  // namespace nfuca
