// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfuca/channel.hpp"
#include "nfuca/codebook.hpp"
#include "nfuca/types.hpp"

namespace nfuca {

/// Stacked analog combiner: P blocks of N_RF rows, every entry of modulus
/// 1/sqrt(N).
struct CombiningMatrix {
  CMatrix entries;
  int pilot_slots = 0;
  int rf_chains = 0;

  auto slot(int p) const {
    return entries.middleRows(static_cast<Index>(p) * rf_chains, rf_chains);
  }
};

CombiningMatrix generate_combining(std::uint64_t seed, int pilot_slots,
                                   int rf_chains, int num_antennas);

struct MeasurementSet {
  CMatrix observations;  // (P * N_RF) x M
  double noise_variance = 0.0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// Y = A H + N with sigma^2 = ||H||_F^2 / (P N_RF M 10^(snr/10)).
/// An infinite snr_db gives a noiseless Y.
MeasurementSet synthesize_measurements(const ChannelMatrix& channel,
                                       const CombiningMatrix& combining,
                                       double snr_db, std::uint64_t seed);

struct EstimationResult {
  std::vector<Index> support;
  CMatrix sparse_coeffs;     // |support| x M
  CMatrix channel_estimate;  // N x M
  std::vector<double> residual_norms;
  std::optional<double> nmse_db;
  std::vector<std::string> warnings;
};

/// A * W, formed in column blocks.
CMatrix sensing_matrix(const CMatrix& combining, const CMatrix& dictionary,
                       int workers = 1);

/// Simultaneous OMP on a precomputed sensing matrix (A W).
///
/// Each iteration picks the unselected column with the largest correlation
/// energy sum_m |Gamma(p, m)|^2 (lowest index on ties), re-solves least
/// squares on the whole support against Y and sets R = Y - (AW)_Omega X.
/// A candidate that makes the support rank-deficient is skipped with a
/// warning.
EstimationResult simultaneous_omp(const CMatrix& observations,
                                  const CMatrix& sensing,
                                  const CMatrix& dictionary, int iterations);

/// Convenience wrapper that forms A W itself.
EstimationResult s_somp(const MeasurementSet& measurements,
                        const CombiningMatrix& combining,
                        const SphericalCodebook& codebook, int iterations);

struct ChannelEstimate {
  CMatrix channel;
  std::vector<std::string> warnings;
};

/// Minimum-norm minimiser of ||Y - A H||_F.
ChannelEstimate ls_estimate(const MeasurementSet& measurements,
                            const CombiningMatrix& combining);

/// Least squares on the exact steering vectors of the true paths.
ChannelEstimate oracle_estimate(const MeasurementSet& measurements,
                                const CombiningMatrix& combining,
                                std::span<const PathParams> paths,
                                const SystemConfig& config);

/// ||H - H_hat||_F^2 / ||H||_F^2. Throws DomainError on a zero ground truth
/// or mismatched shapes.
double nmse(const CMatrix& truth, const CMatrix& estimate);

double to_db(double linear);

}  // namespace nfuca
