// SPDX-License-Identifier: Apache-2.0

#include "nfuca/estimator.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "nfuca/numerics.hpp"
#include "nfuca/parallel.hpp"

namespace nfuca {

CombiningMatrix generate_combining(std::uint64_t seed, int pilot_slots, int rf_chains,
                                   int num_antennas) {
  if (pilot_slots < 1 || rf_chains < 1 || num_antennas < 1)
    throw DomainError("generate_combining: all dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  const double modulus = 1.0 / std::sqrt(static_cast<double>(num_antennas));

  CombiningMatrix a;
  a.pilot_slots = pilot_slots;
  a.rf_chains = rf_chains;
  a.entries.resize(static_cast<Index>(pilot_slots) * rf_chains, num_antennas);
  for (Index i = 0; i < a.entries.rows(); ++i)
    for (Index j = 0; j < a.entries.cols(); ++j) a.entries(i, j) = std::polar(modulus, phase(rng));
  return a;
}

MeasurementSet synthesize_measurements(const ChannelMatrix& channel,
                                       const CombiningMatrix& combining, double snr_db,
                                       std::uint64_t seed) {
  const CMatrix& h = channel.entries;
  if (combining.entries.cols() != h.rows())
    throw DomainError("synthesize_measurements: combiner does not match antenna count");
  if (std::isnan(snr_db)) throw DomainError("synthesize_measurements: SNR is NaN");

  MeasurementSet y;
  y.snr_db = snr_db;
  y.seed = seed;
  y.observations = combining.entries * h;

  const double energy = h.squaredNorm();
  const double cells = static_cast<double>(y.observations.size());
  if (snr_db == std::numeric_limits<double>::infinity() || energy == 0.0) {
    y.noise_variance = 0.0;
    return y;
  }
  y.noise_variance = energy / (cells * std::pow(10.0, snr_db / 10.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * y.noise_variance));
  for (Index j = 0; j < y.observations.cols(); ++j) {
    for (Index i = 0; i < y.observations.rows(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      y.observations(i, j) += Complex(re, im);
    }
  }
  return y;
}

CMatrix sensing_matrix(const CMatrix& combining, const CMatrix& dictionary, int workers) {
  if (combining.cols() != dictionary.rows())
    throw DomainError("sensing_matrix: combiner and dictionary disagree on N");
  CMatrix out(combining.rows(), dictionary.cols());
  constexpr Index kBlock = 2048;
  const Index blocks = (dictionary.cols() + kBlock - 1) / kBlock;
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
    const Index start = static_cast<Index>(b) * kBlock;
    const Index width = std::min(kBlock, dictionary.cols() - start);
    out.middleCols(start, width).noalias() = combining * dictionary.middleCols(start, width);
  });
  return out;
}

namespace {

CMatrix gather_columns(const CMatrix& m, const std::vector<Index>& cols) {
  CMatrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

}  // namespace

EstimationResult simultaneous_omp(const CMatrix& observations, const CMatrix& sensing,
                                  const CMatrix& dictionary, int iterations) {
  if (iterations < 1) throw DomainError("simultaneous_omp: need at least one iteration");
  if (sensing.rows() != observations.rows())
    throw DomainError("simultaneous_omp: sensing matrix and observations disagree");
  if (sensing.cols() != dictionary.cols())
    throw DomainError("simultaneous_omp: sensing matrix and dictionary disagree on G");
  if (iterations > sensing.rows())
    throw DomainError("simultaneous_omp: more iterations than measurements");
  if (iterations > sensing.cols())
    throw DomainError("simultaneous_omp: more iterations than dictionary columns");

  EstimationResult result;
  const Index g_total = sensing.cols();
  // Columns already in the support or rejected as degenerate.
  std::vector<bool> excluded(static_cast<std::size_t>(g_total), false);
  CMatrix residual = observations;
  CMatrix support_sensing(sensing.rows(), 0);
  CMatrix coeffs(0, observations.cols());

  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd energy = (sensing.adjoint() * residual).rowwise().squaredNorm();

    bool accepted = false;
    while (!accepted) {
      Index best = -1;
      double best_energy = -1.0;
      for (Index p = 0; p < g_total; ++p) {
        if (excluded[static_cast<std::size_t>(p)]) continue;
        if (energy(p) > best_energy) {
          best_energy = energy(p);
          best = p;
        }
      }
      if (best < 0) break;

      CMatrix candidate(sensing.rows(), support_sensing.cols() + 1);
      candidate << support_sensing, sensing.col(best);
      LeastSquaresSolution sol = least_squares_solve(candidate, observations);
      excluded[static_cast<std::size_t>(best)] = true;
      if (sol.rank_deficient) {
        result.warnings.push_back("iteration " + std::to_string(it + 1) + ": column " +
                                  std::to_string(best) +
                                  " makes the support rank-deficient; skipped");
        continue;
      }
      result.support.push_back(best);
      support_sensing = std::move(candidate);
      coeffs = std::move(sol.x);
      accepted = true;
    }
    if (!accepted) {
      result.warnings.push_back("no admissible column left after " + std::to_string(it) +
                                " iterations");
      break;
    }
    residual = observations - support_sensing * coeffs;
    result.residual_norms.push_back(residual.norm());
  }

  result.sparse_coeffs = std::move(coeffs);
  result.channel_estimate = gather_columns(dictionary, result.support) * result.sparse_coeffs;
  return result;
}

EstimationResult s_somp(const MeasurementSet& measurements, const CombiningMatrix& combining,
                        const SphericalCodebook& codebook, int iterations) {
  const CMatrix sensing = sensing_matrix(combining.entries, codebook.matrix);
  return simultaneous_omp(measurements.observations, sensing, codebook.matrix, iterations);
}

ChannelEstimate ls_estimate(const MeasurementSet& measurements,
                            const CombiningMatrix& combining) {
  if (combining.entries.rows() != measurements.observations.rows())
    throw DomainError("ls_estimate: combiner and observations disagree");
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
  cod.setThreshold(1.0 / kRankConditionLimit);
  cod.compute(combining.entries);
  return ChannelEstimate{cod.solve(measurements.observations), {}};
}

ChannelEstimate oracle_estimate(const MeasurementSet& measurements,
                                const CombiningMatrix& combining,
                                std::span<const PathParams> paths, const SystemConfig& config) {
  if (paths.empty()) throw DomainError("oracle_estimate: empty path list");
  const UcaGeometry geom = UcaGeometry::from_config(config);
  const double lambda = config.wavelength();
  CMatrix basis(geom.size(), static_cast<Index>(paths.size()));
  for (std::size_t l = 0; l < paths.size(); ++l) {
    const PathParams& p = paths[l];
    basis.col(static_cast<Index>(l)) =
        near_field_steering(p.distance_m, p.elevation_rad, p.azimuth_rad, geom, lambda);
  }
  const LeastSquaresSolution sol =
      least_squares_solve(combining.entries * basis, measurements.observations);
  ChannelEstimate out{basis * sol.x, {}};
  if (sol.rank_deficient)
    out.warnings.emplace_back("oracle: true-path dictionary is rank-deficient; minimum-norm fit");
  return out;
}

double nmse(const CMatrix& truth, const CMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    throw DomainError("nmse: shape mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw DomainError("nmse: ground truth is zero");
  return (truth - estimate).squaredNorm() / denom;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace nfuca
