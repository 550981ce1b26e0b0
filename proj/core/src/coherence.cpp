// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include "nfuca/codebook.hpp"
#include "nfuca/parallel.hpp"

namespace nfuca {
namespace {

using Pair = std::pair<Index, Index>;

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> correlate(const CMatrix& w, const std::vector<Pair>& pairs, int workers) {
  std::vector<double> values(pairs.size());
  constexpr std::size_t kBatch = 1024;
  const std::size_t batches = (pairs.size() + kBatch - 1) / kBatch;
  parallel_for(batches, workers, [&](std::size_t b) {
    const std::size_t end = std::min(pairs.size(), (b + 1) * kBatch);
    for (std::size_t i = b * kBatch; i < end; ++i)
      values[i] = column_correlation(w.col(pairs[i].first), w.col(pairs[i].second));
  });
  return values;
}

}  // namespace

CorrelationSummary summarize_correlations(std::vector<double> values) {
  CorrelationSummary out;
  out.pairs = values.size();
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  out.max = values.back();
  // Sorted ascending, so the sum order is fixed regardless of how the values
  // were produced.
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  out.median = quantile(values, 0.5);
  out.p90 = quantile(values, 0.9);
  out.p99 = quantile(values, 0.99);
  return out;
}

CoherenceStats coherence_stats(const SphericalCodebook& codebook,
                               std::size_t sample_budget, std::uint64_t seed,
                               int workers) {
  const auto& grid = codebook.grid;
  std::map<std::array<int, 3>, Index> lookup;
  for (std::size_t g = 0; g < grid.size(); ++g)
    lookup.emplace(std::array{grid[g].t, grid[g].s, grid[g].z}, static_cast<Index>(g));

  std::vector<Pair> elevation;
  std::vector<Pair> azimuth;
  std::vector<Pair> distance;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const GridPoint& p = grid[g];
    const auto here = static_cast<Index>(g);
    if (p.s == 0 && p.z == 0) {
      if (auto it = lookup.find({p.t + 1, 0, 0}); it != lookup.end())
        elevation.emplace_back(here, it->second);
    }
    if (auto it = lookup.find({p.t, p.s + 1, p.z}); it != lookup.end())
      azimuth.emplace_back(here, it->second);
    if (auto it = lookup.find({p.t, p.s, p.z + 1}); it != lookup.end())
      distance.emplace_back(here, it->second);
  }

  std::vector<Pair> random;
  const auto columns = static_cast<Index>(grid.size());
  if (columns >= 2 && sample_budget > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, columns - 1);
    random.reserve(sample_budget);
    while (random.size() < sample_budget) {
      const Index a = pick(rng);
      const Index b = pick(rng);
      if (a != b) random.emplace_back(a, b);
    }
  }

  CoherenceStats stats;
  stats.elevation = summarize_correlations(correlate(codebook.matrix, elevation, workers));
  stats.azimuth = summarize_correlations(correlate(codebook.matrix, azimuth, workers));
  stats.distance = summarize_correlations(correlate(codebook.matrix, distance, workers));
  stats.random = summarize_correlations(correlate(codebook.matrix, random, workers));
  return stats;
}

}  // namespace nfuca
