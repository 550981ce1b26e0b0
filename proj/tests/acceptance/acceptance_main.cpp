// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nfuca/codebook.hpp"
#include "nfuca/estimator.hpp"
#include "nfuca/harness.hpp"
#include "nfuca/numerics.hpp"
#include "nfuca/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace nfuca;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Report {
  std::ostringstream text;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    text << (cond ? "" : "[violated] ") << what << "; ";
    ok = ok && cond;
  }
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

SystemConfig paper_system() {
  SystemConfig c;
  c.num_antennas = 512;
  return c;
}

RunSpec desk_spec(int trials) {
  RunSpec spec = desk_profile();
  spec.trials = trials;
  spec.master_seed = kSeed;
  return spec;
}

// 1. Rayleigh distance 2 D^2 / lambda of the 512-element array.
Outcome rayleigh_distance() {
  const SystemConfig c = paper_system();
  const double d = 2.0 * c.radius();
  const double rayleigh = 2.0 * d * d / c.wavelength();
  const double rel = std::abs(rayleigh - 132.9) / 132.9;
  return {rel <= 0.005, fmt("2D^2/lambda = %.4f m", rayleigh) + fmt(", rel. error %.2e", rel) +
                            " (tolerance 5e-3)"};
}

// 2. Grid sizes against the loop-count oracle.
Outcome codebook_structure() {
  Report r;
  const double alpha = first_j0_zero();

  SystemConfig exact = paper_system();
  const auto thetas = elevation_grid(exact.radius(), exact.wavelength(), alpha);
  const int t_count = static_cast<int>(thetas.size()) - 1;
  const auto oracle = test::loop_oracle(exact.carrier_freq_hz, exact.antenna_spacing_m, 512,
                                        0.55, 4.0);
  r.check(t_count == 106 && t_count == oracle.elevations,
          "T = " + std::to_string(t_count) + " (oracle " + std::to_string(oracle.elevations) +
              ", expected 106)");

  // The stated S = 668 corresponds to lambda = 1 cm; c / 30 GHz gives 669.
  SystemConfig rounded = exact;
  rounded.carrier_freq_hz = kSpeedOfLight / 0.01;
  const int s_rounded = static_cast<int>(
      azimuth_grid(rounded.radius(), rounded.wavelength(), alpha, kPi / 2.0).size()) - 1;
  const int s_rounded_oracle =
      test::count_azimuths(rounded.radius(), 0.01, alpha, kPi / 2.0) - 1;
  r.check(s_rounded == 668 && s_rounded == s_rounded_oracle,
          "S(pi/2) = " + std::to_string(s_rounded) + " at lambda = 1 cm (oracle " +
              std::to_string(s_rounded_oracle) + ", expected 668)");
  const int s_exact = static_cast<int>(
      azimuth_grid(exact.radius(), exact.wavelength(), alpha, kPi / 2.0).size()) - 1;
  const int s_exact_oracle =
      test::count_azimuths(exact.radius(), exact.wavelength(), alpha, kPi / 2.0) - 1;
  r.check(s_exact == s_exact_oracle,
          "S(pi/2) = " + std::to_string(s_exact) + " at lambda = c/f_c (oracle " +
              std::to_string(s_exact_oracle) + ")");

  const double z_cap =
      distance_scale(exact.radius(), exact.wavelength(), solve_beta_delta(0.55));
  const auto rings = distance_grid(kPi / 2.0, z_cap, 4.0);
  const auto finite = std::count_if(rings.begin(), rings.end(),
                                    [](const auto& r) { return r.has_value(); });
  r.check(finite == 4 && !rings.front().has_value() && rings.size() == 5,
          std::to_string(finite) + " finite rings + far field at pi/2 (r_min = 4 m)");
  return {r.ok, r.text.str()};
}

// 3. A single on-grid path must be recovered exactly without noise.
Outcome noiseless_recovery() {
  RunSpec spec = desk_spec(100);
  const SystemConfig& sys = spec.system;
  const SphericalCodebook book = build_spherical_codebook(sys, spec.delta, spec.r_min);
  const CombiningMatrix a =
      generate_combining(derive_seed(kSeed, {3}), sys.num_pilot_slots, sys.num_rf_chains,
                         sys.num_antennas);
  const CMatrix sensing = sensing_matrix(a.entries, book.matrix);
  const auto freqs = subcarrier_frequencies(sys);

  int successes = 0;
  double worst = 0.0;
  for (int trial = 0; trial < spec.trials; ++trial) {
    std::mt19937_64 rng(derive_seed(kSeed, {3, static_cast<std::uint64_t>(trial)}));
    const auto g = std::uniform_int_distribution<Index>(0, book.size() - 1)(rng);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const Complex gain(gauss(rng), gauss(rng));
    const GridPoint& p = book.grid[static_cast<std::size_t>(g)];

    ChannelMatrix h;
    if (!p.far_field()) {
      const PathParams path{*p.distance_m, p.elevation_rad, p.azimuth_rad, gain};
      h = generate_channel(std::span(&path, 1), sys);
    } else {
      // A path at infinity: plane wave with a delay drawn from the user range.
      const double r = std::uniform_real_distribution<double>(4.0, 25.0)(rng);
      h.config = sys;
      h.entries.resize(sys.num_antennas, sys.num_subcarriers);
      for (int m = 0; m < sys.num_subcarriers; ++m) {
        const double k_m = 2.0 * kPi * freqs[static_cast<std::size_t>(m)] / kSpeedOfLight;
        h.entries.col(m) = std::sqrt(static_cast<double>(sys.num_antennas)) * gain *
                           std::polar(1.0, -k_m * r) * book.matrix.col(g);
      }
    }
    const MeasurementSet y = synthesize_measurements(h, a, kInf, 0);
    const EstimationResult est = simultaneous_omp(y.observations, sensing, book.matrix, 1);
    const double err = nmse(h.entries, est.channel_estimate);
    worst = std::max(worst, err);
    if (err < 1e-10) ++successes;
  }
  return {successes == spec.trials,
          std::to_string(successes) + "/" + std::to_string(spec.trials) +
              " trials below 1e-10 (P*N_RF = " + std::to_string(sys.num_measurements()) +
              ", G = " + std::to_string(book.size()) + fmt(", worst NMSE %.2e)", worst)};
}

// 4. Ordering of mean NMSE across methods at 10 dB.
Outcome method_ordering() {
  RunSpec spec = desk_spec(100);
  spec.sweep = SnrSweep{{10.0}};
  const SweepResult result = sweep_snr(spec);
  auto db = [&](Method m) { return result.find(10.0, m)->nmse_db; };
  const double oracle = db(Method::kOracle);
  const double s = db(Method::kSSomp);
  const double p = db(Method::kPSomp);
  const double ang = db(Method::kAngularSomp);
  Report r;
  r.text << fmt("ORACLE %.2f dB, ", oracle) << fmt("S_SOMP %.2f dB, ", s)
         << fmt("P_SOMP %.2f dB, ", p) << fmt("ANGULAR_SOMP %.2f dB, ", ang)
         << fmt("LS %.2f dB; ", db(Method::kLs));
  r.check(s - oracle >= 1.0, fmt("S_SOMP - ORACLE = %.2f dB >= 1", s - oracle));
  r.check(p - s >= 1.0, fmt("P_SOMP - S_SOMP = %.2f dB >= 1", p - s));
  r.check(ang - p >= 1.0, fmt("ANGULAR_SOMP - P_SOMP = %.2f dB >= 1", ang - p));
  return {r.ok, r.text.str()};
}

Outcome monotone(const SweepResult& result, const char* unit) {
  Report r;
  const SweepRow* prev = nullptr;
  for (const SweepRow& row : result.rows) {
    r.text << fmt("%g", row.sweep_value) << unit << fmt(": %.2f dB; ", row.nmse_db);
    if (prev) r.check(row.nmse_db <= prev->nmse_db + 0.5,
                      fmt("step to %g", row.sweep_value) + fmt(" changes by %+.2f dB", row.nmse_db - prev->nmse_db));
    prev = &row;
  }
  return {r.ok, r.text.str()};
}

// 5. S-SOMP NMSE non-increasing in SNR.
Outcome snr_monotonicity() {
  RunSpec spec = desk_spec(100);
  spec.methods = {Method::kSSomp};
  spec.sweep = SnrSweep{{0.0, 5.0, 10.0, 15.0, 20.0}};
  return monotone(sweep_snr(spec), " dB");
}

// 6. S-SOMP NMSE non-increasing in pilot length at 5 dB.
Outcome pilot_monotonicity() {
  RunSpec spec = desk_spec(100);
  spec.methods = {Method::kSSomp};
  spec.sweep = PilotSweep{{8, 16, 32, 64}, 5.0};
  return monotone(sweep_pilot(spec), " slots");
}

// 7. Adjacent-column correlations on the 512-element grid.
Outcome correlation_structure() {
  const SystemConfig sys = paper_system();
  Report r;

  const SphericalCodebook polar = build_polar_codebook(sys, 0.55, 4.0);
  const CoherenceStats rings = coherence_stats(polar, 0);
  r.check(rings.distance.pairs > 0, std::to_string(rings.distance.pairs) +
                                        fmt(" adjacent ring pairs at pi/2, mean %.4f", rings.distance.mean));
  // Every pair must sit inside [delta - 0.2, delta + 0.2].
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t g = 0; g + 1 < polar.grid.size(); ++g) {
    const GridPoint& a = polar.grid[g];
    const GridPoint& b = polar.grid[g + 1];
    if (a.s != b.s || b.z != a.z + 1) continue;
    const double c = column_correlation(polar.matrix.col(static_cast<Index>(g)),
                                        polar.matrix.col(static_cast<Index>(g + 1)));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  r.check(lo >= 0.35 && hi <= 0.75, fmt("ring correlations in [%.4f", lo) + fmt(", %.4f]", hi) +
                                        " (allowed [0.35, 0.75])");

  // Adjacent elevations (t, 0, 0) and (t + 1, 0, 0): far-field ring, phi = 0.
  const UcaGeometry geom = UcaGeometry::from_config(sys);
  const auto thetas = elevation_grid(sys.radius(), sys.wavelength(), first_j0_zero());
  std::vector<double> values;
  for (std::size_t t = 0; t + 1 < thetas.size(); ++t) {
    values.push_back(column_correlation(
        far_field_steering(thetas[t], 0.0, geom, sys.wavelength()),
        far_field_steering(thetas[t + 1], 0.0, geom, sys.wavelength())));
  }
  const CorrelationSummary elev = summarize_correlations(values);
  r.check(elev.mean < 0.3, std::to_string(elev.pairs) + fmt(" elevation pairs, mean %.3e", elev.mean) +
                               fmt(", max %.3e (< 0.3)", elev.max));
  return {r.ok, r.text.str()};
}

// 8. Invariants on a desk-scale configuration.
Outcome invariant_suite() {
  Report r;
  RunSpec spec = desk_spec(20);
  const SystemConfig& sys = spec.system;
  const SphericalCodebook book = build_spherical_codebook(sys, spec.delta, spec.r_min);

  double norm_err = 0.0;
  for (Index g = 0; g < book.size(); ++g)
    norm_err = std::max(norm_err, std::abs(book.matrix.col(g).norm() - 1.0));
  const UcaGeometry geom = UcaGeometry::from_config(sys);
  for (const PathParams& p : sample_paths(kSeed, 200, spec.user_ranges)) {
    norm_err = std::max(norm_err, std::abs(near_field_steering(p.distance_m, p.elevation_rad,
                                                                p.azimuth_rad, geom,
                                                                sys.wavelength()).norm() - 1.0));
  }
  r.check(norm_err <= 1e-12, fmt("steering norm error %.1e", norm_err));

  const CombiningMatrix a = generate_combining(kSeed, sys.num_pilot_slots, sys.num_rf_chains,
                                               sys.num_antennas);
  const double modulus_err =
      (a.entries.cwiseAbs().array() - 1.0 / std::sqrt(sys.num_antennas)).abs().maxCoeff();
  r.check(modulus_err <= 1e-12, fmt("combiner modulus error %.1e", modulus_err));

  const CMatrix sensing = sensing_matrix(a.entries, book.matrix);
  bool monotone = true;
  double recon_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto paths = sample_paths(derive_seed(kSeed, {8, static_cast<std::uint64_t>(trial)}),
                                    3, spec.user_ranges);
    const ChannelMatrix h = generate_channel(paths, sys);
    const MeasurementSet y = synthesize_measurements(h, a, 5.0, trial);
    const EstimationResult est = simultaneous_omp(y.observations, sensing, book.matrix, 10);
    double prev = y.observations.norm();
    for (double norm : est.residual_norms) {
      monotone = monotone && norm <= prev * (1.0 + 1e-12);
      prev = norm;
    }
    CMatrix w_omega(sys.num_antennas, static_cast<Index>(est.support.size()));
    for (std::size_t k = 0; k < est.support.size(); ++k)
      w_omega.col(static_cast<Index>(k)) = book.matrix.col(est.support[k]);
    recon_err = std::max(recon_err, (est.channel_estimate - w_omega * est.sparse_coeffs).norm() /
                                        est.channel_estimate.norm());
  }
  r.check(monotone, "SOMP residual non-increasing");
  r.check(recon_err <= 1e-12, fmt("reconstruction identity error %.1e", recon_err));

  const ChannelMatrix h = generate_channel(sample_paths(kSeed, 3, spec.user_ranges), sys);
  const CMatrix clean = a.entries * h.entries;
  double worst_ratio = 0.0;
  for (double snr : {0.0, 10.0, 20.0}) {
    double measured = 0.0;
    double target = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const MeasurementSet y = synthesize_measurements(h, a, snr, derive_seed(kSeed, {9, static_cast<std::uint64_t>(k)}));
      measured += (y.observations - clean).squaredNorm() / static_cast<double>(clean.size());
      target = y.noise_variance;
    }
    const double expected = h.entries.squaredNorm() /
                            (sys.num_measurements() * sys.num_subcarriers * std::pow(10.0, snr / 10.0));
    worst_ratio = std::max({worst_ratio, std::abs(measured / 1000.0 / expected - 1.0),
                            std::abs(target / expected - 1.0)});
  }
  r.check(worst_ratio <= 0.05, fmt("SNR calibration deviation %.2f%%", 100.0 * worst_ratio));

  auto csv = [](const RunSpec& s) {
    std::ostringstream out;
    write_csv(run_sweep(s), out);
    return out.str();
  };
  const std::string first = csv(spec);
  const std::string second = csv(spec);
  RunSpec threaded = spec;
  threaded.workers = 3;
  const std::string third = csv(threaded);
  r.check(first == second && first == third,
          "full-run CSV byte-identical across reruns and worker counts (" +
              std::to_string(first.size()) + " bytes)");
  return {r.ok, r.text.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"rayleigh_distance", rayleigh_distance},
      {"codebook_structure", codebook_structure},
      {"noiseless_on_grid_recovery", noiseless_recovery},
      {"method_ordering", method_ordering},
      {"snr_monotonicity", snr_monotonicity},
      {"pilot_monotonicity", pilot_monotonicity},
      {"correlation_structure", correlation_structure},
      {"invariant_suite", invariant_suite},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s [%d] %s (%.1f s): %s\n", outcome.pass ? "PASS" : "FAIL", index, c.name, secs,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
