// SPDX-License-Identifier: Apache-2.0

// nfuca: codebook inspection and Monte Carlo NMSE sweeps.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/numerical failure.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nfuca/codebook.hpp"
#include "nfuca/codebook_io.hpp"
#include "nfuca/harness.hpp"
#include "nfuca/run_config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kSlowAntennaThreshold = 512;

struct CommonFlags {
  std::string profile = "desk";
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::string methods;
  std::string out;
  bool slow = false;
};

nfuca::RunSpec resolve_spec(const CommonFlags& flags,
                            std::optional<std::variant<nfuca::SnrSweep, nfuca::PilotSweep>> sweep) {
  nfuca::RunSpec spec = nfuca::profile_by_name(flags.profile);
  if (sweep) spec.sweep = *sweep;
  if (!flags.config_path.empty())
    nfuca::apply_config(spec, nfuca::load_config_file(flags.config_path));
  if (flags.seed) spec.master_seed = *flags.seed;
  if (flags.trials) spec.trials = *flags.trials;
  if (flags.workers) spec.workers = *flags.workers;
  if (!flags.methods.empty()) spec.methods = nfuca::parse_method_list(flags.methods);
  if (spec.system.num_antennas >= kSlowAntennaThreshold && !flags.slow)
    throw nfuca::ConfigError("N = " + std::to_string(spec.system.num_antennas) +
                             " is a slow run; pass --slow to allow it");
  spec.validate();
  return spec;
}

nfuca::SphericalCodebook build_codebook(const nfuca::RunSpec& spec, const std::string& kind) {
  if (kind == "spherical")
    return nfuca::build_spherical_codebook(spec.system, spec.delta, spec.r_min, spec.workers);
  if (kind == "polar")
    return nfuca::build_polar_codebook(spec.system, spec.delta, spec.r_min, spec.workers);
  if (kind == "angular") return nfuca::build_angular_codebook(spec.system);
  throw nfuca::ConfigError("unknown codebook kind '" + kind + "'");
}

void print_summary(const char* label, const nfuca::CorrelationSummary& s) {
  std::printf("  %-10s pairs=%-8zu max=%.6f mean=%.6f median=%.6f p90=%.6f p99=%.6f\n", label,
              s.pairs, s.max, s.mean, s.median, s.p90, s.p99);
}

int run_codebook_stats(const nfuca::RunSpec& spec, const std::string& kind, std::size_t budget) {
  const auto book = build_codebook(spec, kind);
  const double radius = spec.system.radius();
  const double lambda = spec.system.wavelength();
  std::printf("kind            %s\n", std::string(nfuca::to_string(book.kind)).c_str());
  std::printf("N               %lld\n", static_cast<long long>(book.matrix.rows()));
  std::printf("G               %lld\n", static_cast<long long>(book.size()));
  std::printf("radius_m        %.9g\n", radius);
  std::printf("wavelength_m    %.9g\n", lambda);
  if (book.kind != nfuca::CodebookKind::kAngular) {
    const auto& p = book.params;
    const auto thetas = nfuca::elevation_grid(radius, lambda, p.alpha);
    const auto phis = nfuca::azimuth_grid(radius, lambda, p.alpha, nfuca::kPi / 2.0);
    const auto rings = nfuca::distance_grid(nfuca::kPi / 2.0, p.z_cap, p.r_min);
    std::printf("alpha           %.12f\n", p.alpha);
    std::printf("beta_delta      %.12f\n", p.beta_delta);
    std::printf("z_cap_m         %.9g\n", p.z_cap);
    std::printf("r_min_m         %.9g\n", p.r_min);
    std::printf("elevations      %zu\n",
                book.kind == nfuca::CodebookKind::kPolar ? std::size_t{1} : thetas.size());
    std::printf("azimuths@pi/2   %zu\n", phis.size());
    std::printf("rings@pi/2      %zu (incl. far field)\n", rings.size());
  }
  const auto stats = nfuca::coherence_stats(book, budget, spec.master_seed, spec.workers);
  std::printf("coherence\n");
  print_summary("elevation", stats.elevation);
  print_summary("azimuth", stats.azimuth);
  print_summary("distance", stats.distance);
  print_summary("random", stats.random);
  return 0;
}

int run_codebook_build(const nfuca::RunSpec& spec, const std::string& kind,
                       const std::string& grid_out, const std::string& binary_out) {
  const auto book = build_codebook(spec, kind);
  if (grid_out.empty()) throw nfuca::ConfigError("codebook build needs --out <grid file>");
  nfuca::write_grid_text(grid_out, book);
  if (!binary_out.empty()) nfuca::write_matrix_binary(binary_out, book.matrix);
  std::printf("wrote %lld grid points to %s\n", static_cast<long long>(book.size()),
              grid_out.c_str());
  return 0;
}

int run_sweep(const nfuca::RunSpec& spec, const std::string& out) {
  const auto result = nfuca::run_sweep(spec);
  if (out.empty()) {
    nfuca::write_csv(result, std::cout);
  } else {
    nfuca::emit_csv(result, out);
    for (const auto& row : result.rows)
      std::fprintf(stderr, "%10g %-13s %9.3f dB  (%d trials)\n", row.sweep_value,
                   std::string(nfuca::to_string(row.method)).c_str(), row.nmse_db, row.trials);
  }
  return 0;
}

int run_single_trial(const nfuca::RunSpec& spec, double value, int index) {
  const auto record = nfuca::run_trial(spec, value, index);
  std::printf("sweep_value=%g trial=%d\n", record.sweep_value, record.trial_index);
  int failures = 0;
  for (const auto& o : record.outcomes) {
    const std::string name(nfuca::to_string(o.method));
    if (o.nmse) {
      std::printf("%-13s nmse=%.12g (%.3f dB)\n", name.c_str(), *o.nmse, 10.0 * std::log10(*o.nmse));
    } else {
      std::printf("%-13s error: %s\n", name.c_str(), o.error.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field UCA channel estimation: codebooks and NMSE sweeps"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--profile", flags.profile, "Built-in profile: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--config", flags.config_path, "key = value file overriding the profile");
  app.add_option("--seed", flags.seed, "Master seed");
  app.add_option("--trials", flags.trials, "Monte Carlo trials per sweep point");
  app.add_option("--workers", flags.workers, "Worker threads");
  app.add_option("--methods", flags.methods,
                 "Comma list of S_SOMP,P_SOMP,ANGULAR_SOMP,LS,ORACLE");
  app.add_option("--out", flags.out, "Output path (CSV for sweeps, grid text for codebooks)");
  app.add_flag("--slow", flags.slow, "Allow runs with N >= 512");

  auto* codebook = app.add_subcommand("codebook", "Build or inspect a dictionary");
  codebook->require_subcommand(1);
  codebook->fallthrough();
  std::string kind = "spherical";
  std::string binary_out;
  std::size_t budget = 10000;
  auto* cb_build = codebook->add_subcommand("build", "Write grid metadata and optional binary");
  cb_build->fallthrough();
  cb_build->add_option("--kind", kind)->check(CLI::IsMember({"spherical", "polar", "angular"}));
  cb_build->add_option("--binary", binary_out, "Raw little-endian matrix output");
  auto* cb_stats = codebook->add_subcommand("stats", "Print grid sizes and coherence");
  cb_stats->fallthrough();
  cb_stats->add_option("--kind", kind)->check(CLI::IsMember({"spherical", "polar", "angular"}));
  cb_stats->add_option("--budget", budget, "Random column pairs to sample");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo NMSE sweep");
  sweep->require_subcommand(1);
  sweep->fallthrough();
  auto* sweep_snr = sweep->add_subcommand("snr", "NMSE versus SNR");
  sweep_snr->fallthrough();
  auto* sweep_pilot = sweep->add_subcommand("pilot", "NMSE versus pilot length");
  sweep_pilot->fallthrough();

  auto* trial = app.add_subcommand("trial", "Run one trial and print per-method NMSE");
  trial->fallthrough();
  double trial_value = 10.0;
  int trial_index = 0;
  bool trial_pilot = false;
  trial->add_option("--value", trial_value, "SNR in dB, or pilot length with --pilot");
  trial->add_option("--index", trial_index, "Trial index");
  trial->add_flag("--pilot", trial_pilot, "Interpret --value as a pilot length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*cb_build || *cb_stats) {
      const auto spec = resolve_spec(flags, std::nullopt);
      if (*cb_build) return run_codebook_build(spec, kind, flags.out, binary_out);
      return run_codebook_stats(spec, kind, budget);
    }
    if (*sweep_snr) return run_sweep(resolve_spec(flags, nfuca::SnrSweep{}), flags.out);
    if (*sweep_pilot) return run_sweep(resolve_spec(flags, nfuca::PilotSweep{}), flags.out);
    if (*trial) {
      std::variant<nfuca::SnrSweep, nfuca::PilotSweep> kind_of_sweep = nfuca::SnrSweep{};
      if (trial_pilot) kind_of_sweep = nfuca::PilotSweep{};
      return run_single_trial(resolve_spec(flags, kind_of_sweep), trial_value, trial_index);
    }
  } catch (const nfuca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
