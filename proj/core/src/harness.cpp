// SPDX-License-Identifier: Apache-2.0

#include "nfuca/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "nfuca/parallel.hpp"
#include "nfuca/rng.hpp"

namespace nfuca {
namespace {

// Stream tags keep the random streams of paths, combiner and noise disjoint.
constexpr std::uint64_t kPathStream = 0x70617468;     // "path"
constexpr std::uint64_t kCombinerStream = 0x636f6d62;  // "comb"
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;     // "nois"

constexpr Method kMethodOrder[] = {Method::kSSomp, Method::kPSomp, Method::kAngularSomp,
                                   Method::kLs, Method::kOracle};

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kSSomp: return "S_SOMP";
    case Method::kPSomp: return "P_SOMP";
    case Method::kAngularSomp: return "ANGULAR_SOMP";
    case Method::kLs: return "LS";
    case Method::kOracle: return "ORACLE";
  }
  return "UNKNOWN";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kMethodOrder)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::vector<Method> all_methods() { return {std::begin(kMethodOrder), std::end(kMethodOrder)}; }

bool RunSpec::uses(Method method) const {
  return std::find(methods.begin(), methods.end(), method) != methods.end();
}

void RunSpec::validate() const {
  system.validate();
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid run spec: " + what);
  };
  require(trials >= 1, "trials must be >= 1");
  require(workers >= 1, "workers must be >= 1");
  require(!methods.empty(), "method set is empty");
  require(std::set<Method>(methods.begin(), methods.end()).size() == methods.size(),
          "method set has duplicates");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(num_paths >= 1 && num_paths <= system.num_antennas,
          "num_paths must lie in [1, num_antennas]");
  require(iterations() >= 1, "l_hat must be >= 1");
  try {
    user_ranges.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid run spec: ") + e.what());
  }
  require(user_ranges.distance_m.lo > system.radius(),
          "user distances must lie outside the array");

  if (const auto* snr = std::get_if<SnrSweep>(&sweep)) {
    require(!snr->snr_db.empty(), "snr_list_db is empty");
    require(std::is_sorted(snr->snr_db.begin(), snr->snr_db.end()), "snr_list_db is not sorted");
    for (double v : snr->snr_db) require(!std::isnan(v), "snr_list_db contains NaN");
    require(iterations() <= system.num_measurements(), "l_hat exceeds P * N_RF");
  } else {
    const auto& pilot = std::get<PilotSweep>(sweep);
    require(!pilot.pilot_slots.empty(), "pilot_list is empty");
    require(std::is_sorted(pilot.pilot_slots.begin(), pilot.pilot_slots.end()),
            "pilot_list is not sorted");
    require(pilot.pilot_slots.front() >= 1, "pilot lengths must be >= 1");
    require(!std::isnan(pilot.snr_db), "snr_db is NaN");
    require(iterations() <= pilot.pilot_slots.front() * system.num_rf_chains,
            "l_hat exceeds P * N_RF for the shortest pilot");
  }
}

RunSpec desk_profile() {
  RunSpec spec;
  spec.system = SystemConfig{30e9, 100e6, 16, 128, 0.005, 4, 16};
  spec.delta = 0.55;
  spec.r_min = 1.0;
  spec.num_paths = 3;
  spec.trials = 100;
  return spec;
}

RunSpec paper_profile() {
  RunSpec spec;
  spec.system = SystemConfig{30e9, 100e6, 16, 512, 0.005, 4, 32};
  spec.delta = 0.55;
  spec.r_min = 4.0;
  spec.num_paths = 3;
  spec.trials = 100;
  return spec;
}

const MethodOutcome* TrialRecord::find(Method method) const {
  for (const auto& o : outcomes)
    if (o.method == method) return &o;
  return nullptr;
}

const SweepRow* SweepResult::find(double sweep_value, Method method) const {
  for (const auto& r : rows)
    if (r.sweep_value == sweep_value && r.method == method) return &r;
  return nullptr;
}

Experiment::Experiment(RunSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.uses(Method::kSSomp))
    spherical_ = std::make_shared<const SphericalCodebook>(
        build_spherical_codebook(spec_.system, spec_.delta, spec_.r_min, spec_.workers));
  if (spec_.uses(Method::kPSomp))
    polar_ = std::make_shared<const SphericalCodebook>(
        build_polar_codebook(spec_.system, spec_.delta, spec_.r_min, spec_.workers));
  if (spec_.uses(Method::kAngularSomp))
    angular_ = std::make_shared<const SphericalCodebook>(build_angular_codebook(spec_.system));
}

PilotContext Experiment::prepare(int pilot_slots) const {
  PilotContext ctx;
  ctx.system = spec_.system;
  ctx.system.num_pilot_slots = pilot_slots;
  ctx.system.validate();
  const auto seed = derive_seed(spec_.master_seed,
                                {kCombinerStream, static_cast<std::uint64_t>(pilot_slots)});
  ctx.combining = generate_combining(seed, pilot_slots, ctx.system.num_rf_chains,
                                     ctx.system.num_antennas);
  if (spherical_) ctx.spherical_sensing = sensing_matrix(ctx.combining.entries, spherical_->matrix, spec_.workers);
  if (polar_) ctx.polar_sensing = sensing_matrix(ctx.combining.entries, polar_->matrix, spec_.workers);
  if (angular_) ctx.angular_sensing = sensing_matrix(ctx.combining.entries, angular_->matrix, spec_.workers);
  return ctx;
}

TrialRecord Experiment::run_trial(const PilotContext& ctx, double snr_db, double sweep_value,
                                  int trial_index) const {
  const auto trial_key = static_cast<std::uint64_t>(trial_index);
  const auto paths = sample_paths(derive_seed(spec_.master_seed, {kPathStream, trial_key}),
                                  spec_.num_paths, spec_.user_ranges);
  const ChannelMatrix h = generate_channel(paths, ctx.system);
  const MeasurementSet y = synthesize_measurements(
      h, ctx.combining, snr_db,
      derive_seed(spec_.master_seed, {kNoiseStream, seed_key(sweep_value), trial_key}));

  TrialRecord record;
  record.sweep_value = sweep_value;
  record.trial_index = trial_index;
  for (Method method : spec_.methods) {
    MethodOutcome outcome;
    outcome.method = method;
    const auto start = std::chrono::steady_clock::now();
    try {
      CMatrix estimate;
      switch (method) {
        case Method::kSSomp:
          estimate = simultaneous_omp(y.observations, ctx.spherical_sensing, spherical_->matrix,
                                      spec_.iterations())
                         .channel_estimate;
          break;
        case Method::kPSomp:
          estimate = simultaneous_omp(y.observations, ctx.polar_sensing, polar_->matrix,
                                      spec_.iterations())
                         .channel_estimate;
          break;
        case Method::kAngularSomp:
          estimate = simultaneous_omp(y.observations, ctx.angular_sensing, angular_->matrix,
                                      spec_.iterations())
                         .channel_estimate;
          break;
        case Method::kLs:
          estimate = ls_estimate(y, ctx.combining).channel;
          break;
        case Method::kOracle:
          estimate = oracle_estimate(y, ctx.combining, paths, ctx.system).channel;
          break;
      }
      outcome.nmse = nmse(h.entries, estimate);
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    record.outcomes.push_back(std::move(outcome));
  }
  return record;
}

TrialRecord run_trial(const RunSpec& spec, double sweep_value, int trial_index) {
  const Experiment experiment(spec);
  if (const auto* pilot = std::get_if<PilotSweep>(&spec.sweep)) {
    const PilotContext ctx = experiment.prepare(static_cast<int>(sweep_value));
    return experiment.run_trial(ctx, pilot->snr_db, sweep_value, trial_index);
  }
  const PilotContext ctx = experiment.prepare(spec.system.num_pilot_slots);
  return experiment.run_trial(ctx, sweep_value, sweep_value, trial_index);
}

namespace {

void run_point(const Experiment& experiment, const PilotContext& ctx, double snr_db,
               double sweep_value, SweepResult& out) {
  const RunSpec& spec = experiment.spec();
  std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials));
  parallel_for(records.size(), spec.workers, [&](std::size_t i) {
    records[i] = experiment.run_trial(ctx, snr_db, sweep_value, static_cast<int>(i));
  });

  // Reduce in trial order so the sums do not depend on scheduling.
  for (Method method : spec.methods) {
    SweepRow row;
    row.sweep_value = sweep_value;
    row.method = method;
    const bool in_db = spec.averaging == NmseAveraging::kDb;
    double sum = 0.0;
    double seconds = 0.0;
    int count = 0;
    for (const TrialRecord& r : records) {
      const MethodOutcome* o = r.find(method);
      seconds += o->seconds;
      if (o->nmse) {
        sum += in_db ? to_db(*o->nmse) : *o->nmse;
        ++count;
      }
    }
    row.trials = count;
    const double mean = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
    row.nmse_linear = in_db ? std::pow(10.0, mean / 10.0) : mean;
    row.nmse_db = in_db ? mean : to_db(mean);
    row.wall_time_s = spec.record_timing ? seconds : 0.0;
    out.rows.push_back(row);
  }
}

}  // namespace

SweepResult sweep_snr(const RunSpec& spec) {
  const auto* snr = std::get_if<SnrSweep>(&spec.sweep);
  if (!snr) throw ConfigError("sweep_snr: spec does not hold an SNR sweep");
  const Experiment experiment(spec);
  const PilotContext ctx = experiment.prepare(spec.system.num_pilot_slots);
  SweepResult out;
  for (double value : snr->snr_db) run_point(experiment, ctx, value, value, out);
  return out;
}

SweepResult sweep_pilot(const RunSpec& spec) {
  const auto* pilot = std::get_if<PilotSweep>(&spec.sweep);
  if (!pilot) throw ConfigError("sweep_pilot: spec does not hold a pilot sweep");
  const Experiment experiment(spec);
  SweepResult out;
  for (int p : pilot->pilot_slots) {
    const PilotContext ctx = experiment.prepare(p);
    run_point(experiment, ctx, pilot->snr_db, static_cast<double>(p), out);
  }
  return out;
}

SweepResult run_sweep(const RunSpec& spec) {
  return std::holds_alternative<SnrSweep>(spec.sweep) ? sweep_snr(spec) : sweep_pilot(spec);
}

}  // namespace nfuca
