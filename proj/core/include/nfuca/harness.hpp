// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nfuca/channel.hpp"
#include "nfuca/codebook.hpp"
#include "nfuca/estimator.hpp"

namespace nfuca {

enum class Method { kSSomp, kPSomp, kAngularSomp, kLs, kOracle };

/// "S_SOMP", "P_SOMP", "ANGULAR_SOMP", "LS", "ORACLE".
std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
std::vector<Method> all_methods();

struct SnrSweep {
  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
};

struct PilotSweep {
  std::vector<int> pilot_slots{8, 16, 32, 64};
  double snr_db = 5.0;
};

/// How per-trial NMSE values are combined into one sweep row.
enum class NmseAveraging { kLinear, kDb };

struct RunSpec {
  SystemConfig system;
  double delta = 0.55;
  double r_min = 1.0;
  int num_paths = 3;
  std::optional<int> l_hat;  // defaults to num_paths
  UserRanges user_ranges;
  std::vector<Method> methods = all_methods();
  int trials = 100;
  std::uint64_t master_seed = 1;
  std::variant<SnrSweep, PilotSweep> sweep = SnrSweep{};
  int workers = 1;
  bool record_timing = false;
  NmseAveraging averaging = NmseAveraging::kLinear;

  /// Throws ConfigError.
  void validate() const;
  int iterations() const { return l_hat.value_or(num_paths); }
  bool uses(Method method) const;
};

/// N = 128, M = 16, P = 16, N_RF = 4, L = 3, 100 trials.
RunSpec desk_profile();
/// N = 512, P = 32, 30 GHz, d = 5 mm; r_min = 4 m.
RunSpec paper_profile();

struct MethodOutcome {
  Method method = Method::kSSomp;
  std::optional<double> nmse;  // empty on failure
  std::string error;
  double seconds = 0.0;
};

struct TrialRecord {
  double sweep_value = 0.0;
  int trial_index = 0;
  std::vector<MethodOutcome> outcomes;

  const MethodOutcome* find(Method method) const;
};

/// Everything that depends on the pilot length only: the combiner and the
/// sensing products A W of each dictionary in use.
struct PilotContext {
  SystemConfig system;
  CombiningMatrix combining;
  CMatrix spherical_sensing;
  CMatrix polar_sensing;
  CMatrix angular_sensing;
};

/// Validated spec plus the dictionaries it needs, built once.
class Experiment {
 public:
  explicit Experiment(RunSpec spec);

  const RunSpec& spec() const { return spec_; }
  const SphericalCodebook* spherical() const { return spherical_.get(); }
  const SphericalCodebook* polar() const { return polar_.get(); }
  const SphericalCodebook* angular() const { return angular_.get(); }

  /// The combiner seed depends on (master_seed, pilot_slots) only.
  PilotContext prepare(int pilot_slots) const;

  /// Paths depend on (master_seed, trial_index); noise additionally on the
  /// sweep value. Every method sees the same H, A and Y.
  TrialRecord run_trial(const PilotContext& context, double snr_db,
                        double sweep_value, int trial_index) const;

 private:
  RunSpec spec_;
  std::shared_ptr<const SphericalCodebook> spherical_;
  std::shared_ptr<const SphericalCodebook> polar_;
  std::shared_ptr<const SphericalCodebook> angular_;
};

/// One-shot trial. `sweep_value` is an SNR in dB or a pilot length,
/// depending on the spec's sweep kind.
TrialRecord run_trial(const RunSpec& spec, double sweep_value,
                      int trial_index);

struct SweepRow {
  double sweep_value = 0.0;
  Method method = Method::kSSomp;
  double nmse_linear = 0.0;
  double nmse_db = 0.0;
  int trials = 0;
  double wall_time_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  const SweepRow* find(double sweep_value, Method method) const;
};

SweepResult sweep_snr(const RunSpec& spec);
SweepResult sweep_pilot(const RunSpec& spec);
SweepResult run_sweep(const RunSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,method,nmse_linear,nmse_db,trials,wall_time_s";

void write_csv(const SweepResult& result, std::ostream& out);
/// Throws std::runtime_error naming the path and the OS cause.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
SweepResult read_csv(std::istream& in);
SweepResult read_csv(const std::filesystem::path& path);

}  // namespace nfuca
