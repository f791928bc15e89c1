#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "evtlab/dynamics.hpp"
#include "evtlab/evt.hpp"
#include "evtlab/observables.hpp"

namespace evtlab {

enum class Experiment { Tail, Evd, Kth, Returns, Excursion, CheckConditions };

/// "tail", "evd", "kth", "returns", "excursion", "check-conditions".
std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Flat key = value experiment description. Optional fields left unset take
/// a default that depends on the observable.
struct ExperimentConfig {
  Experiment experiment = Experiment::Evd;
  int dim = 2;
  FlowSpec flow = FlowSpec::geodesic();
  Observable observable = Observable::ShortestVector;
  double m0 = 1.0;
  double q = 1.3;
  int n = 14;
  int k = 1;
  /// Tail exponent used for rescaling; unset means 2 for delta, 3 for
  /// neglog and the fitted exponent for excursion.
  std::optional<double> v;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  /// "identity" or the path of a frame JSON file.
  std::string base_point = "identity";
  int search_bound = 3;
  /// Where the report goes; empty means stdout.
  std::string output;
  /// 0 = hardware concurrency. Never affects results.
  unsigned threads = 0;
  /// Mixing-rate hypothesis for check-conditions (k doubles as the Sobolev
  /// order there).
  double mixing_delta = 1.0;
  /// Tail-fit grid; unset bounds take observable defaults.
  std::optional<double> tail_z_min;
  std::optional<double> tail_z_max;
  double tail_z_step = 0.25;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys, bad
/// values and cross-field inconsistencies raise ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text);
/// Relative base_point paths are resolved against the config file's directory.
ExperimentConfig load_config(const std::string& path);

/// Every key in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Applies one key = value assignment (used by the parser and the CLI).
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Throws ConfigError on cross-field inconsistency.
void validate(const ExperimentConfig& config);

/// Observable actually simulated: returns and excursion fix it.
Observable effective_observable(const ExperimentConfig& config);
SparseSchedule schedule_of(const ExperimentConfig& config);
/// Loads the base point (if any) and builds the observable.
ObservableKind observable_kind_of(const ExperimentConfig& config);
/// Default tail-fit grid bounds for an observable.
std::pair<double, double> default_tail_range(Observable obs);

}  // namespace evtlab
