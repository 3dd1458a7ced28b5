#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "msqp/spins.hpp"

namespace msqp {

/// Everything a scenario run depends on. Text form: one `key = value` per line, `#` comments,
/// lists comma-separated or `linspace(a, b, n)`.
struct ExperimentConfig {
  std::string scenario = "deutsch_jozsa";
  std::string output;

  QuditSpec q1{10.0, 7.1, 2.0, 0.090};
  QuditSpec q2{10.0, 7.7, 2.0, 0.090};
  double field_mt = 50.0;
  double omega0_ghz = 7.5;
  /// Space used by deutsch_jozsa and cz_sweep; the other scenarios pick the minimal space per
  /// method.
  int n_max = 1;
  int levels1 = 5;
  int levels2 = 1;
  bool rwa = false;

  std::vector<double> b1_gauss;
  std::vector<double> t2_us;
  std::vector<double> quality;
  std::vector<double> jt;
  std::vector<double> tb;
  std::vector<int> oracles{1, 2, 3, 4};
  std::vector<std::string> methods{"resonant", "dispersive"};
  int trotter_steps = 6;

  double delta1_mhz = 20.0;
  double delta2_mhz = 30.0;
  double min_pulse_ns = 20.0;
  bool cz_fixed_slot = true;
  double detector_efficiency = 1.0;
  double detector_window_ns = 100.0;

  std::string integrator = "propagator";
  double steps_per_period = 50.0;
  double chunk_ns = 0.5;
  bool check_convergence = false;

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& scenario_names();

/// Defaults for a scenario (grids, space, noise points).
ExperimentConfig default_config(const std::string& scenario);

/// Requires a `scenario` key; unknown or repeated keys are errors with line numbers.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
void emit_config(std::ostream& out, const ExperimentConfig& config);

}  // namespace msqp
