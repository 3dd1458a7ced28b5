#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "msqp/config.hpp"
#include "msqp/lindblad.hpp"

namespace msqp {

/// Rows of formatted cells in a fixed column order. Numbers are printed with %.12g so that
/// identical runs give identical bytes.
struct BenchmarkTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
  /// Header plus rows, newline-terminated.
  void write_csv(std::ostream& out) const;
};

std::string format_number(double v);

/// Worker count from MSQP_WORKERS, else the hardware concurrency (at least 1).
int worker_count();

/// Runs job(0..n-1) on `workers` threads. Results must be written by index; the first exception
/// (lowest index) is rethrown after all workers stop.
void parallel_for(int n, int workers, const std::function<void(int)>& job);

/// Evolution settings taken from the config.
EvolveOptions evolve_options(const ExperimentConfig& config);

/// Fixed benchmark amplitudes on |p>|q>, p = 0, 1 and q = 0..3 (not normalized).
const std::vector<double>& benchmark_amplitudes();

BenchmarkTable run_deutsch_jozsa(const ExperimentConfig& config, int workers = 1);
BenchmarkTable sweep_cz_error(const ExperimentConfig& config, int workers = 1);
BenchmarkTable compare_gate_fidelity(const ExperimentConfig& config, int workers = 1);
BenchmarkTable simulate_heisenberg(const ExperimentConfig& config, int workers = 1);
BenchmarkTable simulate_tim(const ExperimentConfig& config, int workers = 1);

/// Dispatches on config.scenario.
BenchmarkTable run_scenario(const ExperimentConfig& config, int workers = 1);

/// Exact references on the 4-dimensional logical space, |0> = s_z +1/2, qubit 1 major.
Matrix heisenberg_exact(double jt);
Matrix tim_exact(double tb);
/// n first-order Trotter steps of the TIM evolution with J = 2b.
Matrix tim_trotter(double tb, int n);

struct RunManifest {
  ExperimentConfig config;
  std::string version;
  int workers = 1;
  std::vector<std::pair<std::string, double>> timings_s;
  std::vector<std::string> warnings;

  void write(std::ostream& out) const;
};

std::string tool_version();

}  // namespace msqp
