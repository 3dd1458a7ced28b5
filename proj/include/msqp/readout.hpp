#pragma once

#include <string>
#include <vector>

#include "msqp/gates.hpp"
#include "msqp/lindblad.hpp"

namespace msqp {

/// Photon counter: instantaneous POVM at the end of the window, no dark counts.
struct DetectorModel {
  double efficiency = 1.0;
  double window_ns = 100.0;

  void validate() const;
};

struct DispersiveEstimate {
  double chi_mhz = 0.0;
  /// Time for the state-dependent resonator phase 2π·2χ·t to reach π: 1/(4χ).
  double duration_us = 0.0;
  bool valid = true;  ///< false when Δ < 10 G
};

/// χ = G²/Δ with the duration model above.
DispersiveEstimate dispersive_shift(double g_mhz, double delta_mhz);

/// Levels (lower, upper) of one qudit, as retained positions; upper emits the photon.
struct ReadoutPair {
  int qudit = 0;
  int lower = 0;
  int upper = 1;
};

struct ReadoutResult {
  /// [0]: no click (lower), [1]: click (upper).
  std::vector<double> probabilities;
  /// Post-measurement states with the resonator reset to vacuum; the click branch includes the
  /// re-preparation π pulse back to the upper level.
  std::vector<Matrix> post_states;
  double swap_ns = 0.0;
  double duration_ns = 0.0;     ///< swap + detection window
  double reprepare_ns = 0.0;    ///< extra time on the click branch
  double residual_entanglement = 0.0;  ///< 1 - calibrated swap transfer
  std::vector<std::string> warnings;
};

struct ReadoutOptions {
  double b1_gauss = 2.0;  ///< re-preparation pulse amplitude
  EvolveOptions evolve;
};

ReadoutResult simulate_resonant_readout(const Matrix& rho, const CompositeSpace& space,
                                        const ReadoutPair& pair, const DetectorModel& detector,
                                        const NoiseModel& noise,
                                        const ReadoutOptions& options = {});

/// Tr over the resonator, re-embedded with the resonator in vacuum.
Matrix reset_resonator(const CompositeSpace& space, const Matrix& rho);

}  // namespace msqp
