#pragma once

#include <vector>

#include "msqp/composite.hpp"
#include "msqp/lindblad.hpp"

namespace msqp {

/// U(t1, t0) seen in the logical frame: F(t1) U_lab F(t0)†.
Matrix logical_propagator(const CompositeSpace& space, const ControlSchedule& schedule, double t0,
                          double t1, const EvolveOptions& options = {});

/// Rows/columns of the zero-photon computational states k1 < comp1, k2 < comp2.
std::vector<int> computational_indices(const CompositeSpace& space, int comp1, int comp2);
Matrix computational_block(const CompositeSpace& space, const Matrix& u, int comp1, int comp2);

/// Product-form phases u[k1] + v[k2] best matching the diagonal of a comp1·comp2 matrix.
struct ProductPhases {
  std::vector<double> q1, q2;
  double residual = 0.0;  ///< largest deviation of the diagonal phases from the product form
};
ProductPhases fit_product_phases(const Matrix& m, int comp1, int comp2);
/// diag(e^{i(q1[k1] + q2[k2])}).
Matrix product_phase_matrix(const ProductPhases& p);

struct EmissionCalibration {
  double seed_ns = 0.0;      ///< 1/(4 G^m)
  double duration_ns = 0.0;  ///< maximises the transfer
  double detuning_ghz = 0.0; ///< resonator detuning that matches the gap
  double transfer = 0.0;
};

/// Full |upper, 0_ph> -> |lower, 1_ph> transfer on `qudit` (other qudit in its lowest level).
EmissionCalibration calibrate_emission(const CompositeSpace& space, int qudit, int lower,
                                       int upper);

struct SemiresonantCalibration {
  double offset_mhz = 0.0;   ///< resonator minus transition frequency
  double duration_ns = 0.0;  ///< one generalised Rabi cycle
  double phase = 0.0;        ///< acquired phase in (0, 2π), equal to -φ mod 2π
  double return_population = 0.0;
};

/// Detuned 2π cycle returning amplitude with phase e^{-iφ}; solved on a two-level oracle.
SemiresonantCalibration calibrate_semiresonant_phase(double coupling_mhz, double phi,
                                                     double max_offset_mhz);

/// Two-level oracle: returns the amplitude left in |0, 1_ph> after `duration_ns` with coupling
/// G and offset δ, H = [[0, G], [G, -δ]].
Complex semiresonant_amplitude(double coupling_mhz, double offset_mhz, double duration_ns);

/// Resonant controlled phase U_φ^{01}: e^{-iφ} on |q1=0, q2=1>. Times relative to gate start.
struct ResonantCZPlan {
  double phi = 0.0;
  double emission_detuning_ghz = 0.0;
  double emission_ns = 0.0;
  double semi_detuning_ghz = 0.0;
  double semi_offset_mhz = 0.0;
  double semi_ns = 0.0;
  double wait_ns = 0.0;     ///< idle between emission and the semi-resonant cycle
  double slot_ns = 0.0;     ///< total occupied time, >= active time
  bool identity = false;    ///< φ ≡ 0: the slot is left idle
  ProductPhases local;      ///< residual single-qudit phases, folded into the frame
  double conditional_error = 0.0;  ///< |conditional phase - (-φ)| after calibration
  double max_photon = 0.0;  ///< closed-system ⟨n⟩ left at the end, worst basis state

  double active_ns() const;
};

struct CZOptions {
  int comp1 = 2;
  int comp2 = 2;
  /// Pad every controlled phase to the duration of the φ = π gate.
  bool fixed_slot = true;
  double max_detuning_ghz = 2.25;
};

ControlSchedule cz_schedule(const ResonantCZPlan& plan);

/// Calibrates the full native gate on `space` (q1 levels {0, 1, e}, q2 levels incl. {0, 1}).
ResonantCZPlan schedule_cz(const CompositeSpace& space, double phi, const CZOptions& options = {});

/// Chooses the idle wait so that |1, 1> (and every non-target q2 = 1 component) returns with
/// zero phase, then fits the leftover product-form phases.
void compensate_phases(ResonantCZPlan& plan, const CompositeSpace& space,
                       const CZOptions& options);

/// Γ = G1 G2 / Δ in MHz; ConfigError when Δ < 10 max(G).
double effective_dispersive_coupling(double g1_mhz, double g2_mhz, double delta_mhz);

struct DispersivePlan {
  double delta1_mhz = 20.0;        ///< resonator above the q1 gap during the window
  double delta2_idle_mhz = 30.0;   ///< documented idle value for q2
  double field_shift_mt = 0.0;     ///< local field on q2 closing the gap mismatch
  double resonator_detuning_ghz = 0.0;
  double gamma_mhz = 0.0;          ///< analytic Γ
  double tau = 0.0;                ///< U_XY angle
  double hold_ns = 0.0;
  double wait_ns = 0.0;            ///< idle before the window, fixes the exchange phase
  double swap_fraction = 0.0;      ///< closed-system |<10|U|01>|²
  double leakage = 0.0;            ///< worst one-photon population at the end

  double total_ns() const { return wait_ns + hold_ns; }
};

struct DispersiveOptions {
  double delta1_mhz = 20.0;
  double delta2_idle_mhz = 30.0;
  double max_detuning_ghz = 2.25;
};

/// Interaction window only (no wait) for angle τ; the hold time is calibrated so the closed-
/// system swap probability equals sin²(τ/2).
DispersivePlan schedule_iswap_dispersive(const CompositeSpace& space, double tau,
                                         const DispersiveOptions& options = {});
ControlSchedule dispersive_schedule(const DispersivePlan& plan);

/// exp(-iτ (s_x s_x + s_y s_y)) on two qubits.
Matrix xy_unitary(double tau);

}  // namespace msqp
