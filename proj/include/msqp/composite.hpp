#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msqp/spins.hpp"
#include "msqp/types.hpp"

namespace msqp {

/// Rectangular microwave pulse on the spin control line; acts on both qudits via g_i S_yi.
struct DrivePulse {
  double amplitude_g = 0.0;  ///< B1 in gauss
  double carrier_ghz = 0.0;
  double phase = 0.0;  ///< rad, drive is cos(2π f t + phase)
  double t0_ns = 0.0;
  double duration_ns = 0.0;

  double end_ns() const { return t0_ns + duration_ns; }
  bool active(double t) const { return t >= t0_ns && t < end_ns(); }
};

/// Resonator detuning δ = ω_r - ω0 held on [start, start+duration). The value ramps linearly
/// from δ(start⁻) to the target over ramp_ns; outside every segment δ = 0.
struct DetuningSegment {
  double start_ns = 0.0;
  double duration_ns = 0.0;
  double delta_ghz = 0.0;
  double ramp_ns = 0.0;

  double end_ns() const { return start_ns + duration_ns; }
};

/// Local static-field offset on one qudit (additive g μB δB S_z term), instantaneous edges.
struct FieldSegment {
  int qudit = 1;  ///< 0 or 1
  double start_ns = 0.0;
  double duration_ns = 0.0;
  double delta_mt = 0.0;

  double end_ns() const { return start_ns + duration_ns; }
};

/// Piecewise classical controls over [0, span_ns]. A pure function of time.
struct ControlSchedule {
  std::vector<DrivePulse> pulses;
  std::vector<DetuningSegment> detunings;
  std::vector<FieldSegment> fields;
  double span_ns = 0.0;

  /// Non-overlap per channel, positive durations, |δ| <= max_abs_detuning.
  void validate(double max_abs_detuning_ghz) const;
  double detuning_at(double t) const;
  /// ∫_0^t δ(t') dt' in GHz·ns.
  double detuning_integral(double t) const;
  double field_at(int qudit, double t) const;
  /// ∫_0^t δB(t') dt' in mT·ns.
  double field_integral(int qudit, double t) const;
  /// Sorted, de-duplicated control discontinuities inside [t0, t1], endpoints included.
  std::vector<double> breakpoints(double t0, double t1) const;
  /// Pulses active on [t, t+ε).
  std::vector<const DrivePulse*> active_pulses(double t) const;
  /// True when δ(t) changes inside (t0, t1) (ramping).
  bool ramping(double t0, double t1) const;

  /// Appends `other` shifted by `offset_ns`; extends span.
  void append(const ControlSchedule& other, double offset_ns);
};

/// Truncated two-qudit ⊗ Fock space. Basis index = (l1 * L2 + l2) * (n_max + 1) + n.
class CompositeSpace {
 public:
  CompositeSpace(QuditSpec q1, QuditSpec q2, std::vector<int> levels1, std::vector<int> levels2,
                 int n_max, double field_mt, double omega0_ghz, bool rwa = false);

  int dim() const { return dim_; }
  int n_max() const { return n_max_; }
  int n_levels(int qudit) const { return static_cast<int>(levels_[qudit].size()); }
  const QuditSpec& spec(int qudit) const { return specs_[qudit]; }
  const LevelOrder& order(int qudit) const { return orders_[qudit]; }
  /// Energy-ordered labels retained for each qudit.
  const std::vector<int>& levels(int qudit) const { return levels_[qudit]; }
  /// Magnetic number of the k-th retained level.
  double m_of(int qudit, int k) const { return m_[qudit][k]; }
  /// Bare energy (GHz) of the k-th retained level.
  double energy_of(int qudit, int k) const { return energies_[qudit][k]; }
  /// Position of an energy label among the retained levels.
  int position_of_label(int qudit, int label) const;
  double field_mt() const { return field_mt_; }
  double omega0_ghz() const { return omega0_; }
  bool rwa() const { return rwa_; }

  int index(int k1, int k2, int n) const { return (k1 * n_levels(1) + k2) * (n_max_ + 1) + n; }
  int photons_of(int idx) const { return idx % (n_max_ + 1); }
  int level_of(int qudit, int idx) const;

  const Matrix& sx(int q) const { return sx_[q]; }
  const Matrix& sy(int q) const { return sy_[q]; }
  const Matrix& sz(int q) const { return sz_[q]; }
  const Matrix& a() const { return a_; }
  const Matrix& number() const { return number_; }

  /// Diagonal of the static spin Hamiltonian plus ω0 (n + 1/2).
  const RealVector& bare_diagonal() const { return bare_diag_; }
  /// Diagonal of (n + 1/2).
  const RealVector& photon_diagonal() const { return photon_diag_; }
  /// Diagonal of S_z for qudit q.
  const RealVector& sz_diagonal(int q) const { return sz_diag_[q]; }
  /// Spin-photon coupling Σ 2G_i (a + a†) S_xi (GHz), or its RWA form.
  const Matrix& coupling() const { return coupling_; }
  /// Drive operator Σ g_i S_yi; multiply by B1 μB cos(...) in GHz.
  const Matrix& drive_operator() const { return drive_op_; }
  /// Zeeman GHz per mT for qudit q.
  double zeeman_per_mt(int q) const { return zeeman_ghz(specs_[q].g, 1.0); }

  /// Computational (zero-photon) state |k1, k2, 0>.
  Vector basis_state(int k1, int k2, int n = 0) const;
  /// Embeds a |levels1|x|levels2| amplitude table (row-major, k1 major) into the n = 0 sector.
  Vector embed(const std::vector<Complex>& amplitudes) const;

 private:
  std::array<QuditSpec, 2> specs_;
  std::array<LevelOrder, 2> orders_;
  std::array<std::vector<int>, 2> levels_;
  std::array<std::vector<double>, 2> m_;
  std::array<std::vector<double>, 2> energies_;
  int n_max_;
  double field_mt_;
  double omega0_;
  bool rwa_;
  int dim_;
  std::array<Matrix, 2> sx_, sy_, sz_;
  Matrix a_, number_;
  RealVector bare_diag_, photon_diag_;
  std::array<RealVector, 2> sz_diag_;
  Matrix coupling_, drive_op_;
};

/// H(t) in GHz: ω_r(t)(a†a+½) + H_S + local fields + coupling + drives.
Matrix hamiltonian_at(const CompositeSpace& space, const ControlSchedule& schedule, double t);

/// Diagonal part of H(t) (spins, local fields, resonator); defines the logical frame.
RealVector diagonal_energies_at(const CompositeSpace& space, const ControlSchedule& schedule,
                                double t);

/// Integrated frame phases 2π ∫_0^t diag H dt' per basis state.
RealVector frame_phases(const CompositeSpace& space, const ControlSchedule& schedule, double t);

/// Converts a lab-frame density matrix at time t into the logical frame: F ρ F†.
Matrix to_logical_frame(const CompositeSpace& space, const ControlSchedule& schedule,
                        const Matrix& rho_lab, double t);

/// |ground1, ground2, 0><...| where ground = lowest retained level.
Matrix initial_state(const CompositeSpace& space);
/// Projector on a normalized zero-photon superposition of the computational table.
Matrix initial_state(const CompositeSpace& space, const std::vector<Complex>& amplitudes);

/// Pulse-table text: `channel,t0_ns,dur_ns,param1,param2,param3`.
void write_pulse_table(std::ostream& out, const ControlSchedule& schedule);
ControlSchedule read_pulse_table(std::istream& in);

}  // namespace msqp
