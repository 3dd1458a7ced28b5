#pragma once

#include <map>
#include <string>
#include <vector>

#include "msqp/compiler.hpp"
#include "msqp/gates.hpp"

namespace msqp {

struct RegisterOptions {
  int comp1 = 2;  ///< computational levels of qudit 1 (retained positions 0..comp1-1)
  int comp2 = 2;
  double b1_gauss = 2.0;
  double min_pulse_ns = 0.0;  ///< see PulseOptions::min_duration_ns
  double gap_ns = 0.0;  ///< idle inserted after every physical operation
  bool fixed_cz_slot = true;
  DispersiveOptions dispersive;
  double max_detuning_ghz = 2.25;
};

struct OpRecord {
  std::string name;
  double t0_ns = 0.0;
  double t1_ns = 0.0;
  /// |Tr(Z'† P Z O†)| / n: agreement of the closed-system block P with the ideal O up to the
  /// product-form frame.
  double fidelity = 1.0;
  /// Worst closed-system photon population left by the operation from a computational state.
  double photon_residual = 0.0;
};

/// Logical register on the pulse-level device. Operations append controls to one schedule.
/// Diagonal single-qudit gates and the residual phases of every physical operation are kept in
/// a software frame Z = diag(e^{i(u_k1 + v_k2)}), so that the closed-system device block after
/// the sequence equals Z · ideal up to leakage.
class Register {
 public:
  explicit Register(const CompositeSpace& space, RegisterOptions options = {});

  /// Single-qudit unitary on the computational levels of `qudit`.
  void apply(int qudit, const Matrix& u, const std::string& name = "U");
  void rotate(int qudit, const GivensRotation& r);
  /// diag(e^{i phases}) on one qudit, realised in software.
  void virtual_phase(int qudit, const std::vector<double>& phases);
  /// U^{control,target}_φ: e^{-iφ} on |control, target>, identity elsewhere.
  void controlled_phase(int control, int target, double phi);
  /// exp(-iτ (s_x s_x + s_y s_y)) through the dispersive window (two-level qudits only).
  void exchange(double tau);
  void idle(double ns);

  const CompositeSpace& space() const { return space_; }
  const ControlSchedule& schedule() const { return schedule_; }
  double duration() const { return schedule_.span_ns; }
  const Matrix& ideal() const { return ideal_; }
  Matrix frame() const { return product_phase_matrix(frame_); }
  const std::vector<OpRecord>& ops() const { return ops_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  int comp_dim() const { return options_.comp1 * options_.comp2; }

  /// |ψ><ψ| in the full space for a computational amplitude vector (k1 major).
  Matrix initial_density(const Vector& psi) const;
  /// Lab-frame ρ at the end of the schedule -> computational block in the ideal frame.
  Matrix logical_density(const Matrix& rho_lab) const;

 private:
  void commit(const std::string& name, double t0, const Matrix& ideal_op);
  Matrix embed_single(int qudit, const Matrix& u) const;
  const ResonantCZPlan& cz_plan(double phi);
  const DispersivePlan& xy_plan(double tau);

  CompositeSpace space_;
  RegisterOptions options_;
  ControlSchedule schedule_;
  ProductPhases frame_;
  Matrix ideal_;
  std::vector<OpRecord> ops_;
  std::vector<std::string> warnings_;
  std::map<double, ResonantCZPlan> cz_cache_;
  std::map<double, DispersivePlan> xy_cache_;
};

/// Single-qubit gates on logical levels (0, 1); |0> has s_z = +1/2.
Matrix rx(double theta);
Matrix ry(double theta);
Matrix rz(double theta);

}  // namespace msqp
