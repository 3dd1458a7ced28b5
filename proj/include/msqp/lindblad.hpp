#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "msqp/composite.hpp"

namespace msqp {

/// Pure dephasing on every spin and photon loss from the resonator.
struct NoiseModel {
  double t2_us = std::numeric_limits<double>::infinity();
  double quality_factor = std::numeric_limits<double>::infinity();
  double reference_ghz = 7.5;  ///< κ = reference / Q

  /// 1/T2 per ns; zero when T2 is infinite.
  double dephasing_rate() const;
  /// κ per ns; zero when Q is infinite.
  double loss_rate() const;
  bool closed() const { return dephasing_rate() == 0.0 && loss_rate() == 0.0; }
  void validate() const;
};

enum class Integrator {
  Propagator,  ///< exact static exponentials, Floquet period powers, CF4 Magnus elsewhere
  RK4,         ///< fixed-step lab-frame Runge-Kutta on the full master equation
};

struct EvolveOptions {
  Integrator method = Integrator::Propagator;
  /// Steps per shortest period: dt <= 1 / (steps_per_period * f_max).
  double steps_per_period = 50.0;
  /// Strang splitting chunk for open systems.
  double chunk_ns = 0.5;
  /// Trajectory sampling interval; 0 samples only the endpoints.
  double sample_ns = 0.0;
  bool check_invariants = true;
  /// Re-run with halved steps and require agreement within convergence_tol.
  bool check_convergence = false;
  double convergence_tol = 1e-6;
};

/// Time series of expectation values plus trace and purity.
struct Trajectory {
  std::vector<std::string> names;
  std::vector<Matrix> observables;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  ///< per sample: observables..., trace, purity

  void add_observable(std::string name, Matrix op);
  void record(double t, const Matrix& rho);
  /// CSV with header `t_ns,<names>,trace,purity`.
  void write_csv(std::ostream& out) const;
};

/// dρ/dt per ns for the full master equation at time t.
Matrix lindblad_rhs(const CompositeSpace& space, const ControlSchedule& schedule,
                    const NoiseModel& noise, const Matrix& rho, double t);

/// Applies exp(L_D h) for the dissipative part only.
void apply_dissipation(const CompositeSpace& space, const NoiseModel& noise, Matrix& rho,
                       double h);

/// Evolves ρ(t0) to ρ(t1) in the lab frame.
Matrix evolve(const CompositeSpace& space, const ControlSchedule& schedule,
              const NoiseModel& noise, const Matrix& rho0, double t0, double t1,
              const EvolveOptions& options = {}, Trajectory* trajectory = nullptr);

/// Closed-system propagator U(t1, t0) in the lab frame.
Matrix propagate(const CompositeSpace& space, const ControlSchedule& schedule, double t0,
                 double t1, const EvolveOptions& options = {});

/// Throws NumericalError on trace, Hermiticity or positivity violations.
void check_density_matrix(const Matrix& rho, const std::string& where);

double expectation(const Matrix& rho, const Matrix& op);
double purity(const Matrix& rho);
/// <ψ|ρ|ψ>.
double state_fidelity(const Matrix& rho, const Vector& psi);

}  // namespace msqp
