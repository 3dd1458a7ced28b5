#include <gtest/gtest.h>

#include <cmath>

#include "msqp/gates.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};
const QuditSpec kQ2{10.0, 7.7, 2.0, 0.090};
const double kG0 = 0.090 * std::sqrt(110.0);  // MHz

// exp(-i 2π H t) of the 2x2 [[0, G], [G, -δ]] (MHz, ns) applied to |0>.
Complex two_level_return(double g, double delta, double t_ns) {
  Matrix h(2, 2);
  h << 0.0, g * 1e-3, g * 1e-3, -delta * 1e-3;
  return unitary_exp(h, t_ns)(0, 0);
}

}  // namespace

TEST(Gates, ProductPhaseFitRecoversProductForm) {
  ProductPhases p;
  p.q1 = {0.3, -1.2};
  p.q2 = {0.0, 0.7, 2.1};
  const Matrix m = std::exp(kI * 0.4) * product_phase_matrix(p);
  const ProductPhases f = fit_product_phases(m, 2, 3);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_LT((product_phase_matrix(f) - m).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gates, EmissionTimeMatchesVacuumRabi) {
  // Full |1, 0> -> |0, 1> transfer after a quarter of the vacuum Rabi period 1/(2 G0).
  const CompositeSpace sp(kQ1, kQ2, {0, 1}, {0}, 1, 50.0, 7.5);
  const EmissionCalibration cal = calibrate_emission(sp, 0, 0, 1);
  EXPECT_NEAR(cal.seed_ns, 1e3 / (4.0 * kG0), 1e-9);
  EXPECT_NEAR(cal.duration_ns / cal.seed_ns, 1.0, 1e-2);
  EXPECT_GT(cal.transfer, 0.9999);
  EXPECT_NEAR(cal.detuning_ghz, (sp.energy_of(0, 1) - sp.energy_of(0, 0)) - 7.5, 1e-3);
}

TEST(Gates, SemiresonantOracleMatchesExactTwoLevel) {
  for (double delta : {0.0, 1.5, -4.0}) {
    for (double t : {100.0, 333.0}) {
      const Complex a = semiresonant_amplitude(kG0, delta, t);
      EXPECT_LT(std::abs(a - two_level_return(kG0, delta, t)), 1e-8);
    }
  }
}

TEST(Gates, SemiresonantCalibrationHitsPhase) {
  for (double phi : {0.3, kPi, 5.5}) {
    const SemiresonantCalibration c = calibrate_semiresonant_phase(kG0, phi, 2250.0);
    const double omega = std::sqrt(4.0 * kG0 * kG0 + c.offset_mhz * c.offset_mhz);
    EXPECT_NEAR(c.duration_ns, 1e3 / omega, 1e-9);
    EXPECT_NEAR(c.return_population, 1.0, 1e-9);
    EXPECT_NEAR(std::abs(wrap_angle(c.phase + phi)), 0.0, 1e-9);
  }
}

TEST(Gates, DispersiveCouplingLaw) {
  EXPECT_NEAR(effective_dispersive_coupling(kG0, kG0, 20.0), kG0 * kG0 / 20.0, 1e-15);
  EXPECT_THROW(effective_dispersive_coupling(kG0, kG0, 5.0), ConfigError);
}

TEST(Gates, XYUnitary) {
  const Matrix u = xy_unitary(kPi);
  EXPECT_NEAR(std::abs(u(2, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(3, 3)), 1.0, 1e-15);
  const Matrix h = xy_unitary(0.4);
  EXPECT_NEAR(std::norm(h(2, 1)), std::pow(std::sin(0.2), 2), 1e-14);
}

TEST(Gates, ResonantControlledPhase) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1, 2}, {0, 1}, 2, 50.0, 7.5);
  const ResonantCZPlan plan = schedule_cz(sp, kPi);
  EXPECT_LT(plan.conditional_error, 1e-4);
  EXPECT_LT(plan.max_photon, 1e-3);
  EXPECT_LT(plan.local.residual, 1e-3);
  EXPECT_NEAR(plan.emission_ns, 1e3 / (4.0 * kG0), 0.1 * 1e3 / (4.0 * kG0));
  EXPECT_LE(plan.active_ns(), plan.slot_ns + 1e-9);

  const ControlSchedule s = cz_schedule(plan);
  const Matrix b = computational_block(sp, logical_propagator(sp, s, 0.0, s.span_ns), 2, 2);
  Matrix ideal = Matrix::Identity(4, 4);
  ideal(1, 1) = -1.0;
  const Matrix m = b * ideal.adjoint();
  const double f = std::abs((product_phase_matrix(plan.local).adjoint() * m).trace()) / 4.0;
  EXPECT_GT(f, 0.9999);
}

TEST(Gates, ZeroPhaseGateIsIdle) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1, 2}, {0, 1}, 2, 50.0, 7.5);
  const ResonantCZPlan plan = schedule_cz(sp, 0.0);
  EXPECT_TRUE(plan.identity);
  EXPECT_TRUE(cz_schedule(plan).detunings.empty());
}

TEST(Gates, DispersiveExchangeWindow) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1}, {0, 1}, 1, 50.0, 7.5);
  const DispersivePlan plan = schedule_iswap_dispersive(sp, kPi);
  EXPECT_GT(plan.swap_fraction, 0.999);
  EXPECT_LT(plan.leakage, 1e-3);
  EXPECT_NEAR(plan.gamma_mhz, kG0 * kG0 / plan.delta1_mhz, 0.05 * plan.gamma_mhz);
  // π Δ / (2 G²) in angular units: 1 / (4Γ) for linear frequencies.
  EXPECT_NEAR(plan.hold_ns / (1e3 / (4.0 * plan.gamma_mhz)), 1.0, 0.15);
  const ControlSchedule s = dispersive_schedule(plan);
  ASSERT_EQ(s.fields.size(), 1u);
  EXPECT_EQ(s.fields[0].qudit, 1);
}
