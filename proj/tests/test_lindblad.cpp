#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "msqp/lindblad.hpp"

using namespace msqp;

namespace {

// Couplings off, so each decay channel can be compared with its closed form.
CompositeSpace uncoupled(int n_max) {
  return CompositeSpace(QuditSpec{10.0, 7.1, 2.0, 0.0}, QuditSpec{10.0, 7.7, 2.0, 0.0}, {0, 1},
                        {0}, n_max, 50.0, 7.5);
}

ControlSchedule idle(double ns) {
  ControlSchedule s;
  s.span_ns = ns;
  return s;
}

}  // namespace

TEST(Lindblad, PhotonDecayFollowsTwiceKappa) {
  const CompositeSpace sp = uncoupled(1);
  NoiseModel nm;
  nm.quality_factor = 1e4;
  const double kappa = nm.loss_rate();
  EXPECT_NEAR(kappa, 7.5 / 1e4, 1e-15);
  const double t = 1.0 / (2.0 * kappa);
  const Vector one = sp.basis_state(0, 0, 1);
  const Matrix rho = evolve(sp, idle(t), nm, one * one.adjoint(), 0.0, t);
  const double p1 = rho(sp.index(0, 0, 1), sp.index(0, 0, 1)).real();
  EXPECT_NEAR(p1 / std::exp(-1.0), 1.0, 1e-4);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
}

TEST(Lindblad, SpinCoherenceDecaysWithT2) {
  const CompositeSpace sp = uncoupled(1);
  NoiseModel nm;
  nm.t2_us = 1.0;
  const double t = 1000.0;
  const Vector psi = (sp.basis_state(0, 0) + sp.basis_state(1, 0)) / std::sqrt(2.0);
  const Matrix rho = evolve(sp, idle(t), nm, psi * psi.adjoint(), 0.0, t);
  const double c = std::abs(rho(sp.index(0, 0, 0), sp.index(1, 0, 0)));
  EXPECT_NEAR(c / (0.5 * std::exp(-1.0)), 1.0, 1e-4);
}

TEST(Lindblad, ClosedEvolutionMatchesPropagator) {
  const CompositeSpace sp(QuditSpec{10.0, 7.1, 2.0, 0.090}, QuditSpec{10.0, 7.7, 2.0, 0.090},
                          {0, 1, 2}, {0, 1}, 1, 50.0, 7.5);
  ControlSchedule s;
  s.span_ns = 40.0;
  s.pulses.push_back({2.0, sp.energy_of(0, 1) - sp.energy_of(0, 0), 0.4, 5.0, 20.0});
  const Matrix u = propagate(sp, s, 0.0, s.span_ns);
  EXPECT_LT((u.adjoint() * u - Matrix::Identity(sp.dim(), sp.dim())).cwiseAbs().maxCoeff(), 1e-9);
  const Matrix rho0 = initial_state(sp);
  const Matrix rho = evolve(sp, s, NoiseModel{}, rho0, 0.0, s.span_ns);
  EXPECT_LT((rho - u * rho0 * u.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Lindblad, PropagatorAgreesWithRungeKutta) {
  const CompositeSpace sp(QuditSpec{10.0, 7.1, 2.0, 0.090}, QuditSpec{10.0, 7.7, 2.0, 0.090},
                          {0, 1}, {0, 1}, 1, 50.0, 7.5);
  ControlSchedule s;
  s.span_ns = 12.0;
  s.pulses.push_back({3.0, sp.energy_of(0, 1) - sp.energy_of(0, 0), 0.0, 0.0, 12.0});
  NoiseModel nm;
  nm.t2_us = 0.5;
  nm.quality_factor = 1e3;
  EvolveOptions rk;
  rk.method = Integrator::RK4;
  rk.steps_per_period = 200.0;
  const Matrix rho0 = initial_state(sp);
  const Matrix a = evolve(sp, s, nm, rho0, 0.0, s.span_ns);
  const Matrix b = evolve(sp, s, nm, rho0, 0.0, s.span_ns, rk);
  // Strong drive plus fast dephasing: what remains is the splitting error of chunks no shorter
  // than one carrier period.
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 5e-5);
  NoiseModel loss;
  loss.quality_factor = 1e3;
  EvolveOptions fine;
  fine.chunk_ns = 0.05;
  const Matrix c = evolve(sp, s, loss, rho0, 0.0, s.span_ns, fine);
  const Matrix d = evolve(sp, s, loss, rho0, 0.0, s.span_ns, rk);
  EXPECT_LT((c - d).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Lindblad, InvariantViolationsDetected) {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  EXPECT_NO_THROW(check_density_matrix(rho, "ok"));
  rho(0, 1) = 0.3;
  EXPECT_THROW(check_density_matrix(rho, "non-hermitian"), NumericalError);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  EXPECT_THROW(check_density_matrix(neg, "negative"), NumericalError);
  Matrix half = Matrix::Identity(2, 2) * 0.25;
  EXPECT_THROW(check_density_matrix(half, "trace"), NumericalError);
}

TEST(Lindblad, TrajectoryCsv) {
  const CompositeSpace sp = uncoupled(1);
  NoiseModel nm;
  nm.quality_factor = 1e4;
  Trajectory tr;
  tr.add_observable("n", sp.number());
  EvolveOptions o;
  o.sample_ns = 50.0;
  const Vector one = sp.basis_state(0, 0, 1);
  evolve(sp, idle(200.0), nm, one * one.adjoint(), 0.0, 200.0, o, &tr);
  ASSERT_GE(tr.times.size(), 5u);
  std::ostringstream out;
  tr.write_csv(out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t_ns,n,trace,purity");
  EXPECT_NEAR(tr.values.back()[0], std::exp(-2.0 * nm.loss_rate() * 200.0), 1e-6);
}

TEST(Lindblad, InvalidNoiseRejected) {
  NoiseModel nm;
  nm.quality_factor = 0.0;
  EXPECT_THROW(nm.validate(), ConfigError);
  nm.quality_factor = 1e6;
  nm.t2_us = -1.0;
  EXPECT_THROW(nm.validate(), ConfigError);
}
