#include <gtest/gtest.h>

#include <cmath>

#include "msqp/register.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};
const QuditSpec kQ2{10.0, 7.7, 2.0, 0.090};

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double closed_fidelity(const Register& r, const Vector& psi) {
  const Matrix u = propagate(r.space(), r.schedule(), 0.0, r.duration());
  const Matrix rho = r.logical_density(u * r.initial_density(psi) * u.adjoint());
  const Vector t = r.ideal() * psi.normalized();
  return std::real(t.dot(rho * t));
}

}  // namespace

TEST(Register, RotationConventions) {
  // R_a(θ) = exp(-iθ s_a) with s = σ/2 and |0> the s_z = +1/2 state.
  EXPECT_NEAR(std::abs(rx(kPi)(1, 0) - Complex(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ry(kPi)(1, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rz(kPi / 2)(0, 0) - std::exp(-kI * kPi / 4.0)), 0.0, 1e-15);
}

TEST(Register, VirtualPhasesCostNoTime) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1, 2}, {0, 1}, 1, 50.0, 7.5);
  Register r(sp);
  r.apply(0, rz(0.8));
  r.apply(1, rz(-0.3));
  EXPECT_EQ(r.duration(), 0.0);
  EXPECT_LT((r.ideal() - kron(rz(0.8), rz(-0.3))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Register, CircuitThroughNativeGate) {
  // H on both, CZ, H on the target: a CNOT-type circuit from |00>, checked against the circuit
  // matrix built here.
  const CompositeSpace sp(kQ1, kQ2, {0, 1, 2}, {0, 1}, 2, 50.0, 7.5);
  RegisterOptions o;
  o.min_pulse_ns = 20.0;
  Register r(sp, o);
  const Matrix h = ry(kPi / 2.0);
  r.apply(0, h);
  r.apply(1, h);
  r.controlled_phase(1, 1, kPi);
  r.apply(1, h.adjoint());
  Matrix cz = Matrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  const Matrix want = kron(Matrix::Identity(2, 2), h.adjoint()) * cz * kron(h, h);
  EXPECT_LT((r.ideal() - want).cwiseAbs().maxCoeff(), 1e-12);
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  EXPECT_GT(closed_fidelity(r, psi), 0.995);
  for (const auto& op : r.ops()) EXPECT_GT(op.fidelity, 0.995) << op.name;
}

TEST(Register, RotationAfterExchangeKeepsFrame) {
  // The exchange window shifts q2 with a local field; later pulses must account for it.
  const CompositeSpace sp(kQ1, kQ2, {0, 1}, {0, 1}, 1, 50.0, 7.5);
  RegisterOptions o;
  o.min_pulse_ns = 20.0;
  Register r(sp, o);
  r.exchange(kPi / 2.0);
  r.apply(1, rx(kPi / 2.0));
  ASSERT_EQ(r.ops().size(), 2u);
  EXPECT_GT(r.ops()[0].fidelity, 0.999);
  EXPECT_GT(r.ops()[1].fidelity, 0.999);
}

TEST(Register, PreconditionsEnforced) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1, 2}, {0, 1, 2}, 1, 50.0, 7.5);
  RegisterOptions o;
  o.comp2 = 3;
  Register r(sp, o);
  EXPECT_THROW(r.exchange(kPi), ConfigError);
  EXPECT_THROW(r.apply(0, Matrix::Identity(3, 3)), ConfigError);
  EXPECT_THROW(r.controlled_phase(0, 3, kPi), ConfigError);
  RegisterOptions bad;
  bad.comp1 = 4;
  EXPECT_THROW(Register(sp, bad), ConfigError);
}
