#include <gtest/gtest.h>

#include <cmath>

#include "msqp/spins.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};
const QuditSpec kQ2{10.0, 7.7, 2.0, 0.090};

}  // namespace

TEST(Spins, AngularMomentumAlgebra) {
  for (double s : {0.5, 1.0, 1.5, 10.0}) {
    const SpinOperators op = build_spin_operators(s);
    const Matrix comm = op.sx * op.sy - op.sy * op.sx;
    EXPECT_LT((comm - kI * op.sz).cwiseAbs().maxCoeff(), 1e-12) << "S=" << s;
    const Matrix s2 = op.sx * op.sx + op.sy * op.sy + op.sz * op.sz;
    const Matrix want = s * (s + 1.0) * Matrix::Identity(op.dimension(), op.dimension());
    EXPECT_LT((s2 - want).cwiseAbs().maxCoeff(), 1e-10) << "S=" << s;
    EXPECT_LT(hermiticity_deviation(op.sx), 1e-12);
    EXPECT_LT(hermiticity_deviation(op.sy), 1e-12);
  }
}

TEST(Spins, EnergiesMatchClosedForm) {
  // E_m = D m^2 + g muB B m, with muB/h = 13.996245 GHz/T and B = 0.05 T.
  for (double m = -10; m <= 10; m += 1.0) {
    const double want = 7.1 * m * m + 2.0 * 13.996245 * 0.05 * m;
    EXPECT_NEAR(level_energy(kQ1, 50.0, m), want, 1e-9);
  }
  const Matrix h = qudit_hamiltonian(kQ1, 50.0);
  EXPECT_LT(hermiticity_deviation(h), 1e-12);
  EXPECT_NEAR(h(10, 10).real(), 0.0, 1e-12);  // index of m = 0 for S = 10
}

TEST(Spins, LevelOrderAtDeviceParameters) {
  const std::vector<double> want{0, -1, 1, -2, 2, -3, 3};
  for (const QuditSpec& q : {kQ1, kQ2}) {
    const LevelOrder order = level_order(q, 50.0);
    ASSERT_EQ(order.size(), 21u);
    for (std::size_t p = 0; p < want.size(); ++p) EXPECT_EQ(order.m_of_label[p], want[p]);
    for (std::size_t p = 1; p < order.size(); ++p) {
      EXPECT_LE(order.energies_ghz[p - 1], order.energies_ghz[p]);
    }
    EXPECT_FALSE(order.degenerate);
  }
}

TEST(Spins, ZeroFieldTieBreakPutsNegativeFirst) {
  const LevelOrder order = level_order(kQ1, 0.0);
  EXPECT_TRUE(order.degenerate);
  EXPECT_EQ(order.m_of_label[1], -1.0);
  EXPECT_EQ(order.m_of_label[2], 1.0);
}

TEST(Spins, CouplingEnhancement) {
  // <m+1|S_x|m> = sqrt(S(S+1) - m(m+1)) / 2; G^m is defined relative to the spin-1/2 value.
  EXPECT_NEAR(coupling_strength(kQ1, 0.0), 0.090 * std::sqrt(110.0), 1e-12);
  const QuditSpec half{0.5, 0.0, 2.0, 0.090};
  EXPECT_NEAR(coupling_strength(half, -0.5), 0.090, 1e-12);
  for (double m = -10; m < 10; m += 1.0) {
    EXPECT_NEAR(coupling_strength(kQ1, m), coupling_strength(kQ1, -m - 1.0), 1e-12);
  }
  EXPECT_THROW(coupling_strength(kQ1, 10.0), ConfigError);
}

TEST(Spins, CouplingFromTransverseField) {
  // g muB b |<1/2|S_x|-1/2>| with b = 6.4 uT: 2 * 13996.245 MHz/T * 6.4e-6 T * 0.5.
  const QuditSpec half{0.5, 0.0, 2.0, 0.090};
  const double g_half = coupling_from_field(half, {6.4, 0.0, 0.0}, -0.5, 0.5);
  EXPECT_NEAR(g_half, 2.0 * 13996.245 * 6.4e-6 * 0.5, 1e-9);
  const double g_big = coupling_from_field(kQ1, {6.4, 0.0, 0.0}, 0.0, 1.0);
  EXPECT_NEAR(g_big / g_half, std::sqrt(110.0), 1e-10 * std::sqrt(110.0));
}

TEST(Spins, StripFieldMonotoneInWidth) {
  double previous = 0.0;
  for (double w : {4000.0, 1000.0, 200.0, 50.0, 20.0}) {
    const double b = strip_field(438.0, w, 1.0);
    EXPECT_GT(b, previous) << "w=" << w;
    previous = b;
  }
  EXPECT_THROW(strip_field(438.0, 0.0, 1.0), ConfigError);
}

TEST(Spins, InvalidSpecRejected) {
  EXPECT_THROW((QuditSpec{0.7, 7.1, 2.0, 0.09}.validate()), ConfigError);
  EXPECT_THROW((QuditSpec{10.0, 7.1, 2.0, -1.0}.validate()), ConfigError);
}
