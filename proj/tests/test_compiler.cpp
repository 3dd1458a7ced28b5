#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "msqp/compiler.hpp"
#include "msqp/gates.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};

// Energy order at 50 mT: m = 0, -1, +1, -2, +2.
ConnectivityGraph graph_for(int d) {
  const std::vector<double> m{0, -1, 1, -2, 2};
  return build_connectivity(kQ1, 50.0, std::vector<double>(m.begin(), m.begin() + d));
}

// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
Matrix random_unitary(int d, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

Matrix product(int d, const std::vector<GivensRotation>& rs) {
  Matrix u = Matrix::Identity(d, d);
  for (const auto& r : rs) u = givens_matrix(d, r) * u;
  return u;
}

}  // namespace

TEST(Compiler, GivensMatrixIsUnitary) {
  const Matrix g = givens_matrix(4, {1, 3, 1.1, 0.7});
  EXPECT_LT((g.adjoint() * g - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(givens_matrix(3, {0, 3, 1.0, 0.0}), ConfigError);
}

TEST(Compiler, ConnectivityFollowsDipoleRule) {
  const ConnectivityGraph g = graph_for(5);
  EXPECT_TRUE(g.adjacent(0, 1));   // 0 <-> -1
  EXPECT_TRUE(g.adjacent(0, 2));   // 0 <-> +1
  EXPECT_FALSE(g.adjacent(1, 2));  // -1 <-> +1
  EXPECT_TRUE(g.adjacent(1, 3));   // -1 <-> -2
  EXPECT_TRUE(g.connected());
  EXPECT_EQ(g.path(3, 4).size(), 5u);
}

TEST(Compiler, RandomUnitaryRoundTrip) {
  std::mt19937 rng(20240611);
  int count = 0;
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 4;
    const Matrix u = random_unitary(d, rng);
    const GateProgram p = givens_decompose(u, graph_for(d));
    EXPECT_LE(phase_insensitive_distance(reconstruct_unitary(p), u), 1e-8) << "k=" << k;
    EXPECT_LE(static_cast<int>(p.rotations.size()), rotation_bound(d));
    EXPECT_LE(rotation_bound(d), 2 * d * d);
    for (const auto& r : p.rotations) EXPECT_TRUE(graph_for(d).adjacent(r.a, r.b));
    ++count;
  }
  EXPECT_EQ(count, 100);
}

TEST(Compiler, EliminationLeavesDiagonal) {
  std::mt19937 rng(7);
  const Matrix u = random_unitary(4, rng);
  const GivensElimination e = givens_eliminate(u, graph_for(4));
  Matrix d = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) d(k, k) = std::exp(kI * e.phases[k]);
  EXPECT_LT((product(4, e.rotations) * d - u).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Compiler, ZRotationSynthesis) {
  const double theta = 0.83;
  Matrix want = Matrix::Identity(3, 3);
  want(0, 0) = std::exp(-0.5 * kI * theta);
  want(2, 2) = std::exp(0.5 * kI * theta);
  EXPECT_LT(phase_insensitive_distance(product(3, synthesize_z_rotation(theta, 0, 2)), want), 1e-12);
}

TEST(Compiler, RoutingPreservesTheRotation) {
  const ConnectivityGraph g = graph_for(5);
  const GivensRotation target{1, 2, 0.9, 0.4};  // -1 and +1 are two steps apart
  const auto seq = route_rotation(target, g);
  EXPECT_GT(seq.size(), 1u);
  for (const auto& r : seq) EXPECT_TRUE(g.adjacent(r.a, r.b));
  EXPECT_LT(phase_insensitive_distance(product(5, seq), givens_matrix(5, target)), 1e-12);
}

TEST(Compiler, NonUnitaryRejected) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 2.0;
  EXPECT_THROW(givens_decompose(m, graph_for(3)), ConfigError);
}

TEST(Compiler, PulseDurationClosedForm) {
  // θ / (2π g muB B1 |<-1|S_y|0>|), with |<-1|S_y|0>| = sqrt(110)/2.
  const double rabi = 2.0 * 13.996245 * 2e-4 * std::sqrt(110.0) / 2.0;
  EXPECT_NEAR(pulse_duration(kPi, 2.0, 2.0, std::sqrt(110.0) / 2.0), kPi / (kTwoPi * rabi), 1e-12);
  EXPECT_THROW(pulse_duration(kPi, 0.0, 2.0, 1.0), ConfigError);
}

TEST(Compiler, MinimumDurationKeepsPulseArea) {
  const CompositeSpace sp(kQ1, QuditSpec{10.0, 7.7, 2.0, 0.090}, {0, 1}, {0}, 1, 50.0, 7.5);
  const GateProgram p{2, {{0, 1, 0.1, 0.0}}, 0.0};
  PulseOptions plain;
  PulseOptions stretched;
  stretched.min_duration_ns = 20.0;
  const auto a = rotations_to_pulses(p, sp, 0, {0, 1}, plain).pulses.at(0);
  const auto b = rotations_to_pulses(p, sp, 0, {0, 1}, stretched).pulses.at(0);
  EXPECT_LT(a.duration_ns, 20.0);
  EXPECT_DOUBLE_EQ(b.duration_ns, 20.0);
  EXPECT_NEAR(a.amplitude_g * a.duration_ns, b.amplitude_g * b.duration_ns, 1e-12);
}

TEST(Compiler, ResonantPulseRealisesRotation) {
  // Two retained levels and no resonator coupling: the pulse must reproduce the Givens matrix
  // up to counter-rotating corrections of order Rabi / carrier.
  const CompositeSpace sp(QuditSpec{10.0, 7.1, 2.0, 0.0}, QuditSpec{10.0, 7.7, 2.0, 0.0}, {0, 1},
                          {0}, 1, 50.0, 7.5);
  for (const GivensRotation r : {GivensRotation{0, 1, kPi / 2, 0.0}, GivensRotation{0, 1, 2.0, 1.1}}) {
    const GateProgram p{2, {r}, 0.0};
    PulseOptions po;
    po.start_ns = 3.7;
    ControlSchedule s = rotations_to_pulses(p, sp, 0, {0, 1}, po);
    const Matrix block = computational_block(sp, logical_propagator(sp, s, 0.0, s.span_ns), 2, 1);
    EXPECT_LT(phase_insensitive_distance(block, givens_matrix(2, r)), 1e-2);
  }
}
