#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "msqp/composite.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};
const QuditSpec kQ2{10.0, 7.7, 2.0, 0.090};

CompositeSpace cz_space() { return CompositeSpace(kQ1, kQ2, {0, 1, 2}, {0, 1, 2, 3}, 2, 50.0, 7.5); }

}  // namespace

TEST(Composite, DimensionsAndIndexing) {
  const CompositeSpace sp = cz_space();
  EXPECT_EQ(sp.dim(), 3 * 4 * 3);
  EXPECT_EQ(sp.index(2, 3, 2), sp.dim() - 1);
  for (int i = 0; i < sp.dim(); ++i) {
    const int n = sp.photons_of(i);
    EXPECT_EQ(sp.index(sp.level_of(0, i), sp.level_of(1, i), n), i);
  }
  EXPECT_EQ(sp.m_of(0, 1), -1.0);
  EXPECT_EQ(sp.m_of(0, 2), 1.0);
}

TEST(Composite, OperatorsHermitian) {
  const CompositeSpace sp = cz_space();
  EXPECT_LT(hermiticity_deviation(sp.coupling()), 1e-15);
  EXPECT_LT(hermiticity_deviation(sp.drive_operator()), 1e-15);
  ControlSchedule s;
  s.span_ns = 10.0;
  s.pulses.push_back({2.0, 5.7, 0.3, 0.0, 10.0});
  s.detunings.push_back({0.0, 10.0, -1.8, 0.0});
  EXPECT_LT(hermiticity_deviation(hamiltonian_at(sp, s, 3.0)), 1e-12);
}

TEST(Composite, VacuumRabiMatrixElement) {
  // 2 G <-1|S_x|0> sqrt(1) = G sqrt(S(S+1)) between |m=0, 1 photon> and |m=-1, 0 photons>.
  const CompositeSpace sp = cz_space();
  const double want = 0.090e-3 * std::sqrt(110.0);
  EXPECT_NEAR(std::abs(sp.coupling()(sp.index(0, 0, 1), sp.index(1, 0, 0))), want, 1e-15);
  // The photon ladder: <n+1|a†|n> = sqrt(n+1).
  EXPECT_NEAR(std::abs(sp.a()(sp.index(0, 0, 1), sp.index(0, 0, 2))), std::sqrt(2.0), 1e-15);
}

TEST(Composite, DiagonalCarriesDetuning) {
  const CompositeSpace sp = cz_space();
  ControlSchedule s;
  s.span_ns = 20.0;
  s.detunings.push_back({5.0, 10.0, -1.2, 0.0});
  const RealVector idle = diagonal_energies_at(sp, s, 1.0);
  const RealVector held = diagonal_energies_at(sp, s, 8.0);
  const int one = sp.index(0, 0, 1), zero = sp.index(0, 0, 0);
  EXPECT_NEAR((held(one) - held(zero)) - (idle(one) - idle(zero)), -1.2, 1e-12);
  EXPECT_NEAR(idle(one) - idle(zero), 7.5, 1e-12);
  EXPECT_NEAR(s.detuning_integral(20.0), -12.0, 1e-12);
}

TEST(Composite, EmbedNormalizes) {
  const CompositeSpace sp(kQ1, kQ2, {0, 1}, {0, 1}, 1, 50.0, 7.5);
  const Vector v = sp.embed({1.0, 1.0, 0.0, 1.0});
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(v(sp.index(1, 1, 0))), 1.0 / std::sqrt(3.0), 1e-15);
  const Matrix rho = initial_state(sp);
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 0.0);
}

TEST(Composite, PulseTableRoundTrip) {
  ControlSchedule s;
  s.span_ns = 123.456789012345;
  s.pulses.push_back({2.0, 5.7003755, 1.234567890123, 0.1, 17.3});
  s.detunings.push_back({20.0, 264.858, -1.19962, 0.5});
  s.fields.push_back({1, 300.0, 5883.0, 21.434});
  std::stringstream io;
  write_pulse_table(io, s);
  const ControlSchedule r = read_pulse_table(io);
  ASSERT_EQ(r.pulses.size(), 1u);
  ASSERT_EQ(r.detunings.size(), 1u);
  ASSERT_EQ(r.fields.size(), 1u);
  EXPECT_EQ(r.span_ns, s.span_ns);
  EXPECT_EQ(r.pulses[0].phase, s.pulses[0].phase);
  EXPECT_EQ(r.pulses[0].carrier_ghz, s.pulses[0].carrier_ghz);
  EXPECT_EQ(r.detunings[0].delta_ghz, s.detunings[0].delta_ghz);
  EXPECT_EQ(r.detunings[0].ramp_ns, s.detunings[0].ramp_ns);
  EXPECT_EQ(r.fields[0].delta_mt, s.fields[0].delta_mt);
}

TEST(Composite, OverlappingPulsesRejected) {
  ControlSchedule s;
  s.span_ns = 50.0;
  s.pulses.push_back({2.0, 5.7, 0.0, 0.0, 20.0});
  s.pulses.push_back({2.0, 8.5, 0.0, 10.0, 20.0});
  EXPECT_THROW(s.validate(2.25), ConfigError);
}
