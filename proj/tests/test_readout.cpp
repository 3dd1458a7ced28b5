#include <gtest/gtest.h>

#include <cmath>

#include "msqp/readout.hpp"

using namespace msqp;

namespace {

const QuditSpec kQ1{10.0, 7.1, 2.0, 0.090};
const QuditSpec kQ2{10.0, 7.7, 2.0, 0.090};

CompositeSpace one_qudit() { return CompositeSpace(kQ1, kQ2, {0, 1, 2}, {0}, 1, 50.0, 7.5); }

double population(const CompositeSpace& sp, const Matrix& rho, int k1) {
  double p = 0.0;
  for (int n = 0; n <= sp.n_max(); ++n) p += rho(sp.index(k1, 0, n), sp.index(k1, 0, n)).real();
  return p;
}

}  // namespace

TEST(Readout, DispersiveShiftLaw) {
  const double g0 = 0.090 * std::sqrt(110.0);
  const DispersiveEstimate e = dispersive_shift(g0, 20.0);
  EXPECT_NEAR(e.chi_mhz, g0 * g0 / 20.0, 1e-15);
  EXPECT_NEAR(e.duration_us, 1.0 / (4.0 * e.chi_mhz), 1e-12);
  EXPECT_TRUE(e.valid);
  EXPECT_FALSE(dispersive_shift(g0, 5.0).valid);
  EXPECT_TRUE(std::isinf(dispersive_shift(0.0, 20.0).duration_us));
  EXPECT_THROW(dispersive_shift(g0, 0.0), ConfigError);
}

TEST(Readout, ClickProbabilityFollowsBornRuleAndEfficiency) {
  const CompositeSpace sp = one_qudit();
  DetectorModel det;
  det.efficiency = 0.8;
  // Equal superposition of m = 0 and m = -1: the photon appears with probability 1/2.
  const Matrix rho = initial_state(sp, {1.0, 1.0, 0.0});
  const ReadoutResult r = simulate_resonant_readout(rho, sp, {0, 0, 1}, det, NoiseModel{});
  EXPECT_NEAR(r.probabilities[1], 0.5 * 0.8, 1e-4);
  EXPECT_NEAR(r.probabilities[0] + r.probabilities[1], 1.0, 1e-9);
  EXPECT_LT(r.residual_entanglement, 1e-4);
  // The swap leaves the emitter in the lower level either way; only the click branch is
  // re-prepared in the upper one.
  EXPECT_GT(population(sp, r.post_states[1], 1), 0.99);
  EXPECT_GT(population(sp, r.post_states[0], 0), 0.99);
  for (const Matrix& post : r.post_states) {
    EXPECT_NEAR(post.trace().real(), 1.0, 1e-9);
    EXPECT_NO_THROW(check_density_matrix(post, "post state"));
  }
}

TEST(Readout, DurationIsSwapPlusWindow) {
  const CompositeSpace sp = one_qudit();
  DetectorModel det;
  det.window_ns = 250.0;
  const ReadoutResult r =
      simulate_resonant_readout(initial_state(sp), sp, {0, 0, 1}, det, NoiseModel{});
  EXPECT_NEAR(r.duration_ns, r.swap_ns + 250.0, 1e-12);
  EXPECT_NEAR(r.probabilities[1], 0.0, 1e-6);
}

TEST(Readout, ResetKeepsSpinState) {
  const CompositeSpace sp = one_qudit();
  const Vector v = (sp.basis_state(0, 0, 1) + sp.basis_state(1, 0, 0)) / std::sqrt(2.0);
  const Matrix out = reset_resonator(sp, v * v.adjoint());
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(out(sp.index(0, 0, 0), sp.index(0, 0, 0)).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(out(sp.index(0, 0, 0), sp.index(1, 0, 0))), 0.0, 1e-15);
}

TEST(Readout, BadInputsRejected) {
  const CompositeSpace sp = one_qudit();
  DetectorModel det;
  det.efficiency = 1.5;
  EXPECT_THROW(simulate_resonant_readout(initial_state(sp), sp, {0, 0, 1}, det, NoiseModel{}),
               ConfigError);
  EXPECT_THROW(simulate_resonant_readout(initial_state(sp), sp, {0, 1, 1}, DetectorModel{},
                                         NoiseModel{}),
               ConfigError);
}
