#include "msqp/readout.hpp"

#include <cmath>
#include <limits>

#include "msqp/compiler.hpp"

namespace msqp {

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ConfigError("detector efficiency must lie in [0, 1]");
  }
  if (!(window_ns >= 0.0) || !std::isfinite(window_ns)) {
    throw ConfigError("detector window must be a non-negative number of ns");
  }
}

DispersiveEstimate dispersive_shift(double g_mhz, double delta_mhz) {
  if (!(delta_mhz > 0.0)) throw ConfigError("dispersive shift needs Δ > 0");
  DispersiveEstimate est;
  est.valid = delta_mhz >= 10.0 * std::abs(g_mhz);
  est.chi_mhz = g_mhz * g_mhz / delta_mhz;
  est.duration_us = est.chi_mhz > 0.0 ? 1.0 / (4.0 * est.chi_mhz)
                                      : std::numeric_limits<double>::infinity();
  return est;
}

Matrix reset_resonator(const CompositeSpace& space, const Matrix& rho) {
  const int np = space.n_max() + 1;
  const int ns = space.dim() / np;
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (int s = 0; s < ns; ++s) {
    for (int t = 0; t < ns; ++t) {
      Complex sum = 0.0;
      for (int n = 0; n < np; ++n) sum += rho(s * np + n, t * np + n);
      out(s * np, t * np) = sum;
    }
  }
  return out;
}

ReadoutResult simulate_resonant_readout(const Matrix& rho, const CompositeSpace& space,
                                        const ReadoutPair& pair, const DetectorModel& detector,
                                        const NoiseModel& noise, const ReadoutOptions& options) {
  detector.validate();
  noise.validate();
  if (pair.qudit < 0 || pair.qudit > 1 || pair.lower < 0 || pair.upper < 0 ||
      pair.lower >= space.n_levels(pair.qudit) || pair.upper >= space.n_levels(pair.qudit) ||
      pair.lower == pair.upper) {
    throw ConfigError("readout pair is not retained");
  }
  if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
    throw ConfigError("readout: state dimension does not match the space");
  }
  ReadoutResult res;
  const EmissionCalibration cal = calibrate_emission(space, pair.qudit, pair.lower, pair.upper);
  res.swap_ns = cal.duration_ns;
  res.residual_entanglement = 1.0 - cal.transfer;
  if (res.residual_entanglement > 1e-2) {
    res.warnings.push_back("qudit-resonator swap leaves " +
                           std::to_string(res.residual_entanglement) + " behind");
  }
  res.duration_ns = res.swap_ns + detector.window_ns;

  ControlSchedule s;
  s.span_ns = res.duration_ns;
  s.detunings.push_back({0.0, res.swap_ns, cal.detuning_ghz, 0.0});
  const Matrix end = to_logical_frame(
      space, s, evolve(space, s, noise, rho, 0.0, res.duration_ns, options.evolve),
      res.duration_ns);

  // Click probability for n photons: 1 - (1 - η)^n.
  Vector click(space.dim()), none(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const double miss = std::pow(1.0 - detector.efficiency, space.photons_of(i));
    click(i) = std::sqrt(1.0 - miss);
    none(i) = std::sqrt(miss);
  }
  const Matrix rc = click.asDiagonal() * end * click.asDiagonal();
  const Matrix r0 = none.asDiagonal() * end * none.asDiagonal();
  const double pc = rc.trace().real(), p0 = r0.trace().real();
  res.probabilities = {p0, pc};

  Matrix post0 = Matrix::Zero(space.dim(), space.dim());
  Matrix post1 = Matrix::Zero(space.dim(), space.dim());
  if (p0 > 1e-15) post0 = reset_resonator(space, r0) / p0;
  if (pc > 1e-15) {
    // The emitter sits in the lower level after the click; a π pulse restores it.
    GateProgram back{2, {GivensRotation{0, 1, kPi, 0.0}}, 0.0};
    PulseOptions po;
    po.b1_gauss = options.b1_gauss;
    ControlSchedule rs = rotations_to_pulses(back, space, pair.qudit, {pair.lower, pair.upper}, po,
                                             &res.warnings);
    res.reprepare_ns = rs.span_ns;
    const Matrix start = reset_resonator(space, rc) / pc;
    post1 = to_logical_frame(space, rs,
                             evolve(space, rs, noise, start, 0.0, rs.span_ns, options.evolve),
                             rs.span_ns);
  }
  res.post_states = {post0, post1};
  return res;
}

}  // namespace msqp
