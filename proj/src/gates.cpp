#include "msqp/gates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace msqp {

namespace {

// Spectral form of a static Hamiltonian for cheap scans over the evolution time.
struct StaticEvolution {
  Eigen::SelfAdjointEigenSolver<Matrix> es;

  explicit StaticEvolution(const Matrix& h) : es(h) {}

  Complex amplitude(const Vector& to, const Vector& from, double t) const {
    const Matrix& v = es.eigenvectors();
    Vector a = v.adjoint() * from;
    Vector b = v.adjoint() * to;
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      sum += std::conj(b(k)) * a(k) * std::exp(-kI * kTwoPi * es.eigenvalues()(k) * t);
    }
    return sum;
  }
};

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// Root of f on [lo, hi] given a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  if (flo * f(hi) > 0.0) throw NumericalError("bisection: no sign change");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double transition_coupling_mhz(const QuditSpec& spec, double m_a, double m_b) {
  if (std::abs(std::abs(m_a - m_b) - 1.0) > 1e-9) {
    throw ConfigError("levels are not coupled by the resonator (|Δm| != 1)");
  }
  return coupling_strength(spec, std::min(m_a, m_b));
}

ControlSchedule static_detuning(double delta_ghz, double span_ns) {
  ControlSchedule s;
  s.span_ns = span_ns;
  if (delta_ghz != 0.0) s.detunings.push_back({0.0, span_ns, delta_ghz, 0.0});
  return s;
}

double diag_phase(const Matrix& m, int c2, int k1, int k2) {
  int i = k1 * c2 + k2;
  return std::arg(m(i, i));
}

double conditional_phase(const Matrix& m, int c2) {
  return wrap_angle(diag_phase(m, c2, 0, 1) - diag_phase(m, c2, 0, 0) - diag_phase(m, c2, 1, 1) +
                    diag_phase(m, c2, 1, 0));
}

Matrix cz_ideal(double phi, int c1, int c2) {
  Matrix o = Matrix::Identity(c1 * c2, c1 * c2);
  o(1, 1) = std::exp(-kI * phi);
  return o;
}

Matrix cz_block(const CompositeSpace& space, const ResonantCZPlan& plan, const CZOptions& o) {
  ControlSchedule s = cz_schedule(plan);
  return computational_block(space, logical_propagator(space, s, 0.0, s.span_ns), o.comp1,
                             o.comp2);
}

double max_photon_left(const CompositeSpace& space, const ControlSchedule& s, int c1, int c2) {
  Matrix u = propagate(space, s, 0.0, s.span_ns);
  double worst = 0.0;
  for (int i : computational_indices(space, c1, c2)) {
    Vector psi = u.col(i);
    worst = std::max(worst, std::real(psi.dot(space.number() * psi)));
  }
  return worst;
}

}  // namespace

Matrix logical_propagator(const CompositeSpace& space, const ControlSchedule& schedule, double t0,
                          double t1, const EvolveOptions& options) {
  Matrix u = propagate(space, schedule, t0, t1, options);
  RealVector p0 = frame_phases(space, schedule, t0);
  RealVector p1 = frame_phases(space, schedule, t1);
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) u(r, c) *= std::exp(kI * (p1(r) - p0(c)));
  }
  return u;
}

std::vector<int> computational_indices(const CompositeSpace& space, int comp1, int comp2) {
  if (comp1 > space.n_levels(0) || comp2 > space.n_levels(1) || comp1 < 1 || comp2 < 1) {
    throw ConfigError("computational levels exceed the retained levels");
  }
  std::vector<int> idx;
  for (int k1 = 0; k1 < comp1; ++k1) {
    for (int k2 = 0; k2 < comp2; ++k2) idx.push_back(space.index(k1, k2, 0));
  }
  return idx;
}

Matrix computational_block(const CompositeSpace& space, const Matrix& u, int comp1, int comp2) {
  auto idx = computational_indices(space, comp1, comp2);
  const int n = static_cast<int>(idx.size());
  Matrix b(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) b(r, c) = u(idx[r], idx[c]);
  }
  return b;
}

ProductPhases fit_product_phases(const Matrix& m, int comp1, int comp2) {
  ProductPhases p;
  p.q1.assign(comp1, 0.0);
  p.q2.assign(comp2, 0.0);
  auto d = [&](int k1, int k2) { return m(k1 * comp2 + k2, k1 * comp2 + k2); };
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int k1 = 0; k1 < comp1; ++k1) {
      Complex s = 0.0;
      for (int k2 = 0; k2 < comp2; ++k2) s += d(k1, k2) * std::exp(-kI * p.q2[k2]);
      p.q1[k1] = std::arg(s);
    }
    for (int k2 = 0; k2 < comp2; ++k2) {
      Complex s = 0.0;
      for (int k1 = 0; k1 < comp1; ++k1) s += d(k1, k2) * std::exp(-kI * p.q1[k1]);
      p.q2[k2] = std::arg(s);
    }
  }
  const double shift = p.q2[0];
  for (double& v : p.q2) v -= shift;
  for (double& u : p.q1) u += shift;
  for (int k1 = 0; k1 < comp1; ++k1) {
    for (int k2 = 0; k2 < comp2; ++k2) {
      double dev = std::abs(wrap_angle(std::arg(d(k1, k2)) - p.q1[k1] - p.q2[k2]));
      p.residual = std::max(p.residual, dev);
    }
  }
  return p;
}

Matrix product_phase_matrix(const ProductPhases& p) {
  const int c1 = static_cast<int>(p.q1.size()), c2 = static_cast<int>(p.q2.size());
  Matrix z = Matrix::Zero(c1 * c2, c1 * c2);
  for (int k1 = 0; k1 < c1; ++k1) {
    for (int k2 = 0; k2 < c2; ++k2) z(k1 * c2 + k2, k1 * c2 + k2) = std::exp(kI * (p.q1[k1] + p.q2[k2]));
  }
  return z;
}

EmissionCalibration calibrate_emission(const CompositeSpace& space, int qudit, int lower,
                                       int upper) {
  if (space.n_max() < 1) throw ConfigError("emission needs at least one photon level");
  EmissionCalibration cal;
  const double gap = space.energy_of(qudit, upper) - space.energy_of(qudit, lower);
  if (gap <= 0.0) throw ConfigError("emission: upper level must lie above lower level");
  cal.detuning_ghz = gap - space.omega0_ghz();
  const double g_mhz =
      transition_coupling_mhz(space.spec(qudit), space.m_of(qudit, lower), space.m_of(qudit, upper));
  cal.seed_ns = 1e3 / (4.0 * g_mhz);

  ControlSchedule s = static_detuning(cal.detuning_ghz, 2.0 * cal.seed_ns);
  StaticEvolution ev(hamiltonian_at(space, s, 0.0));
  Vector from = qudit == 1 ? space.basis_state(0, upper, 0) : space.basis_state(upper, 0, 0);
  Vector to = qudit == 1 ? space.basis_state(0, lower, 1) : space.basis_state(lower, 0, 1);
  auto transfer = [&](double t) { return std::norm(ev.amplitude(to, from, t)); };
  cal.duration_ns = golden_max(transfer, 0.8 * cal.seed_ns, 1.2 * cal.seed_ns, 1e-3);
  cal.transfer = transfer(cal.duration_ns);
  return cal;
}

Complex semiresonant_amplitude(double coupling_mhz, double offset_mhz, double duration_ns) {
  // Fixed-step RK4 on i dψ/dt = 2π H ψ with H in GHz.
  const double g = coupling_mhz * 1e-3, d = offset_mhz * 1e-3;
  const int steps = 4000;
  const double h = duration_ns / steps;
  Complex a = 1.0, b = 0.0;
  auto rhs = [&](Complex x, Complex y, Complex& dx, Complex& dy) {
    dx = -kI * kTwoPi * (g * y);
    dy = -kI * kTwoPi * (g * x - d * y);
  };
  for (int k = 0; k < steps; ++k) {
    Complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(a, b, k1a, k1b);
    rhs(a + 0.5 * h * k1a, b + 0.5 * h * k1b, k2a, k2b);
    rhs(a + 0.5 * h * k2a, b + 0.5 * h * k2b, k3a, k3b);
    rhs(a + h * k3a, b + h * k3b, k4a, k4b);
    a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  }
  return a;
}

SemiresonantCalibration calibrate_semiresonant_phase(double coupling_mhz, double phi,
                                                     double max_offset_mhz) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p < 1e-12 || kTwoPi - p < 1e-12) {
    throw ConfigError("semi-resonant phase: φ ≡ 0 needs no cycle");
  }
  const double target = kTwoPi - p;
  const double g = coupling_mhz;
  // x = δ/Ω parametrises one full cycle; the phase of the returned amplitude comes from the
  // oracle, x only orders the search.
  auto offset = [&](double x) { return 2.0 * g * x / std::sqrt(1.0 - x * x); };
  auto duration = [&](double off) { return 1e3 / std::sqrt(4.0 * g * g + off * off); };
  auto returned = [&](double x) {
    double off = offset(x);
    Complex a = semiresonant_amplitude(g, off, duration(off));
    return kPi + std::arg(-a);
  };
  auto f = [&](double x) { return returned(x) - target; };
  const double edge = 1.0 - 1e-9;
  double x = bisect(f, -edge, edge, 1e-13);
  SemiresonantCalibration cal;
  cal.offset_mhz = offset(x);
  if (std::abs(cal.offset_mhz) > max_offset_mhz) {
    throw ConfigError("semi-resonant phase unreachable within the detuning bound");
  }
  cal.duration_ns = duration(cal.offset_mhz);
  Complex a = semiresonant_amplitude(g, cal.offset_mhz, cal.duration_ns);
  cal.phase = kPi + std::arg(-a);
  cal.return_population = std::norm(a);
  return cal;
}

double ResonantCZPlan::active_ns() const {
  return identity ? 0.0 : 2.0 * emission_ns + wait_ns + semi_ns;
}

ControlSchedule cz_schedule(const ResonantCZPlan& plan) {
  ControlSchedule s;
  s.span_ns = std::max(plan.slot_ns, plan.active_ns());
  if (plan.identity) return s;
  double t = 0.0;
  s.detunings.push_back({t, plan.emission_ns, plan.emission_detuning_ghz, 0.0});
  t += plan.emission_ns + plan.wait_ns;
  s.detunings.push_back({t, plan.semi_ns, plan.semi_detuning_ghz, 0.0});
  t += plan.semi_ns;
  s.detunings.push_back({t, plan.emission_ns, plan.emission_detuning_ghz, 0.0});
  return s;
}

ResonantCZPlan schedule_cz(const CompositeSpace& space, double phi, const CZOptions& options) {
  if (space.n_levels(0) < 3 || options.comp1 != 2) {
    throw ConfigError("controlled phase: qudit 1 needs levels {0, 1} plus an auxiliary level");
  }
  if (options.comp2 < 2 || options.comp2 > space.n_levels(1)) {
    throw ConfigError("controlled phase: qudit 2 needs at least two computational levels");
  }
  if (space.n_max() < 1) throw ConfigError("controlled phase needs photon levels");
  const int e = options.comp1;  // auxiliary level of qudit 1
  ResonantCZPlan plan;
  plan.phi = phi;

  EmissionCalibration em = calibrate_emission(space, 1, 0, 1);
  plan.emission_ns = em.duration_ns;
  plan.emission_detuning_ghz = em.detuning_ghz;

  const double gap_e = space.energy_of(0, e) - space.energy_of(0, 0);
  if (gap_e <= 0.0) throw ConfigError("auxiliary level must lie above level 0");
  const double g_e = transition_coupling_mhz(space.spec(0), space.m_of(0, 0), space.m_of(0, e));
  const double idle_period = 1.0 / std::abs(space.omega0_ghz() -
                                            (space.energy_of(1, 1) - space.energy_of(1, 0)));
  if (options.fixed_slot) {
    plan.slot_ns = 2.0 * plan.emission_ns + 1e3 / (2.0 * g_e) + idle_period;
  }

  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p < 1e-12 || kTwoPi - p < 1e-12) {
    plan.identity = true;
    plan.local = fit_product_phases(cz_block(space, plan, options), options.comp1, options.comp2);
    return plan;
  }

  const double max_offset =
      (options.max_detuning_ghz - std::abs(gap_e - space.omega0_ghz())) * 1e3;
  SemiresonantCalibration sc = calibrate_semiresonant_phase(g_e, p, max_offset);
  plan.semi_offset_mhz = sc.offset_mhz;
  plan.semi_ns = sc.duration_ns;
  plan.semi_detuning_ghz = gap_e + sc.offset_mhz * 1e-3 - space.omega0_ghz();

  // Secant refinement of the offset against the full conditional phase.
  auto mismatch = [&](double off) {
    ResonantCZPlan trial = plan;
    trial.semi_offset_mhz = off;
    trial.semi_ns = 1e3 / std::sqrt(4.0 * g_e * g_e + off * off);
    trial.semi_detuning_ghz = gap_e + off * 1e-3 - space.omega0_ghz();
    return wrap_angle(conditional_phase(cz_block(space, trial, options), options.comp2) + p);
  };
  double x0 = plan.semi_offset_mhz, f0 = mismatch(x0);
  double x1 = x0 + 1e-3 * g_e, f1 = mismatch(x1);
  for (int it = 0; it < 8 && std::abs(f1) > 1e-9 && f1 != f0; ++it) {
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = mismatch(x1);
  }
  plan.semi_offset_mhz = x1;
  plan.semi_ns = 1e3 / std::sqrt(4.0 * g_e * g_e + x1 * x1);
  plan.semi_detuning_ghz = gap_e + x1 * 1e-3 - space.omega0_ghz();
  if (std::abs(plan.semi_detuning_ghz) > options.max_detuning_ghz) {
    throw ConfigError("semi-resonant phase unreachable within the detuning bound");
  }

  compensate_phases(plan, space, options);
  return plan;
}

void compensate_phases(ResonantCZPlan& plan, const CompositeSpace& space,
                       const CZOptions& options) {
  if (!plan.identity) {
    const double period = 1.0 / std::abs(space.omega0_ghz() -
                                          (space.energy_of(1, 1) - space.energy_of(1, 0)));
    auto theta = [&](double w) {
      ResonantCZPlan trial = plan;
      trial.wait_ns = w;
      Matrix b = cz_block(space, trial, options);
      return wrap_angle(diag_phase(b, options.comp2, 1, 1) - diag_phase(b, options.comp2, 1, 0));
    };
    const int samples = 24;
    double best = -1.0, best_lo = 0.0, best_hi = 0.0;
    double prev = theta(0.0);
    for (int k = 1; k <= samples; ++k) {
      double w = period * k / samples;
      double cur = theta(w);
      // A genuine zero crossing has both ends small; the ±π wrap does not.
      if (prev * cur <= 0.0 && std::abs(prev) + std::abs(cur) < kPi) {
        double score = std::abs(prev) + std::abs(cur);
        if (best < 0.0 || score < best) {
          best = score;
          best_lo = period * (k - 1) / samples;
          best_hi = w;
        }
      }
      prev = cur;
    }
    if (best < 0.0) throw NumericalError("compensating wait: no phase null found");
    plan.wait_ns = bisect(theta, best_lo, best_hi, 1e-9);
  }
  Matrix b = cz_block(space, plan, options);
  Matrix m = b * cz_ideal(plan.phi, options.comp1, options.comp2).adjoint();
  plan.local = fit_product_phases(m, options.comp1, options.comp2);
  plan.conditional_error =
      plan.identity ? std::abs(conditional_phase(b, options.comp2))
                    : std::abs(wrap_angle(conditional_phase(b, options.comp2) + plan.phi));
  plan.max_photon = max_photon_left(space, cz_schedule(plan), options.comp1, options.comp2);
}

double effective_dispersive_coupling(double g1_mhz, double g2_mhz, double delta_mhz) {
  if (std::abs(delta_mhz) < 10.0 * std::max(std::abs(g1_mhz), std::abs(g2_mhz))) {
    throw ConfigError("dispersive regime requires |Δ| >= 10 G");
  }
  return g1_mhz * g2_mhz / delta_mhz;
}

DispersivePlan schedule_iswap_dispersive(const CompositeSpace& space, double tau,
                                         const DispersiveOptions& options) {
  if (space.n_levels(0) < 2 || space.n_levels(1) < 2 || space.n_max() < 1) {
    throw ConfigError("dispersive exchange needs two levels per qudit and one photon");
  }
  if (tau <= 0.0 || tau > kTwoPi) throw ConfigError("U_XY angle must lie in (0, 2π]");
  DispersivePlan plan;
  plan.delta1_mhz = options.delta1_mhz;
  plan.delta2_idle_mhz = options.delta2_idle_mhz;
  plan.tau = tau;
  const double gap1 = space.energy_of(0, 1) - space.energy_of(0, 0);
  const double gap2 = space.energy_of(1, 1) - space.energy_of(1, 0);
  const double dm2 = space.m_of(1, 1) - space.m_of(1, 0);
  plan.field_shift_mt = (gap1 - gap2) / (space.zeeman_per_mt(1) * dm2);
  plan.resonator_detuning_ghz = gap1 + options.delta1_mhz * 1e-3 - space.omega0_ghz();
  if (std::abs(plan.resonator_detuning_ghz) > options.max_detuning_ghz) {
    throw ConfigError("dispersive window exceeds the detuning bound");
  }
  const double g1 = transition_coupling_mhz(space.spec(0), space.m_of(0, 0), space.m_of(0, 1));
  const double g2 = transition_coupling_mhz(space.spec(1), space.m_of(1, 0), space.m_of(1, 1));
  plan.gamma_mhz = effective_dispersive_coupling(g1, g2, options.delta1_mhz);

  // The window Hamiltonian is static, so every scan below works in its eigenbasis.
  Vector v01 = space.basis_state(0, 1, 0), v10 = space.basis_state(1, 0, 0);
  auto window = [&](double delta1_mhz, double field_mt) {
    ControlSchedule probe;
    probe.span_ns = 1.0;
    probe.detunings.push_back({0.0, 1.0, gap1 + delta1_mhz * 1e-3 - space.omega0_ghz(), 0.0});
    probe.fields.push_back({1, 0.0, 1.0, field_mt});
    return StaticEvolution(hamiltonian_at(space, probe, 0.5));
  };
  auto t_full_swap = [&](const StaticEvolution& ev, double delta1_mhz) {
    const double seed = 1e3 * delta1_mhz / (4.0 * g1 * g2);
    return golden_max([&](double t) { return std::norm(ev.amplitude(v10, v01, t)); },
                      0.7 * seed, 1.3 * seed, 1e-3);
  };
  // Stark shifts from the other transitions leave a small gap mismatch; trim the local field
  // until the exchange is complete.
  {
    const double f0 = plan.field_shift_mt;
    const double span = 2e-3 * std::abs(f0) + 1e-3;
    plan.field_shift_mt = golden_max(
        [&](double f) {
          StaticEvolution ev = window(options.delta1_mhz, f);
          return std::norm(ev.amplitude(v10, v01, t_full_swap(ev, options.delta1_mhz)));
        },
        f0 - span, f0 + span, 1e-9);
  }
  const double want = std::pow(std::sin(0.5 * tau), 2);
  auto hold_for = [&](const StaticEvolution& ev, double delta1_mhz) {
    auto swap = [&](double t) { return std::norm(ev.amplitude(v10, v01, t)); };
    const double t_pi = t_full_swap(ev, delta1_mhz);
    // Near τ = π the target can exceed the best reachable transfer.
    if (std::abs(tau - kPi) < 1e-12 || want >= swap(t_pi)) return t_pi;
    if (tau < kPi) return bisect([&](double t) { return swap(t) - want; }, 0.0, t_pi, 1e-6);
    // Past π the swap returns towards zero; near 2π the target sits below its minimum.
    const double t_back =
        golden_max([&](double t) { return -swap(t); }, 1.7 * t_pi, 2.3 * t_pi, 1e-3);
    if (want <= swap(t_back)) return t_back;
    return bisect([&](double t) { return want - swap(t); }, t_pi, t_back, 1e-6);
  };
  auto leakage = [&](const StaticEvolution& ev, double t) {
    double worst = 0.0;
    for (int i : computational_indices(space, 2, 2)) {
      const Vector from = Vector::Unit(space.dim(), i);
      double photons = 0.0;
      for (int j = 0; j < space.dim(); ++j) {
        if (space.photons_of(j) > 0) {
          photons += space.photons_of(j) * std::norm(ev.amplitude(Vector::Unit(space.dim(), j), from, t));
        }
      }
      worst = std::max(worst, photons);
    }
    return worst;
  };
  // Sudden switching leaves a photon admixture oscillating at the detuning; it vanishes when
  // the hold spans whole oscillations. Δ1 is trimmed (within ±1 MHz) to land there.
  // Cost: leftover photon plus the miss on the requested swap (matters where the hold clamps).
  auto leak_at = [&](double d) {
    StaticEvolution ev = window(d, plan.field_shift_mt);
    const double t = hold_for(ev, d);
    return leakage(ev, t) + std::abs(std::norm(ev.amplitude(v10, v01, t)) - want);
  };
  // The leftover photon goes as e^{iΔt}, so the scan resolves ~0.3 rad of Δ·hold per step.
  const double d_span = 1.0;
  const double hold0 = hold_for(window(options.delta1_mhz, plan.field_shift_mt), options.delta1_mhz);
  const int n_scan =
      std::max(200, static_cast<int>(std::ceil(2.0 * d_span * kTwoPi * 1e-3 * hold0 / 0.3)));
  double best_d = options.delta1_mhz, best_l = leak_at(best_d);
  for (int k = 0; k <= n_scan; ++k) {
    double d = options.delta1_mhz - d_span + 2.0 * d_span * k / n_scan;
    double l = leak_at(d);
    if (l < best_l) {
      best_l = l;
      best_d = d;
    }
  }
  const double step = 2.0 * d_span / n_scan;
  const double refined =
      golden_max([&](double d) { return -leak_at(d); }, best_d - step, best_d + step, 1e-7);
  if (leak_at(refined) < best_l) best_d = refined;
  plan.delta1_mhz = best_d;
  plan.resonator_detuning_ghz = gap1 + best_d * 1e-3 - space.omega0_ghz();
  plan.gamma_mhz = effective_dispersive_coupling(g1, g2, best_d);
  StaticEvolution ev = window(best_d, plan.field_shift_mt);
  plan.hold_ns = hold_for(ev, best_d);
  plan.swap_fraction = std::norm(ev.amplitude(v10, v01, plan.hold_ns));
  plan.leakage = leakage(ev, plan.hold_ns);
  return plan;
}

ControlSchedule dispersive_schedule(const DispersivePlan& plan) {
  ControlSchedule s;
  s.span_ns = plan.total_ns();
  s.detunings.push_back({plan.wait_ns, plan.hold_ns, plan.resonator_detuning_ghz, 0.0});
  s.fields.push_back({1, plan.wait_ns, plan.hold_ns, plan.field_shift_mt});
  return s;
}

Matrix xy_unitary(double tau) {
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = u(2, 2) = std::cos(0.5 * tau);
  u(1, 2) = u(2, 1) = -kI * std::sin(0.5 * tau);
  return u;
}

}  // namespace msqp
