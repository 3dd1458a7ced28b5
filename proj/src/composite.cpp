#include "msqp/composite.hpp"

#include <algorithm>
#include <cmath>

namespace msqp {

namespace {

constexpr double kTimeEps = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix project(const Matrix& full, const SpinOperators& ops, const std::vector<double>& ms) {
  const auto n = static_cast<Eigen::Index>(ms.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = full(ops.index_of(ms[i]), ops.index_of(ms[j]));
  }
  return out;
}

template <typename Seg>
std::vector<Seg> sorted_by_start(const std::vector<Seg>& segs) {
  std::vector<Seg> out = segs;
  std::sort(out.begin(), out.end(),
            [](const Seg& a, const Seg& b) { return a.start_ns < b.start_ns; });
  return out;
}

/// Value of δ at the start of each sorted segment (before its ramp).
std::vector<double> detuning_start_values(const std::vector<DetuningSegment>& segs) {
  std::vector<double> v(segs.size(), 0.0);
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (std::abs(segs[i - 1].end_ns() - segs[i].start_ns) < kTimeEps) {
      const auto& p = segs[i - 1];
      // A ramp longer than its segment is rejected by validate(); end value is the target.
      v[i] = p.delta_ghz;
    }
  }
  return v;
}

}  // namespace

void ControlSchedule::validate(double max_abs_detuning_ghz) const {
  if (!(span_ns >= 0.0)) throw ConfigError("schedule span must be non-negative");
  auto pulses_sorted = pulses;
  std::sort(pulses_sorted.begin(), pulses_sorted.end(),
            [](const DrivePulse& a, const DrivePulse& b) { return a.t0_ns < b.t0_ns; });
  for (std::size_t i = 0; i < pulses_sorted.size(); ++i) {
    const auto& p = pulses_sorted[i];
    if (!(p.duration_ns > 0.0)) throw ConfigError("drive pulse duration must be positive");
    if (!(p.amplitude_g >= 0.0)) throw ConfigError("drive amplitude must be non-negative");
    if (!(p.carrier_ghz > 0.0)) throw ConfigError("drive carrier must be positive");
    if (i + 1 < pulses_sorted.size() && p.end_ns() > pulses_sorted[i + 1].t0_ns + kTimeEps) {
      throw ConfigError("drive pulses overlap");
    }
  }
  const auto det = sorted_by_start(detunings);
  for (std::size_t i = 0; i < det.size(); ++i) {
    const auto& d = det[i];
    if (!(d.duration_ns > 0.0)) throw ConfigError("detuning segment duration must be positive");
    if (!(d.ramp_ns >= 0.0) || d.ramp_ns > d.duration_ns + kTimeEps) {
      throw ConfigError("detuning ramp must lie in [0, duration]");
    }
    if (std::abs(d.delta_ghz) > max_abs_detuning_ghz + 1e-12) {
      throw ConfigError("resonator detuning exceeds tunability bound");
    }
    if (i + 1 < det.size() && d.end_ns() > det[i + 1].start_ns + kTimeEps) {
      throw ConfigError("detuning segments overlap");
    }
  }
  for (int q = 0; q < 2; ++q) {
    std::vector<FieldSegment> f;
    for (const auto& s : fields) {
      if (s.qudit != 0 && s.qudit != 1) throw ConfigError("field segment qudit must be 0 or 1");
      if (s.qudit == q) f.push_back(s);
    }
    f = sorted_by_start(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!(f[i].duration_ns > 0.0)) throw ConfigError("field segment duration must be positive");
      if (i + 1 < f.size() && f[i].end_ns() > f[i + 1].start_ns + kTimeEps) {
        throw ConfigError("field segments overlap");
      }
    }
  }
}

double ControlSchedule::detuning_at(double t) const {
  const auto segs = sorted_by_start(detunings);
  const auto starts = detuning_start_values(segs);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (t >= s.start_ns && t < s.end_ns()) {
      if (s.ramp_ns > 0.0 && t < s.start_ns + s.ramp_ns) {
        return starts[i] + (s.delta_ghz - starts[i]) * (t - s.start_ns) / s.ramp_ns;
      }
      return s.delta_ghz;
    }
  }
  return 0.0;
}

double ControlSchedule::detuning_integral(double t) const {
  const auto segs = sorted_by_start(detunings);
  const auto starts = detuning_start_values(segs);
  double total = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (t <= s.start_ns) continue;
    const double upto = std::min(t, s.end_ns());
    const double ramp_end = s.start_ns + s.ramp_ns;
    if (s.ramp_ns > 0.0) {
      const double r = std::min(upto, ramp_end) - s.start_ns;
      // Linear ramp from starts[i]: ∫ = v0 r + (Δ/ramp) r²/2.
      total += starts[i] * r + (s.delta_ghz - starts[i]) / s.ramp_ns * r * r / 2.0;
    }
    if (upto > ramp_end) total += s.delta_ghz * (upto - ramp_end);
  }
  return total;
}

double ControlSchedule::field_at(int qudit, double t) const {
  for (const auto& s : fields) {
    if (s.qudit == qudit && t >= s.start_ns && t < s.end_ns()) return s.delta_mt;
  }
  return 0.0;
}

double ControlSchedule::field_integral(int qudit, double t) const {
  double total = 0.0;
  for (const auto& s : fields) {
    if (s.qudit != qudit || t <= s.start_ns) continue;
    total += s.delta_mt * (std::min(t, s.end_ns()) - s.start_ns);
  }
  return total;
}

std::vector<double> ControlSchedule::breakpoints(double t0, double t1) const {
  std::vector<double> pts{t0, t1};
  auto add = [&](double t) {
    if (t > t0 && t < t1) pts.push_back(t);
  };
  for (const auto& p : pulses) {
    add(p.t0_ns);
    add(p.end_ns());
  }
  for (const auto& d : detunings) {
    add(d.start_ns);
    add(d.end_ns());
    if (d.ramp_ns > 0.0) add(d.start_ns + d.ramp_ns);
  }
  for (const auto& f : fields) {
    add(f.start_ns);
    add(f.end_ns());
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double t : pts) {
    if (out.empty() || t - out.back() > kTimeEps) out.push_back(t);
  }
  if (out.back() < t1) out.back() = t1;
  return out;
}

std::vector<const DrivePulse*> ControlSchedule::active_pulses(double t) const {
  std::vector<const DrivePulse*> out;
  for (const auto& p : pulses) {
    if (p.active(t)) out.push_back(&p);
  }
  return out;
}

bool ControlSchedule::ramping(double t0, double t1) const {
  for (const auto& d : detunings) {
    if (d.ramp_ns <= 0.0) continue;
    const double a = d.start_ns, b = d.start_ns + d.ramp_ns;
    if (a < t1 - kTimeEps && b > t0 + kTimeEps) return true;
  }
  return false;
}

void ControlSchedule::append(const ControlSchedule& other, double offset_ns) {
  for (auto p : other.pulses) {
    p.t0_ns += offset_ns;
    pulses.push_back(p);
  }
  for (auto d : other.detunings) {
    d.start_ns += offset_ns;
    detunings.push_back(d);
  }
  for (auto f : other.fields) {
    f.start_ns += offset_ns;
    fields.push_back(f);
  }
  span_ns = std::max(span_ns, offset_ns + other.span_ns);
}

CompositeSpace::CompositeSpace(QuditSpec q1, QuditSpec q2, std::vector<int> levels1,
                               std::vector<int> levels2, int n_max, double field_mt,
                               double omega0_ghz, bool rwa)
    : specs_{q1, q2},
      levels_{std::move(levels1), std::move(levels2)},
      n_max_(n_max),
      field_mt_(field_mt),
      omega0_(omega0_ghz),
      rwa_(rwa) {
  if (n_max_ < 1) throw ConfigError("n_max must be at least 1");
  if (!(omega0_ > 0.0)) throw ConfigError("omega0 must be positive");
  for (int q = 0; q < 2; ++q) {
    specs_[q].validate();
    orders_[q] = level_order(specs_[q], field_mt_);
    if (levels_[q].empty()) throw ConfigError("retained level list must be nonempty");
    auto sorted = levels_[q];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("retained level list has duplicates");
    }
    for (int label : levels_[q]) {
      if (label < 0 || label >= specs_[q].dimension()) {
        throw ConfigError("retained level label out of range");
      }
      m_[q].push_back(orders_[q].m_of_label[label]);
      energies_[q].push_back(orders_[q].energies_ghz[label]);
    }
  }
  const int l1 = n_levels(0), l2 = n_levels(1), nph = n_max_ + 1;
  dim_ = l1 * l2 * nph;

  Matrix a_small = Matrix::Zero(nph, nph);
  for (int n = 1; n < nph; ++n) a_small(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Matrix id1 = Matrix::Identity(l1, l1), id2 = Matrix::Identity(l2, l2),
               idp = Matrix::Identity(nph, nph);

  std::array<Matrix, 2> sx_small, sy_small, sz_small, sx_up;
  for (int q = 0; q < 2; ++q) {
    const auto ops = build_spin_operators(specs_[q].spin);
    sx_small[q] = project(ops.sx, ops, m_[q]);
    sy_small[q] = project(ops.sy, ops, m_[q]);
    sz_small[q] = project(ops.sz, ops, m_[q]);
    // Part of S_x that raises the bare energy: |hi><lo|.
    const auto n = static_cast<Eigen::Index>(m_[q].size());
    sx_up[q] = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (energies_[q][i] > energies_[q][j]) sx_up[q](i, j) = sx_small[q](i, j);
      }
    }
  }
  auto lift = [&](int q, const Matrix& op) {
    return q == 0 ? kron(kron(op, id2), idp) : kron(kron(id1, op), idp);
  };
  for (int q = 0; q < 2; ++q) {
    sx_[q] = lift(q, sx_small[q]);
    sy_[q] = lift(q, sy_small[q]);
    sz_[q] = lift(q, sz_small[q]);
    sz_diag_[q] = sz_[q].diagonal().real();
  }
  a_ = kron(kron(id1, id2), a_small);
  number_ = a_.adjoint() * a_;

  photon_diag_ = RealVector(dim_);
  bare_diag_ = RealVector(dim_);
  for (int k1 = 0; k1 < l1; ++k1) {
    for (int k2 = 0; k2 < l2; ++k2) {
      for (int n = 0; n < nph; ++n) {
        const int idx = index(k1, k2, n);
        photon_diag_(idx) = n + 0.5;
        bare_diag_(idx) = energies_[0][k1] + energies_[1][k2] + omega0_ * (n + 0.5);
      }
    }
  }

  coupling_ = Matrix::Zero(dim_, dim_);
  for (int q = 0; q < 2; ++q) {
    const double g_ghz = specs_[q].g_coupling_mhz * 1e-3;
    if (rwa_) {
      const Matrix up = lift(q, sx_up[q]);
      // Photon absorption raises the spin energy; emission lowers it.
      coupling_ += 2.0 * g_ghz * (a_ * up + a_.adjoint() * up.adjoint());
    } else {
      coupling_ += 2.0 * g_ghz * (a_ + a_.adjoint()) * sx_[q];
    }
  }
  drive_op_ = specs_[0].g * sy_[0] + specs_[1].g * sy_[1];
}

int CompositeSpace::position_of_label(int qudit, int label) const {
  const auto& lv = levels_[qudit];
  const auto it = std::find(lv.begin(), lv.end(), label);
  if (it == lv.end()) throw ConfigError("level label not retained in this space");
  return static_cast<int>(it - lv.begin());
}

int CompositeSpace::level_of(int qudit, int idx) const {
  const int pair = idx / (n_max_ + 1);
  return qudit == 0 ? pair / n_levels(1) : pair % n_levels(1);
}

Vector CompositeSpace::basis_state(int k1, int k2, int n) const {
  Vector v = Vector::Zero(dim_);
  v(index(k1, k2, n)) = 1.0;
  return v;
}

Vector CompositeSpace::embed(const std::vector<Complex>& amplitudes) const {
  if (static_cast<int>(amplitudes.size()) != n_levels(0) * n_levels(1)) {
    throw ConfigError("amplitude table size must equal |levels1| * |levels2|");
  }
  Vector v = Vector::Zero(dim_);
  for (int k1 = 0; k1 < n_levels(0); ++k1) {
    for (int k2 = 0; k2 < n_levels(1); ++k2) v(index(k1, k2, 0)) = amplitudes[k1 * n_levels(1) + k2];
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) throw ConfigError("amplitude table is zero");
  return v / norm;
}

RealVector diagonal_energies_at(const CompositeSpace& space, const ControlSchedule& schedule,
                                double t) {
  RealVector e = space.bare_diagonal() + schedule.detuning_at(t) * space.photon_diagonal();
  for (int q = 0; q < 2; ++q) {
    const double df = schedule.field_at(q, t);
    if (df != 0.0) e += space.zeeman_per_mt(q) * df * space.sz_diagonal(q);
  }
  return e;
}

Matrix hamiltonian_at(const CompositeSpace& space, const ControlSchedule& schedule, double t) {
  Matrix h = space.coupling();
  h.diagonal() += diagonal_energies_at(space, schedule, t).cast<Complex>();
  for (const DrivePulse* p : schedule.active_pulses(t)) {
    const double amp = p->amplitude_g * kTeslaPerGauss * kMuBGHzPerTesla *
                       std::cos(kTwoPi * p->carrier_ghz * t + p->phase);
    h += amp * space.drive_operator();
  }
  return h;
}

RealVector frame_phases(const CompositeSpace& space, const ControlSchedule& schedule, double t) {
  RealVector phi = space.bare_diagonal() * t + schedule.detuning_integral(t) * space.photon_diagonal();
  for (int q = 0; q < 2; ++q) {
    const double fi = schedule.field_integral(q, t);
    if (fi != 0.0) phi += space.zeeman_per_mt(q) * fi * space.sz_diagonal(q);
  }
  return kTwoPi * phi;
}

Matrix to_logical_frame(const CompositeSpace& space, const ControlSchedule& schedule,
                        const Matrix& rho_lab, double t) {
  const RealVector phi = frame_phases(space, schedule, t);
  Vector f(phi.size());
  for (Eigen::Index k = 0; k < phi.size(); ++k) f(k) = std::exp(kI * phi(k));
  return f.asDiagonal() * rho_lab * f.conjugate().asDiagonal();
}

Matrix initial_state(const CompositeSpace& space) {
  // Retained levels need not be listed in energy order; ground = lowest energy retained.
  std::array<int, 2> ground{};
  for (int q = 0; q < 2; ++q) {
    int best = 0;
    for (int k = 1; k < space.n_levels(q); ++k) {
      if (space.energy_of(q, k) < space.energy_of(q, best)) best = k;
    }
    ground[q] = best;
  }
  const Vector v = space.basis_state(ground[0], ground[1], 0);
  return v * v.adjoint();
}

Matrix initial_state(const CompositeSpace& space, const std::vector<Complex>& amplitudes) {
  const Vector v = space.embed(amplitudes);
  return v * v.adjoint();
}

}  // namespace msqp
