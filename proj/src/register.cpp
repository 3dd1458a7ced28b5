#include "msqp/register.hpp"

#include <algorithm>
#include <cmath>

namespace msqp {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Register::Register(const CompositeSpace& space, RegisterOptions options)
    : space_(space), options_(options) {
  if (options_.comp1 < 1 || options_.comp1 > space_.n_levels(0) || options_.comp2 < 1 ||
      options_.comp2 > space_.n_levels(1)) {
    throw ConfigError("register: computational levels exceed the retained levels");
  }
  if (!(options_.gap_ns >= 0.0)) throw ConfigError("register: gap must be non-negative");
  frame_.q1.assign(options_.comp1, 0.0);
  frame_.q2.assign(options_.comp2, 0.0);
  ideal_ = Matrix::Identity(comp_dim(), comp_dim());
}

Matrix Register::embed_single(int qudit, const Matrix& u) const {
  const int c1 = options_.comp1, c2 = options_.comp2;
  return qudit == 0 ? kron(u, Matrix::Identity(c2, c2)) : kron(Matrix::Identity(c1, c1), u);
}

void Register::commit(const std::string& name, double t0, const Matrix& ideal_op) {
  const double t1 = schedule_.span_ns;
  const Matrix u = logical_propagator(space_, schedule_, t0, t1);
  const Matrix p = computational_block(space_, u, options_.comp1, options_.comp2);
  const Matrix m = p * product_phase_matrix(frame_) * ideal_op.adjoint();
  ProductPhases next = fit_product_phases(m, options_.comp1, options_.comp2);
  OpRecord rec;
  rec.name = name;
  rec.t0_ns = t0;
  rec.t1_ns = t1;
  rec.fidelity = std::abs((product_phase_matrix(next).adjoint() * m).trace()) / comp_dim();
  for (int k1 = 0; k1 < options_.comp1; ++k1) {
    for (int k2 = 0; k2 < options_.comp2; ++k2) {
      const int col = space_.index(k1, k2, 0);
      double photons = 0.0;
      for (int j1 = 0; j1 < space_.n_levels(0); ++j1) {
        for (int j2 = 0; j2 < space_.n_levels(1); ++j2) {
          for (int n = 1; n <= space_.n_max(); ++n) {
            photons += std::norm(u(space_.index(j1, j2, n), col));
          }
        }
      }
      rec.photon_residual = std::max(rec.photon_residual, photons);
    }
  }
  ops_.push_back(rec);
  frame_ = next;
  ideal_ = ideal_op * ideal_;
}

void Register::virtual_phase(int qudit, const std::vector<double>& phases) {
  std::vector<double>& z = qudit == 0 ? frame_.q1 : frame_.q2;
  if (phases.size() != z.size()) throw ConfigError("virtual phase: size mismatch");
  Matrix d = Matrix::Zero(z.size(), z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    d(k, k) = std::exp(kI * phases[k]);
    z[k] -= phases[k];
  }
  ideal_ = embed_single(qudit, d) * ideal_;
}

void Register::rotate(int qudit, const GivensRotation& r) {
  const int c = qudit == 0 ? options_.comp1 : options_.comp2;
  std::vector<double> ms;
  for (int k = 0; k < c; ++k) ms.push_back(space_.m_of(qudit, k));
  const ConnectivityGraph graph = build_connectivity(space_.spec(qudit), space_.field_mt(), ms);
  for (const GivensRotation& step : route_rotation(r, graph)) {
    if (step.theta < 1e-12) continue;
    const std::vector<double>& z = qudit == 0 ? frame_.q1 : frame_.q2;
    GivensRotation physical = step;
    physical.phi = step.phi + z[step.a] - z[step.b];
    // Local field segments shift the logical frame by g muB ∫δB dt · m, which the carrier phase
    // (bare energies only) does not see.
    const double field_phase = kTwoPi * space_.zeeman_per_mt(qudit) *
                               schedule_.field_integral(qudit, schedule_.span_ns);
    physical.phi -= field_phase * (space_.m_of(qudit, step.a) - space_.m_of(qudit, step.b));
    std::vector<int> levels(c);
    for (int k = 0; k < c; ++k) levels[k] = k;
    PulseOptions po;
    po.b1_gauss = options_.b1_gauss;
    po.min_duration_ns = options_.min_pulse_ns;
    po.start_ns = schedule_.span_ns;
    const double t0 = schedule_.span_ns;
    ControlSchedule pulses =
        rotations_to_pulses(GateProgram{c, {physical}, 0.0}, space_, qudit, levels, po, &warnings_);
    schedule_.append(pulses, 0.0);
    commit("R" + std::to_string(qudit), t0, embed_single(qudit, givens_matrix(c, step)));
    idle(options_.gap_ns);
  }
}

void Register::apply(int qudit, const Matrix& u, const std::string& name) {
  const int c = qudit == 0 ? options_.comp1 : options_.comp2;
  if (u.rows() != c || u.cols() != c) throw ConfigError("apply: " + name + " has wrong size");
  std::vector<double> ms;
  for (int k = 0; k < c; ++k) ms.push_back(space_.m_of(qudit, k));
  const ConnectivityGraph graph = build_connectivity(space_.spec(qudit), space_.field_mt(), ms);
  const GivensElimination el = givens_eliminate(u, graph);
  virtual_phase(qudit, el.phases);
  for (const GivensRotation& r : el.rotations) rotate(qudit, r);
}

void Register::idle(double ns) {
  if (ns <= 0.0) return;
  const double t0 = schedule_.span_ns;
  schedule_.span_ns += ns;
  commit("idle", t0, Matrix::Identity(comp_dim(), comp_dim()));
}

const ResonantCZPlan& Register::cz_plan(double phi) {
  double key = std::fmod(phi, kTwoPi);
  if (key < 0.0) key += kTwoPi;
  auto it = cz_cache_.find(key);
  if (it != cz_cache_.end()) return it->second;
  CZOptions o;
  o.comp1 = options_.comp1;
  o.comp2 = options_.comp2;
  o.fixed_slot = options_.fixed_cz_slot;
  o.max_detuning_ghz = options_.max_detuning_ghz;
  return cz_cache_.emplace(key, schedule_cz(space_, key, o)).first->second;
}

void Register::controlled_phase(int control, int target, double phi) {
  if (options_.comp1 != 2) throw ConfigError("controlled phase: qudit 1 must hold a qubit");
  if (control < 0 || control > 1 || target < 0 || target >= options_.comp2) {
    throw ConfigError("controlled phase: component outside the computational levels");
  }
  if (target != 1) {
    // Permute target <-> 1 on qudit 2 around the native gate.
    Matrix perm = Matrix::Identity(options_.comp2, options_.comp2);
    perm(1, 1) = perm(target, target) = 0.0;
    perm(1, target) = perm(target, 1) = 1.0;
    apply(1, perm, "permutation");
    controlled_phase(control, 1, phi);
    apply(1, perm, "permutation");
    return;
  }
  if (control == 1) {
    // U^{11}_φ = Z_2(e^{-iφ} on level 1) U^{01}_{-φ}.
    controlled_phase(0, 1, -phi);
    std::vector<double> z(options_.comp2, 0.0);
    z[1] = -phi;
    virtual_phase(1, z);
    return;
  }
  const ResonantCZPlan& plan = cz_plan(phi);
  const double t0 = schedule_.span_ns;
  schedule_.append(cz_schedule(plan), t0);
  Matrix o = Matrix::Identity(comp_dim(), comp_dim());
  o(1, 1) = std::exp(-kI * phi);
  commit("CZ", t0, o);
  idle(options_.gap_ns);
}

const DispersivePlan& Register::xy_plan(double tau) {
  auto it = xy_cache_.find(tau);
  if (it != xy_cache_.end()) return it->second;
  return xy_cache_.emplace(tau, schedule_iswap_dispersive(space_, tau, options_.dispersive))
      .first->second;
}

void Register::exchange(double tau) {
  if (options_.comp1 != 2 || options_.comp2 != 2) {
    throw ConfigError("exchange: both qudits must hold qubits");
  }
  if (std::abs(tau) < 1e-12) return;
  DispersivePlan plan = xy_plan(tau);
  const double t0 = schedule_.span_ns;
  const Matrix o = xy_unitary(tau);
  const Matrix z = product_phase_matrix(frame_);
  // The exchange phase between |01> and |10> rotates with the start time; pick the idle wait
  // that makes the window consistent with the product frame.
  const double period = 1.0 / std::abs((space_.energy_of(1, 1) - space_.energy_of(1, 0)) -
                                       (space_.energy_of(0, 1) - space_.energy_of(0, 0)));
  auto score = [&](double w) {
    ControlSchedule trial = schedule_;
    DispersivePlan p = plan;
    p.wait_ns = w;
    trial.append(dispersive_schedule(p), t0);
    const Matrix b = computational_block(
        space_, logical_propagator(space_, trial, t0, trial.span_ns), 2, 2);
    const Matrix m = b * z * o.adjoint();
    return std::abs((product_phase_matrix(fit_product_phases(m, 2, 2)).adjoint() * m).trace());
  };
  const int samples = 24;
  double best_w = 0.0, best = -1.0;
  for (int k = 0; k < samples; ++k) {
    const double w = period * k / samples;
    const double s = score(w);
    if (s > best) {
      best = s;
      best_w = w;
    }
  }
  const double step = period / samples;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::max(0.0, best_w - step), hi = best_w + step;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = score(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = score(x1);
    }
  }
  plan.wait_ns = 0.5 * (lo + hi);
  schedule_.append(dispersive_schedule(plan), t0);
  commit("XY", t0, o);
  idle(options_.gap_ns);
}

Matrix Register::initial_density(const Vector& psi) const {
  if (psi.size() != comp_dim()) throw ConfigError("initial state has wrong dimension");
  const double norm = psi.norm();
  if (norm == 0.0) throw ConfigError("initial state has zero norm");
  Vector full = Vector::Zero(space_.dim());
  for (int k1 = 0; k1 < options_.comp1; ++k1) {
    for (int k2 = 0; k2 < options_.comp2; ++k2) {
      full(space_.index(k1, k2, 0)) = psi(k1 * options_.comp2 + k2) / norm;
    }
  }
  return full * full.adjoint();
}

Matrix Register::logical_density(const Matrix& rho_lab) const {
  const Matrix rho = to_logical_frame(space_, schedule_, rho_lab, schedule_.span_ns);
  const Matrix block = computational_block(space_, rho, options_.comp1, options_.comp2);
  const Matrix z = product_phase_matrix(frame_);
  return z.adjoint() * block * z;
}

Matrix rx(double theta) {
  Matrix m(2, 2);
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  m << c, -kI * s, -kI * s, c;
  return m;
}

Matrix ry(double theta) {
  Matrix m(2, 2);
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  m << c, -s, s, c;
  return m;
}

Matrix rz(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * 0.5 * theta);
  m(1, 1) = std::exp(kI * 0.5 * theta);
  return m;
}

}  // namespace msqp
