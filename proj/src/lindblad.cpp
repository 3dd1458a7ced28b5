#include "msqp/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

namespace msqp {

namespace {

constexpr double kTimeEps = 1e-9;

// Commutator-free fourth-order Magnus nodes and weights.
const double kC1 = 0.5 - std::sqrt(3.0) / 6.0;
const double kC2 = 0.5 + std::sqrt(3.0) / 6.0;
const double kA1 = 0.25 - std::sqrt(3.0) / 6.0;
const double kA2 = 0.25 + std::sqrt(3.0) / 6.0;

Matrix matrix_power(const Matrix& u, long k) {
  Matrix result = Matrix::Identity(u.rows(), u.cols());
  Matrix base = u;
  while (k > 0) {
    if (k & 1) result = base * result;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Matrix cf4_step(const CompositeSpace& space, const ControlSchedule& schedule, double t, double h) {
  const Matrix h1 = hamiltonian_at(space, schedule, t + kC1 * h);
  const Matrix h2 = hamiltonian_at(space, schedule, t + kC2 * h);
  const Matrix first = unitary_exp(kA2 * h1 + kA1 * h2, h);
  const Matrix second = unitary_exp(kA1 * h1 + kA2 * h2, h);
  return second * first;
}

/// Largest frequency present on [a, b): carriers and the spread of the diagonal energies.
double max_frequency(const CompositeSpace& space, const ControlSchedule& schedule, double a,
                     double b) {
  double f = 0.0;
  for (double t : {a, 0.5 * (a + b)}) {
    const RealVector e = diagonal_energies_at(space, schedule, t);
    f = std::max(f, e.maxCoeff() - e.minCoeff());
    for (const DrivePulse* p : schedule.active_pulses(t)) f = std::max(f, p->carrier_ghz);
  }
  return std::max(f, 1e-3);
}

using ChunkFn = std::function<void(const Matrix& u, double dur, long repeat)>;

/// Splits [a, b) into propagator chunks of roughly `chunk` ns and hands them over in order.
void for_each_chunk(const CompositeSpace& space, const ControlSchedule& schedule, double a,
                    double b, double chunk, double steps_per_period, const ChunkFn& fn) {
  const double len = b - a;
  if (len <= 0.0) return;
  const double mid = 0.5 * (a + b);
  const auto pulses = schedule.active_pulses(mid);
  const bool ramping = schedule.ramping(a, b);
  const double h_max = 1.0 / (steps_per_period * max_frequency(space, schedule, a, b));

  if (pulses.empty() && !ramping) {
    const Matrix h = hamiltonian_at(space, schedule, mid);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Matrix& v = es.eigenvectors();
    auto step = [&](double dt) {
      Vector ph(h.rows());
      for (Eigen::Index k = 0; k < h.rows(); ++k) {
        ph(k) = std::exp(-kI * kTwoPi * es.eigenvalues()(k) * dt);
      }
      return Matrix(v * ph.asDiagonal() * v.adjoint());
    };
    const long n = chunk >= len ? 0 : static_cast<long>(std::floor(len / chunk + 1e-12));
    if (n > 0) fn(step(chunk), chunk, n);
    const double r = n > 0 ? len - n * chunk : len;
    if (r > 1e-12) fn(step(r), r, 1);
    return;
  }

  if (pulses.size() == 1 && !ramping) {
    const double period = 1.0 / pulses.front()->carrier_ghz;
    const long k_total = static_cast<long>(std::floor(len / period + 1e-9));
    auto partial = [&](double dt) {
      const long n = std::max(1L, static_cast<long>(std::ceil(dt / h_max)));
      Matrix u = Matrix::Identity(space.dim(), space.dim());
      for (long s = 0; s < n; ++s) u = cf4_step(space, schedule, a + s * dt / n, dt / n) * u;
      return u;
    };
    if (k_total > 0) {
      const Matrix u_period = partial(period);
      const long m = std::isfinite(chunk)
                         ? std::clamp(static_cast<long>(std::llround(chunk / period)), 1L, k_total)
                         : k_total;
      fn(matrix_power(u_period, m), m * period, k_total / m);
      if (k_total % m) fn(matrix_power(u_period, k_total % m), (k_total % m) * period, 1);
    }
    // H(t) is periodic, so the tail equals the evolution from a over the same duration.
    const double r = len - k_total * period;
    if (r > 1e-12) fn(partial(r), r, 1);
    return;
  }

  const long n = std::max(1L, static_cast<long>(std::ceil(len / h_max)));
  const double h = len / n;
  Matrix acc = Matrix::Identity(space.dim(), space.dim());
  double acc_t = 0.0;
  for (long s = 0; s < n; ++s) {
    acc = cf4_step(space, schedule, a + s * h, h) * acc;
    acc_t += h;
    if (acc_t >= chunk - 1e-12 || s + 1 == n) {
      fn(acc, acc_t, 1);
      acc.setIdentity();
      acc_t = 0.0;
    }
  }
}

Matrix loss_rhs(const CompositeSpace& space, double kappa, const Matrix& rho) {
  const Matrix& a = space.a();
  const Matrix& n = space.number();
  return kappa * (2.0 * a * rho * a.adjoint() - n * rho - rho * n);
}

Matrix rk4_rhs_step(const std::function<Matrix(double, const Matrix&)>& f, double t,
                    const Matrix& y, double h) {
  const Matrix k1 = f(t, y);
  const Matrix k2 = f(t + h / 2, y + h / 2 * k1);
  const Matrix k3 = f(t + h / 2, y + h / 2 * k2);
  const Matrix k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Sampler {
  Trajectory* traj;
  double every;
  double next;

  void maybe(double t, const Matrix& rho) {
    if (!traj || every <= 0.0) return;
    if (t >= next - kTimeEps) {
      traj->record(t, rho);
      while (next <= t + kTimeEps) next += every;
    }
  }
};

Matrix evolve_once(const CompositeSpace& space, const ControlSchedule& schedule,
                   const NoiseModel& noise, const Matrix& rho0, double t0, double t1,
                   const EvolveOptions& opt, Trajectory* traj) {
  Matrix rho = rho0;
  Sampler sampler{traj, opt.sample_ns, t0 + opt.sample_ns};
  if (traj) traj->record(t0, rho);
  const auto bps = schedule.breakpoints(t0, t1);
  const bool open = !noise.closed();
  double t = t0;

  if (opt.method == Integrator::RK4) {
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const double a = bps[i], b = bps[i + 1];
      // The last stage sits on the breakpoint, where half-open windows already read the next
      // segment; take the left limit instead.
      const double last = std::nextafter(b, a);
      auto f = [&](double s, const Matrix& r) {
        return lindblad_rhs(space, schedule, noise, r, std::min(s, last));
      };
      const double h_max = 1.0 / (opt.steps_per_period * max_frequency(space, schedule, a, b));
      const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / h_max)));
      const double h = (b - a) / n;
      for (long s = 0; s < n; ++s) {
        rho = rk4_rhs_step(f, a + s * h, rho, h);
        sampler.maybe(a + (s + 1) * h, rho);
      }
      t = b;
    }
  } else {
    double chunk = std::numeric_limits<double>::infinity();
    if (open) chunk = opt.chunk_ns;
    if (traj && opt.sample_ns > 0.0) chunk = std::min(chunk, opt.sample_ns);
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      for_each_chunk(space, schedule, bps[i], bps[i + 1], chunk, opt.steps_per_period,
                     [&](const Matrix& u, double dur, long repeat) {
                       for (long r = 0; r < repeat; ++r) {
                         if (open) apply_dissipation(space, noise, rho, dur / 2);
                         rho = u * rho * u.adjoint();
                         if (open) apply_dissipation(space, noise, rho, dur / 2);
                         t += dur;
                         sampler.maybe(t, rho);
                       }
                     });
      t = bps[i + 1];
    }
  }
  if (traj && (traj->times.empty() || traj->times.back() < t1 - kTimeEps)) traj->record(t1, rho);
  if (opt.check_invariants) check_density_matrix(rho, "evolve");
  return rho;
}

}  // namespace

double NoiseModel::dephasing_rate() const {
  return std::isfinite(t2_us) ? 1.0 / (t2_us * 1000.0) : 0.0;
}

double NoiseModel::loss_rate() const {
  return std::isfinite(quality_factor) ? reference_ghz / quality_factor : 0.0;
}

void NoiseModel::validate() const {
  if (!(t2_us > 0.0)) throw ConfigError("T2 must be positive");
  if (!(quality_factor > 0.0)) throw ConfigError("quality factor must be positive");
  if (!(reference_ghz > 0.0)) throw ConfigError("loss reference frequency must be positive");
}

void Trajectory::add_observable(std::string name, Matrix op) {
  names.push_back(std::move(name));
  observables.push_back(std::move(op));
}

void Trajectory::record(double t, const Matrix& rho) {
  std::vector<double> row;
  row.reserve(observables.size() + 2);
  for (const auto& op : observables) row.push_back(expectation(rho, op));
  row.push_back(rho.trace().real());
  row.push_back(purity(rho));
  times.push_back(t);
  values.push_back(std::move(row));
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t_ns";
  for (const auto& n : names) out << ',' << n;
  out << ",trace,purity\n";
  char buf[32];
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", times[i]);
    out << buf;
    for (double v : values[i]) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

Matrix lindblad_rhs(const CompositeSpace& space, const ControlSchedule& schedule,
                    const NoiseModel& noise, const Matrix& rho, double t) {
  const Matrix h = hamiltonian_at(space, schedule, t);
  Matrix out = -kI * kTwoPi * (h * rho - rho * h);
  const double gamma = noise.dephasing_rate();
  if (gamma > 0.0) {
    for (int q = 0; q < 2; ++q) {
      const RealVector& m = space.sz_diagonal(q);
      for (Eigen::Index j = 0; j < rho.rows(); ++j) {
        for (Eigen::Index k = 0; k < rho.cols(); ++k) {
          const double d = m(j) - m(k);
          out(j, k) -= gamma * d * d * rho(j, k);
        }
      }
    }
  }
  const double kappa = noise.loss_rate();
  if (kappa > 0.0) out += loss_rhs(space, kappa, rho);
  return out;
}

void apply_dissipation(const CompositeSpace& space, const NoiseModel& noise, Matrix& rho,
                       double h) {
  const double gamma = noise.dephasing_rate();
  if (gamma > 0.0) {
    const RealVector& m1 = space.sz_diagonal(0);
    const RealVector& m2 = space.sz_diagonal(1);
    for (Eigen::Index j = 0; j < rho.rows(); ++j) {
      for (Eigen::Index k = 0; k < rho.cols(); ++k) {
        const double d1 = m1(j) - m1(k), d2 = m2(j) - m2(k);
        rho(j, k) *= std::exp(-gamma * (d1 * d1 + d2 * d2) * h);
      }
    }
  }
  const double kappa = noise.loss_rate();
  if (kappa > 0.0) {
    const long n = std::max(1L, static_cast<long>(std::ceil(kappa * h / 0.01)));
    auto f = [&](double, const Matrix& r) { return loss_rhs(space, kappa, r); };
    for (long s = 0; s < n; ++s) rho = rk4_rhs_step(f, 0.0, rho, h / n);
  }
}

Matrix evolve(const CompositeSpace& space, const ControlSchedule& schedule,
              const NoiseModel& noise, const Matrix& rho0, double t0, double t1,
              const EvolveOptions& options, Trajectory* trajectory) {
  noise.validate();
  if (rho0.rows() != space.dim() || rho0.cols() != space.dim()) {
    throw ConfigError("initial state dimension does not match the composite space");
  }
  if (!(t1 >= t0)) throw ConfigError("evolve: t1 must not precede t0");
  if (options.check_invariants) check_density_matrix(rho0, "initial state");
  const Matrix rho = evolve_once(space, schedule, noise, rho0, t0, t1, options, trajectory);
  if (options.check_convergence) {
    EvolveOptions fine = options;
    fine.steps_per_period *= 2.0;
    fine.chunk_ns /= 2.0;
    fine.check_convergence = false;
    const Matrix rho_fine = evolve_once(space, schedule, noise, rho0, t0, t1, fine, nullptr);
    const double diff = (rho - rho_fine).cwiseAbs().maxCoeff();
    if (diff > options.convergence_tol) {
      throw NumericalError("evolve: halving-step check failed, max |Δρ| = " +
                           std::to_string(diff));
    }
  }
  return rho;
}

Matrix propagate(const CompositeSpace& space, const ControlSchedule& schedule, double t0,
                 double t1, const EvolveOptions& options) {
  if (!(t1 >= t0)) throw ConfigError("propagate: t1 must not precede t0");
  const auto bps = schedule.breakpoints(t0, t1);
  Matrix u = Matrix::Identity(space.dim(), space.dim());
  if (options.method == Integrator::RK4) {
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const double a = bps[i], b = bps[i + 1];
      // A constant shift keeps the RK4 phases small; it is restored exactly below.
      const double shift = diagonal_energies_at(space, schedule, a).mean();
      auto f = [&](double s, const Matrix& y) {
        Matrix h = hamiltonian_at(space, schedule, s);
        h.diagonal().array() -= shift;
        return Matrix(-kI * kTwoPi * h * y);
      };
      const double h_max =
          1.0 / (options.steps_per_period * max_frequency(space, schedule, a, b));
      const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / h_max)));
      const double h = (b - a) / n;
      Matrix seg = Matrix::Identity(space.dim(), space.dim());
      for (long s = 0; s < n; ++s) seg = rk4_rhs_step(f, a + s * h, seg, h);
      u = std::exp(-kI * kTwoPi * shift * (b - a)) * seg * u;
    }
    return u;
  }
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    for_each_chunk(space, schedule, bps[i], bps[i + 1], std::numeric_limits<double>::infinity(),
                   options.steps_per_period, [&](const Matrix& c, double, long repeat) {
                     u = matrix_power(c, repeat) * u;
                   });
  }
  return u;
}

void check_density_matrix(const Matrix& rho, const std::string& where) {
  const double tr = rho.trace().real();
  if (!std::isfinite(tr) || std::abs(tr - 1.0) > 1e-6) {
    throw NumericalError(where + ": trace drifted to " + std::to_string(tr));
  }
  const double herm = hermiticity_deviation(rho);
  if (herm > 1e-9) {
    throw NumericalError(where + ": Hermiticity violated by " + std::to_string(herm));
  }
  const Matrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -1e-7) {
    throw NumericalError(where + ": negative eigenvalue " + std::to_string(lo));
  }
}

double expectation(const Matrix& rho, const Matrix& op) { return (rho * op).trace().real(); }

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

double state_fidelity(const Matrix& rho, const Vector& psi) {
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

}  // namespace msqp
