#include "msqp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "msqp/circuit.hpp"
#include "msqp/compiler.hpp"
#include "msqp/register.hpp"

namespace msqp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void BenchmarkTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw NumericalError("table row has the wrong width");
  rows.push_back(std::move(cells));
}

std::size_t BenchmarkTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double BenchmarkTable::number(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

const std::string& BenchmarkTable::text(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

void BenchmarkTable::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
}

int worker_count() {
  if (const char* env = std::getenv("MSQP_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, int workers, const std::function<void(int)>& job) {
  workers = std::clamp(workers, 1, std::max(1, n));
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_at = n;
  std::exception_ptr failure;
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

EvolveOptions evolve_options(const ExperimentConfig& config) {
  EvolveOptions o;
  o.method = config.integrator == "rk4" ? Integrator::RK4 : Integrator::Propagator;
  o.steps_per_period = config.steps_per_period;
  o.chunk_ns = config.chunk_ns;
  o.check_convergence = config.check_convergence;
  return o;
}

const std::vector<double>& benchmark_amplitudes() {
  static const std::vector<double> a{0.31, 0.46, 0.48, 0.37, 0.37, 0.25, 0.25, 0.24};
  return a;
}

namespace {

struct NoisePoint {
  double t2_us;
  double quality;
};

std::vector<NoisePoint> noise_grid(const ExperimentConfig& c) {
  std::vector<NoisePoint> grid;
  for (double q : c.quality) {
    for (double t2 : c.t2_us) grid.push_back({t2, q});
  }
  return grid;
}

NoiseModel noise_model(const ExperimentConfig& c, const NoisePoint& p) {
  NoiseModel n;
  n.t2_us = p.t2_us;
  n.quality_factor = p.quality;
  n.reference_ghz = c.omega0_ghz;
  return n;
}

std::vector<int> first_labels(int n) {
  std::vector<int> v(n);
  for (int k = 0; k < n; ++k) v[k] = k;
  return v;
}

// Two logical levels per qudit; qudit 1 keeps the auxiliary level used by the controlled phase.
CompositeSpace resonant_space(const ExperimentConfig& c, int comp2) {
  return CompositeSpace(c.q1, c.q2, {0, 1, 2}, first_labels(comp2), std::max(c.n_max, 1),
                        c.field_mt, c.omega0_ghz, c.rwa);
}

CompositeSpace dispersive_space(const ExperimentConfig& c) {
  return CompositeSpace(c.q1, c.q2, {0, 1}, {0, 1}, std::max(c.n_max, 1), c.field_mt, c.omega0_ghz,
                        c.rwa);
}

RegisterOptions register_options(const ExperimentConfig& c, int comp2) {
  RegisterOptions o;
  o.comp2 = comp2;
  o.b1_gauss = c.b1_gauss.front();
  o.min_pulse_ns = c.min_pulse_ns;
  o.fixed_cz_slot = c.cz_fixed_slot;
  o.dispersive.delta1_mhz = c.delta1_mhz;
  o.dispersive.delta2_idle_mhz = c.delta2_mhz;
  return o;
}

// Noisy end state of a register schedule, mapped to the ideal frame of its logical block.
Matrix run_register(const Register& r, const Vector& psi, const NoiseModel& noise,
                    const EvolveOptions& options) {
  const Matrix rho0 = r.initial_density(psi);
  const Matrix rho = evolve(r.space(), r.schedule(), noise, rho0, 0.0, r.duration(), options);
  return r.logical_density(rho);
}

double fidelity_to(const Matrix& rho, const Vector& target) {
  const Vector t = target.normalized();
  return std::real(t.dot(rho * t));
}

Vector to_vector(const std::vector<double>& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) v(k) = a[k];
  return v;
}

Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::exp(-kI * es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct Pauli {
  Matrix sx, sy, sz, id;
  Pauli() : sx(2, 2), sy(2, 2), sz(2, 2), id(Matrix::Identity(2, 2)) {
    sx << 0.0, 0.5, 0.5, 0.0;
    sy << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
    sz << 0.5, 0.0, 0.0, -0.5;
  }
};

Matrix kron2(const Matrix& a, const Matrix& b) {
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  }
  return out;
}

double sz_expectation(const Matrix& rho, int qubit) {
  const Pauli p;
  const Matrix op = qubit == 0 ? kron2(p.sz, p.id) : kron2(p.id, p.sz);
  return std::real((rho * op).trace());
}

}  // namespace

Matrix heisenberg_exact(double jt) {
  const Pauli p;
  const Matrix h = kron2(p.sx, p.sx) + kron2(p.sy, p.sy) + kron2(p.sz, p.sz);
  return expm_hermitian(h, jt);
}

Matrix tim_exact(double tb) {
  const Pauli p;
  const Matrix h = 2.0 * kron2(p.sz, p.sz) + kron2(p.sx, p.id) + kron2(p.id, p.sx);
  return expm_hermitian(h, tb);
}

Matrix tim_trotter(double tb, int n) {
  const Pauli p;
  const Matrix step = expm_hermitian(kron2(p.sx, p.id) + kron2(p.id, p.sx), tb / n) *
                      expm_hermitian(2.0 * kron2(p.sz, p.sz), tb / n);
  Matrix u = Matrix::Identity(4, 4);
  for (int k = 0; k < n; ++k) u = step * u;
  return u;
}

std::string tool_version() { return "0.1.0"; }

void RunManifest::write(std::ostream& out) const {
  out << "# msqp run manifest\n";
  out << "version = " << version << "\n";
  out << "workers = " << workers << "\n";
  out << "# resolved config\n";
  emit_config(out, config);
  out << "# numerical policy\n";
  const EvolveOptions o = evolve_options(config);
  out << "policy.integrator = " << config.integrator << "\n";
  out << "policy.max_dt_rule = 1 / (" << format_number(o.steps_per_period) << " * f_max)\n";
  out << "policy.chunk_ns = " << format_number(o.chunk_ns) << "\n";
  out << "policy.invariant_checks = " << (o.check_invariants ? "on" : "off") << "\n";
  out << "policy.convergence_check = "
      << (o.check_convergence ? "halved-step rerun, tol " + format_number(o.convergence_tol)
                              : std::string("off"))
      << "\n";
  out << "# timings\n";
  for (const auto& [stage, s] : timings_s) out << "time." << stage << "_s = " << s << "\n";
  for (const auto& w : warnings) out << "warning = " << w << "\n";
}

}  // namespace msqp

namespace msqp {

namespace {

// Logical levels |0>, |1>, |2>, |3> sit on m = 0, +1, -1, -2; remaining retained levels follow
// in label order as leakage buffers.
CompositeSpace dj_space(const ExperimentConfig& c) {
  if (c.levels1 < 4) throw ConfigError("deutsch_jozsa needs levels1 >= 4");
  std::vector<int> labels{0, 2, 1, 3};
  for (int l = 4; l < c.levels1; ++l) labels.push_back(l);
  return CompositeSpace(c.q1, c.q2, labels, first_labels(c.levels2), c.n_max, c.field_mt,
                        c.omega0_ghz, c.rwa);
}

// Each circuit gate is compiled on its own and the rotation lists are concatenated.
ControlSchedule dj_schedule(const CompositeSpace& space, int oracle, double b1_gauss,
                            double min_pulse_ns, std::vector<std::string>* warnings) {
  std::vector<double> ms;
  for (int k = 0; k < 4; ++k) ms.push_back(space.m_of(0, k));
  const ConnectivityGraph graph = build_connectivity(space.spec(0), space.field_mt(), ms);
  GateProgram program{4, {}, 0.0};
  for (const CircuitGate& g : deutsch_jozsa_circuit(oracle).gates) {
    const GateProgram p = givens_decompose(gate_matrix(g, 2), graph);
    program.rotations.insert(program.rotations.end(), p.rotations.begin(), p.rotations.end());
    program.global_phase += p.global_phase;
  }
  PulseOptions po;
  po.b1_gauss = b1_gauss;
  po.min_duration_ns = min_pulse_ns;
  return rotations_to_pulses(program, space, 0, {0, 1, 2, 3}, po, warnings);
}

}  // namespace

BenchmarkTable run_deutsch_jozsa(const ExperimentConfig& config, int workers) {
  config.validate();
  const CompositeSpace space = dj_space(config);
  const EvolveOptions options = evolve_options(config);
  struct Job {
    int oracle;
    double b1;
    NoisePoint noise;
  };
  std::vector<Job> jobs;
  for (int oracle : config.oracles) {
    for (double b1 : config.b1_gauss) {
      for (const NoisePoint& p : noise_grid(config)) jobs.push_back({oracle, b1, p});
    }
  }
  std::vector<std::vector<std::string>> rows(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
    const Job& j = jobs[i];
    const ControlSchedule s = dj_schedule(space, j.oracle, j.b1, config.min_pulse_ns, nullptr);
    const Matrix rho =
        evolve(space, s, noise_model(config, j.noise), initial_state(space), 0.0, s.span_ns, options);
    // Constant oracles must end in {|0>, |1>}, balanced ones in {|2>, |3>}.
    const bool balanced = j.oracle >= 3;
    double wrong = 0.0, logical = 0.0;
    for (int k = 0; k < 4; ++k) {
      double p = 0.0;
      for (int k2 = 0; k2 < space.n_levels(1); ++k2) p += rho(space.index(k, k2, 0), space.index(k, k2, 0)).real();
      logical += p;
      if ((k < 2) == balanced) wrong += p;
    }
    rows[i] = {std::to_string(j.oracle), format_number(j.b1), format_number(j.noise.t2_us),
               format_number(j.noise.quality), format_number(wrong),
               format_number(rho.trace().real() - logical), format_number(s.span_ns)};
  });
  BenchmarkTable t;
  t.columns = {"oracle", "b1_gauss", "t2_us", "quality", "error", "leakage", "duration_ns"};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

namespace {

Register cz_register(const ExperimentConfig& c) {
  Register r(resonant_space(c, 4), register_options(c, 4));
  r.controlled_phase(0, 1, kPi);
  return r;
}

}  // namespace

BenchmarkTable sweep_cz_error(const ExperimentConfig& config, int workers) {
  config.validate();
  const Register reg = cz_register(config);
  const Vector psi = to_vector(benchmark_amplitudes());
  const Vector target = reg.ideal() * psi.normalized();
  const std::vector<NoisePoint> grid = noise_grid(config);
  const EvolveOptions options = evolve_options(config);
  std::vector<std::vector<std::string>> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), workers, [&](int i) {
    const double f = fidelity_to(run_register(reg, psi, noise_model(config, grid[i]), options), target);
    rows[i] = {format_number(grid[i].quality), format_number(grid[i].t2_us), format_number(f),
               format_number(1.0 - f), format_number(reg.duration())};
  });
  BenchmarkTable t;
  t.columns = {"quality", "t2_us", "fidelity", "error", "duration_ns"};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

BenchmarkTable compare_gate_fidelity(const ExperimentConfig& config, int workers) {
  config.validate();
  const Register cz = cz_register(config);
  Register xy(dispersive_space(config), register_options(config, 2));
  xy.exchange(kPi);
  const Vector psi_cz = to_vector(benchmark_amplitudes());
  // The two-level register keeps the |p>|q>, p, q <= 1 components.
  const auto& a = benchmark_amplitudes();
  const Vector psi_xy = to_vector({a[0], a[1], a[4], a[5]});
  const std::vector<NoisePoint> grid = noise_grid(config);
  const EvolveOptions options = evolve_options(config);
  std::vector<std::vector<std::string>> rows(2 * grid.size());
  parallel_for(static_cast<int>(rows.size()), workers, [&](int i) {
    const bool is_cz = i < static_cast<int>(grid.size());
    const NoisePoint& p = grid[is_cz ? i : i - grid.size()];
    const Register& r = is_cz ? cz : xy;
    const Vector& psi = is_cz ? psi_cz : psi_xy;
    const double f = fidelity_to(run_register(r, psi, noise_model(config, p), options),
                                 r.ideal() * psi.normalized());
    rows[i] = {is_cz ? "cz" : "iswap", format_number(p.quality), format_number(p.t2_us),
               format_number(f), format_number(r.duration())};
  });
  BenchmarkTable t;
  t.columns = {"gate", "quality", "t2_us", "fidelity", "duration_ns"};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

}  // namespace msqp

namespace msqp {

namespace {

// U_zz(φ) = exp(-iφ s_z s_z) ∝ U^{11}_φ R_z(φ/2) ⊗ R_z(φ/2).
void uzz(Register& r, double phi) {
  r.controlled_phase(1, 1, phi);
  r.apply(0, rz(phi / 2.0), "Rz");
  r.apply(1, rz(phi / 2.0), "Rz");
}

void both(Register& r, const Matrix& u, const std::string& name) {
  r.apply(0, u, name);
  r.apply(1, u, name);
}

Register heisenberg_register(const ExperimentConfig& c, const std::string& method, double jt) {
  if (method == "resonant") {
    Register r(resonant_space(c, 2), register_options(c, 2));
    uzz(r, jt);
    both(r, ry(-kPi / 2.0), "Ry");
    uzz(r, jt);
    both(r, ry(kPi / 2.0), "Ry");
    both(r, rx(kPi / 2.0), "Rx");
    uzz(r, jt);
    both(r, rx(-kPi / 2.0), "Rx");
    return r;
  }
  // Each exchange window gives U_xx U_yy at Jt/2; frame changes turn it into U_xx U_zz and
  // U_zz U_yy.
  Register r(dispersive_space(c), register_options(c, 2));
  r.exchange(jt / 2.0);
  both(r, rx(-kPi / 2.0), "Rx");
  r.exchange(jt / 2.0);
  both(r, rx(kPi / 2.0), "Rx");
  both(r, ry(kPi / 2.0), "Ry");
  r.exchange(jt / 2.0);
  both(r, ry(-kPi / 2.0), "Ry");
  return r;
}

}  // namespace

BenchmarkTable simulate_heisenberg(const ExperimentConfig& config, int workers) {
  config.validate();
  const std::vector<NoisePoint> grid = noise_grid(config);
  const EvolveOptions options = evolve_options(config);
  Vector psi(4);
  psi << 1.0, 1.0, 0.0, 0.0;
  psi /= std::sqrt(2.0);
  struct Job {
    std::string method;
    double jt;
  };
  std::vector<Job> jobs;
  for (const auto& m : config.methods) {
    for (double jt : config.jt) jobs.push_back({m, jt});
  }
  std::vector<std::vector<std::string>> rows(jobs.size() * grid.size());
  parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
    const Job& j = jobs[i];
    const Register r = heisenberg_register(config, j.method, j.jt);
    const Vector exact = heisenberg_exact(j.jt) * psi;
    const Matrix rho_exact = exact * exact.adjoint();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Matrix rho = run_register(r, psi, noise_model(config, grid[k]), options);
      rows[i * grid.size() + k] = {
          j.method, format_number(j.jt), format_number(grid[k].t2_us),
          format_number(grid[k].quality), format_number(sz_expectation(rho, 0)),
          format_number(sz_expectation(rho, 1)), format_number(sz_expectation(rho_exact, 0)),
          format_number(sz_expectation(rho_exact, 1)), format_number(fidelity_to(rho, exact)),
          format_number(r.duration())};
    }
  });
  BenchmarkTable t;
  t.columns = {"method", "jt",        "t2_us",    "quality",  "sz1",
               "sz2",    "sz1_exact", "sz2_exact", "fidelity", "duration_ns"};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

namespace {

// n steps of U_zz(J t/n) followed by R_x(b t/n) on both spins, with J = 2b and b = 1.
Register tim_register(const ExperimentConfig& c, double tb, int n) {
  Register r(resonant_space(c, 2), register_options(c, 2));
  for (int k = 0; k < n; ++k) {
    uzz(r, 2.0 * tb / n);
    both(r, rx(tb / n), "Rx");
  }
  return r;
}

}  // namespace

BenchmarkTable simulate_tim(const ExperimentConfig& config, int workers) {
  config.validate();
  const std::vector<NoisePoint> grid = noise_grid(config);
  const EvolveOptions options = evolve_options(config);
  const int n = config.trotter_steps;
  Vector psi = Vector::Zero(4);
  psi(0) = 1.0;
  std::vector<std::vector<std::string>> rows(config.tb.size() * grid.size());
  parallel_for(static_cast<int>(config.tb.size()), workers, [&](int i) {
    const double tb = config.tb[i];
    const Register r = tim_register(config, tb, n);
    auto total_sz = [](const Matrix& rho) { return sz_expectation(rho, 0) + sz_expectation(rho, 1); };
    const Vector ex = tim_exact(tb) * psi;
    const Vector tr = tim_trotter(tb, n) * psi;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Matrix rho = run_register(r, psi, noise_model(config, grid[k]), options);
      rows[i * grid.size() + k] = {
          format_number(tb),
          format_number(grid[k].t2_us),
          format_number(grid[k].quality),
          format_number(total_sz(ex * ex.adjoint())),
          format_number(total_sz(tr * tr.adjoint())),
          format_number(total_sz(rho)),
          format_number(r.duration())};
    }
  });
  BenchmarkTable t;
  t.columns = {"tb", "t2_us", "quality", "sz_exact", "sz_trotter", "sz_hardware", "duration_ns"};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

BenchmarkTable run_scenario(const ExperimentConfig& config, int workers) {
  if (config.scenario == "deutsch_jozsa") return run_deutsch_jozsa(config, workers);
  if (config.scenario == "cz_sweep") return sweep_cz_error(config, workers);
  if (config.scenario == "gate_comparison") return compare_gate_fidelity(config, workers);
  if (config.scenario == "heisenberg") return simulate_heisenberg(config, workers);
  if (config.scenario == "tim") return simulate_tim(config, workers);
  throw ConfigError("unknown scenario '" + config.scenario + "'");
}

}  // namespace msqp
