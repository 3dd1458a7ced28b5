#include "msqp/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace msqp {

namespace {

constexpr double kPruneTheta = 1e-12;

double wrap_positive(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

/// Orient every rotation with a < b; g on (b, a) with phase φ equals g on (a, b) with -φ.
GivensRotation canonical(GivensRotation r) {
  if (r.a > r.b) {
    std::swap(r.a, r.b);
    r.phi = -r.phi;
  }
  r.phi = wrap_positive(r.phi);
  return r;
}

/// BFS spanning tree from `root`; neighbours visited lowest energy first.
void spanning_tree(const ConnectivityGraph& g, int root, std::vector<int>& order,
                   std::vector<int>& parent) {
  const int n = g.size();
  parent.assign(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<int> queue{root};
  seen[root] = true;
  order.clear();
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
}

/// Tree path from u to v (inclusive) using parent links of a rooted tree.
std::vector<int> tree_path(const std::vector<int>& parent, int u, int v) {
  auto ancestors = [&](int x) {
    std::vector<int> out{x};
    while (parent[x] >= 0) out.push_back(x = parent[x]);
    return out;
  };
  auto au = ancestors(u), av = ancestors(v);
  while (au.size() > 1 && av.size() > 1 && au[au.size() - 2] == av[av.size() - 2]) {
    au.pop_back();
    av.pop_back();
  }
  // au and av now end at the lowest common ancestor.
  std::vector<int> path(au.begin(), au.end());
  for (auto it = av.rbegin() + 1; it != av.rend(); ++it) path.push_back(*it);
  return path;
}

double sy_element(double spin, double m_a, double m_b) {
  const double lo = std::min(m_a, m_b);
  return 0.5 * std::sqrt(spin * (spin + 1.0) - lo * (lo + 1.0));
}

}  // namespace

Matrix givens_matrix(int d, const GivensRotation& r) {
  if (r.a < 0 || r.b < 0 || r.a >= d || r.b >= d || r.a == r.b) {
    throw ConfigError("Givens rotation levels out of range");
  }
  const double c = std::cos(r.theta / 2.0);
  const Complex s = -kI * std::sin(r.theta / 2.0) * std::exp(kI * r.phi);
  Matrix g = Matrix::Identity(d, d);
  g(r.a, r.a) = c;
  g(r.a, r.b) = s;
  g(r.b, r.a) = -std::conj(s);
  g(r.b, r.b) = c;
  return g;
}

bool ConnectivityGraph::adjacent(int p, int q) const {
  for (const auto& [a, b] : edges) {
    if ((a == p && b == q) || (a == q && b == p)) return true;
  }
  return false;
}

std::vector<int> ConnectivityGraph::neighbors(int p) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges) {
    if (a == p) out.push_back(b);
    if (b == p) out.push_back(a);
  }
  std::sort(out.begin(), out.end(), [&](int x, int y) {
    if (energy[x] != energy[y]) return energy[x] < energy[y];
    return x < y;
  });
  return out;
}

bool ConnectivityGraph::connected() const {
  if (size() == 0) return false;
  std::vector<int> order, parent;
  spanning_tree(*this, 0, order, parent);
  return static_cast<int>(order.size()) == size();
}

std::vector<int> ConnectivityGraph::path(int p, int q) const {
  std::vector<int> order, parent;
  spanning_tree(*this, p, order, parent);
  if (parent[q] < 0 && q != p) throw ConfigError("no path between the requested levels");
  std::vector<int> out{q};
  while (out.back() != p) out.push_back(parent[out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

ConnectivityGraph build_connectivity(const QuditSpec& spec, double field_mt,
                                     const std::vector<double>& m_values) {
  ConnectivityGraph g;
  g.m = m_values;
  for (double m : m_values) {
    if (std::abs(m) > spec.spin + 1e-9) throw ConfigError("magnetic number outside [-S, S]");
    g.energy.push_back(level_energy(spec, field_mt, m));
  }
  for (std::size_t p = 0; p < m_values.size(); ++p) {
    for (std::size_t q = p + 1; q < m_values.size(); ++q) {
      if (std::abs(m_values[p] - m_values[q]) < 1e-9) {
        throw ConfigError("logical levels must map to distinct m");
      }
      if (std::abs(std::abs(m_values[p] - m_values[q]) - 1.0) < 1e-9) {
        g.edges.emplace_back(static_cast<int>(p), static_cast<int>(q));
      }
    }
  }
  if (g.edges.empty() && m_values.size() > 1) throw ConfigError("connectivity graph has no edges");
  return g;
}

ConnectivityGraph build_connectivity_from_labels(const LevelOrder& order,
                                                 const std::vector<int>& labels,
                                                 const std::vector<double>& energies) {
  ConnectivityGraph g;
  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(order.size())) {
      throw ConfigError("level label out of range");
    }
    g.m.push_back(order.m_of_label[label]);
  }
  g.energy = energies.empty() ? std::vector<double>(labels.size(), 0.0) : energies;
  if (energies.empty()) {
    for (std::size_t k = 0; k < labels.size(); ++k) g.energy[k] = order.energies_ghz[labels[k]];
  }
  for (std::size_t p = 0; p < labels.size(); ++p) {
    for (std::size_t q = p + 1; q < labels.size(); ++q) {
      if (labels[p] == labels[q]) throw ConfigError("logical levels must map to distinct labels");
      if (std::abs(std::abs(g.m[p] - g.m[q]) - 1.0) < 1e-9) {
        g.edges.emplace_back(static_cast<int>(p), static_cast<int>(q));
      }
    }
  }
  if (g.edges.empty() && labels.size() > 1) throw ConfigError("connectivity graph has no edges");
  return g;
}

int rotation_bound(int d) { return d * (d - 1) / 2 + 3 * (d - 1); }

GivensElimination givens_eliminate(const Matrix& u, const ConnectivityGraph& graph) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d || d != graph.size()) {
    throw ConfigError("unitary dimension does not match the connectivity graph");
  }
  if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("givens_decompose: input is not unitary");
  }
  if (!graph.connected()) throw ConfigError("givens_decompose: connectivity graph is disconnected");

  std::vector<int> order, parent;
  spanning_tree(graph, 0, order, parent);

  Matrix w = u;
  std::vector<GivensRotation> eliminated;  // W <- R† W in this order
  std::vector<bool> alive(d, true);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == order.front()) break;
    // Remaining vertices sorted by tree distance from v, farthest first.
    std::vector<std::pair<int, std::vector<int>>> others;
    for (int x = 0; x < d; ++x) {
      if (alive[x] && x != v) others.emplace_back(x, tree_path(parent, x, v));
    }
    std::stable_sort(others.begin(), others.end(), [](const auto& a, const auto& b) {
      return a.second.size() > b.second.size();
    });
    for (const auto& [x, path] : others) {
      const int a = path[1];  // next vertex toward v
      const Complex xa = w(a, v), xb = w(x, v);
      if (std::abs(xb) < 1e-15) continue;
      GivensRotation r;
      r.a = a;
      r.b = x;
      r.theta = 2.0 * std::atan2(std::abs(xb), std::abs(xa));
      r.phi = (std::abs(xa) > 0.0 ? std::arg(xa) : 0.0) - std::arg(xb) - kPi / 2.0;
      w = givens_matrix(d, r).adjoint() * w;
      eliminated.push_back(r);
    }
    alive[v] = false;
  }

  GivensElimination out;
  out.order = order;
  out.parent = parent;
  out.phases.resize(d);
  for (int k = 0; k < d; ++k) out.phases[k] = std::arg(w(k, k));
  for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
    if (it->theta < kPruneTheta) continue;
    out.rotations.push_back(canonical(*it));
  }
  return out;
}

GateProgram givens_decompose(const Matrix& u, const ConnectivityGraph& graph) {
  const int d = static_cast<int>(u.rows());
  const GivensElimination el = givens_eliminate(u, graph);
  const std::vector<int>& order = el.order;
  const std::vector<int>& parent = el.parent;
  // Residual diagonal: δ_k = α + Σ_edges ±θ_e/2. Solve leaves-to-root with θ_e = A_e + B_e α.
  const std::vector<double>& delta = el.phases;
  std::vector<double> ca(d, 0.0), cb(d, 0.0);  // θ of edge (parent[v], v) = ca[v] + cb[v] α
  std::vector<double> child_a(d, 0.0), child_b(d, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (parent[v] < 0) continue;
    // δ_v = α + θ_pv/2 - Σ_c θ_vc/2.
    ca[v] = 2.0 * delta[v] + child_a[v];
    cb[v] = -2.0 + child_b[v];
    child_a[parent[v]] += ca[v];
    child_b[parent[v]] += cb[v];
  }
  const int root = order.front();
  // δ_root = α - Σ_c θ_rc/2.
  const double alpha = (delta[root] + child_a[root] / 2.0) / (1.0 - child_b[root] / 2.0);

  GateProgram program;
  program.d = d;
  for (int v : order) {
    if (parent[v] < 0) continue;
    const double theta = std::remainder(ca[v] + cb[v] * alpha, 2.0 * kTwoPi);
    if (std::abs(theta) < kPruneTheta) continue;
    for (const auto& r : synthesize_z_rotation(theta, parent[v], v)) program.rotations.push_back(r);
  }
  for (const auto& r : el.rotations) program.rotations.push_back(r);
  program.global_phase = 0.0;
  const Matrix p = reconstruct_unitary(program);
  program.global_phase = std::arg((p.conjugate().cwiseProduct(u)).sum());
  return program;
}

std::vector<GivensRotation> synthesize_z_rotation(double theta, int a, int b) {
  // Z(θ) has period 4π; negative angles flip the middle rotation axis instead.
  theta = std::remainder(theta, 2.0 * kTwoPi);
  const GivensRotation middle =
      theta >= 0.0 ? GivensRotation{a, b, theta, kPi / 2.0} : GivensRotation{a, b, -theta, 1.5 * kPi};
  return {canonical({a, b, kPi / 2.0, 0.0}), canonical(middle), canonical({a, b, kPi / 2.0, kPi})};
}

std::vector<GivensRotation> route_rotation(const GivensRotation& target,
                                           const ConnectivityGraph& graph) {
  if (graph.adjacent(target.a, target.b)) return {target};
  const auto path = graph.path(target.a, target.b);
  const int d = graph.size();
  // Move level b onto path[1] with π rotations, rotate on (a, path[1]), move back.
  std::vector<GivensRotation> forward;
  for (std::size_t i = path.size() - 1; i >= 2; --i) {
    forward.push_back({path[i - 1], path[i], kPi, 0.0});
  }
  Matrix c = Matrix::Identity(d, d);
  for (const auto& r : forward) c = givens_matrix(d, r) * c;
  const double gamma = std::arg(c(path[1], target.b));
  std::vector<GivensRotation> out = forward;
  out.push_back(canonical({target.a, path[1], target.theta, target.phi - gamma}));
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    out.push_back(canonical({it->a, it->b, kPi, kPi}));
  }
  return out;
}

Matrix reconstruct_unitary(const GateProgram& program) {
  Matrix u = Matrix::Identity(program.d, program.d);
  for (const auto& r : program.rotations) u = givens_matrix(program.d, r) * u;
  return std::exp(kI * program.global_phase) * u;
}

double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
  const Complex overlap = (a.conjugate().cwiseProduct(b)).sum();
  const double phase = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  return (std::exp(kI * phase) * a - b).cwiseAbs().maxCoeff();
}

double drive_phase_for(double phi, double m_a, double m_b, double e_a, double e_b) {
  const double arg_y = m_b > m_a ? kPi / 2.0 : -kPi / 2.0;
  return wrap_positive(e_b > e_a ? phi - arg_y : arg_y - phi);
}

double pulse_duration(double theta, double b1_gauss, double g, double sy_element_abs) {
  if (!(b1_gauss > 0.0)) throw ConfigError("B1 must be positive");
  const double rabi = g * kMuBGHzPerTesla * b1_gauss * kTeslaPerGauss * sy_element_abs;
  return theta / (kTwoPi * rabi);
}

ControlSchedule rotations_to_pulses(const GateProgram& program, const CompositeSpace& space,
                                    int qudit, const std::vector<int>& level_of_logical,
                                    const PulseOptions& options,
                                    std::vector<std::string>* warnings) {
  if (static_cast<int>(level_of_logical.size()) != program.d) {
    throw ConfigError("level map size does not match the program dimension");
  }
  if (!(options.gap_ns >= 0.0)) throw ConfigError("pulse gap must be non-negative");
  const QuditSpec& spec = space.spec(qudit);
  ControlSchedule s;
  double t = options.start_ns;
  for (const auto& r : program.rotations) {
    if (r.theta < kPruneTheta) continue;
    const int pa = level_of_logical[r.a], pb = level_of_logical[r.b];
    const double ma = space.m_of(qudit, pa), mb = space.m_of(qudit, pb);
    if (std::abs(std::abs(ma - mb) - 1.0) > 1e-9) {
      throw ConfigError("rotation on a pair that is not dipole-allowed");
    }
    const double ea = space.energy_of(qudit, pa), eb = space.energy_of(qudit, pb);
    DrivePulse p;
    p.amplitude_g = options.b1_gauss;
    p.carrier_ghz = std::abs(eb - ea);
    p.phase = drive_phase_for(r.phi, ma, mb, ea, eb);
    p.t0_ns = t;
    p.duration_ns = pulse_duration(r.theta, options.b1_gauss, spec.g, sy_element(spec.spin, ma, mb));
    if (p.duration_ns < options.min_duration_ns) {
      p.amplitude_g *= p.duration_ns / options.min_duration_ns;
      p.duration_ns = options.min_duration_ns;
    }
    if (warnings && p.duration_ns * p.carrier_ghz < 10.0) {
      warnings->push_back("pulse at t=" + std::to_string(t) + " ns is shorter than 10 carrier periods");
    }
    s.pulses.push_back(p);
    t = p.end_ns() + options.gap_ns;
  }
  s.span_ns = s.pulses.empty() ? options.start_ns : s.pulses.back().end_ns();
  return s;
}

}  // namespace msqp
