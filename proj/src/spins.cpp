#include "msqp/spins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msqp {

void QuditSpec::validate() const {
  const double two_s = 2.0 * spin;
  if (!(spin >= 0.5) || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw ConfigError("spin must be a positive multiple of 1/2, got " + std::to_string(spin));
  }
  if (!(g > 0.0)) throw ConfigError("g-factor must be positive");
  if (!(g_coupling_mhz >= 0.0)) throw ConfigError("bare coupling G must be non-negative");
  if (!std::isfinite(d_ghz)) throw ConfigError("anisotropy D must be finite");
}

SpinOperators build_spin_operators(double spin) {
  const double two_s = 2.0 * spin;
  if (!(spin > 0.0) || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw ConfigError("spin must be a positive multiple of 1/2");
  }
  const int dim = static_cast<int>(std::lround(two_s)) + 1;
  SpinOperators ops;
  ops.spin = spin;
  Matrix splus = Matrix::Zero(dim, dim);
  ops.sz = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = spin - k;
    ops.sz(k, k) = m;
    // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>, and |m+1> sits at row k-1.
    if (k > 0) splus(k - 1, k) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
  }
  const Matrix sminus = splus.adjoint();
  ops.sx = 0.5 * (splus + sminus);
  ops.sy = (splus - sminus) / (2.0 * kI);
  return ops;
}

double zeeman_ghz(double g, double field_mt) { return g * kMuBGHzPerTesla * field_mt * 1e-3; }

double level_energy(const QuditSpec& spec, double field_mt, double m) {
  return spec.d_ghz * m * m + zeeman_ghz(spec.g, field_mt) * m;
}

Matrix qudit_hamiltonian(const QuditSpec& spec, double field_mt) {
  spec.validate();
  const int dim = spec.dimension();
  Matrix h = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) h(k, k) = level_energy(spec, field_mt, spec.spin - k);
  return h;
}

int LevelOrder::label_of(double m) const {
  for (std::size_t p = 0; p < m_of_label.size(); ++p) {
    if (std::abs(m_of_label[p] - m) < 1e-9) return static_cast<int>(p);
  }
  throw ConfigError("magnetic number not present in level order");
}

LevelOrder level_order(const QuditSpec& spec, double field_mt) {
  spec.validate();
  const int dim = spec.dimension();
  std::vector<double> ms(dim);
  for (int k = 0; k < dim; ++k) ms[k] = spec.spin - k;
  std::vector<double> e(dim);
  for (int k = 0; k < dim; ++k) e[k] = level_energy(spec, field_mt, ms[k]);

  // Energies are compared exactly; ties at zero field resolve negative m first.
  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (e[a] != e[b]) return e[a] < e[b];
    return ms[a] < ms[b];
  });

  LevelOrder order;
  order.field_mt = field_mt;
  for (int k : idx) {
    order.m_of_label.push_back(ms[k]);
    order.energies_ghz.push_back(e[k]);
  }
  for (int p = 1; p < dim; ++p) {
    if (order.energies_ghz[p] == order.energies_ghz[p - 1]) order.degenerate = true;
  }
  return order;
}

double coupling_strength(const QuditSpec& spec, double m) {
  spec.validate();
  const double s = spec.spin;
  const double frac = m + s;
  if (frac < -1e-12 || m > s - 1.0 + 1e-12 || std::abs(frac - std::round(frac)) > 1e-9) {
    throw ConfigError("coupling_strength: m must satisfy -S <= m < S");
  }
  return spec.g_coupling_mhz * std::sqrt(s * (s + 1.0) - m * (m + 1.0));
}

double coupling_from_field(const QuditSpec& spec, const std::array<double, 3>& field_ut, double m,
                           double m_prime) {
  spec.validate();
  const SpinOperators ops = build_spin_operators(spec.spin);
  const Matrix bs = field_ut[0] * ops.sx + field_ut[1] * ops.sy + field_ut[2] * ops.sz;
  const int i = ops.index_of(m);
  const int j = ops.index_of(m_prime);
  if (i < 0 || j < 0 || i >= ops.dimension() || j >= ops.dimension()) {
    throw ConfigError("coupling_from_field: m outside [-S, S]");
  }
  // µT -> T is 1e-6; GHz -> MHz is 1e3.
  return spec.g * kMuBGHzPerTesla * std::abs(bs(i, j)) * 1e-6 * 1e3;
}

double strip_field_at(double current_na, double width_nm, double height_nm, double x_nm) {
  if (!(width_nm > 0.0) || !(height_nm > 0.0)) {
    throw ConfigError("strip_field: width and height must be positive");
  }
  constexpr double kMu0 = 4e-7 * kPi;
  const double sheet = current_na * 1e-9 / (width_nm * 1e-9);  // A/m
  const double h = height_nm, a = x_nm + width_nm / 2.0, b = x_nm - width_nm / 2.0;
  const double bx = kMu0 * sheet / kTwoPi * (std::atan(a / h) - std::atan(b / h));
  const double bz = kMu0 * sheet / (2.0 * kTwoPi) * std::log((a * a + h * h) / (b * b + h * h));
  return std::hypot(bx, bz) * 1e6;
}

double strip_field(double current_na, double width_nm, double height_nm) {
  // The profile is symmetric; scan half the strip plus a margin beyond the edge.
  constexpr int kSamples = 2000;
  double best = 0.0;
  const double span = width_nm / 2.0 + 5.0 * height_nm;
  for (int k = 0; k <= kSamples; ++k) {
    const double x = span * k / kSamples;
    best = std::max(best, strip_field_at(current_na, width_nm, height_nm, x));
  }
  return best;
}

}  // namespace msqp
