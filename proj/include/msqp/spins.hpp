#pragma once

#include <array>
#include <vector>

#include "msqp/types.hpp"

namespace msqp {

/// One molecular spin qudit. Frequencies are linear (GHz for D, MHz for G).
struct QuditSpec {
  double spin = 10.0;
  double d_ghz = 7.1;
  double g = 2.0;
  double g_coupling_mhz = 0.090;

  int dimension() const { return static_cast<int>(std::lround(2.0 * spin)) + 1; }
  void validate() const;
  bool operator==(const QuditSpec&) const = default;
};

/// Angular-momentum matrices in the |m> basis ordered m = S, S-1, ..., -S.
struct SpinOperators {
  double spin = 0.5;
  Matrix sx, sy, sz;

  int dimension() const { return static_cast<int>(sz.rows()); }
  /// Row/column of |m> in the matrices above.
  int index_of(double m) const { return static_cast<int>(std::lround(spin - m)); }
  double m_of(int index) const { return spin - index; }
};

SpinOperators build_spin_operators(double spin);

/// Zeeman energy scale g·μB·B in GHz for a field in mT.
double zeeman_ghz(double g, double field_mt);

/// E_m = D m² + g μB B m, as a diagonal matrix in the SpinOperators ordering.
Matrix qudit_hamiltonian(const QuditSpec& spec, double field_mt);

/// Energy of |m> in GHz.
double level_energy(const QuditSpec& spec, double field_mt, double m);

/// Energy-ordered relabelling: label p = 0..2S maps to magnetic number m.
struct LevelOrder {
  double field_mt = 0.0;
  std::vector<double> m_of_label;  ///< nondecreasing energy along the label
  std::vector<double> energies_ghz;
  bool degenerate = false;  ///< exact ties were resolved by the tie-break

  int label_of(double m) const;
  std::size_t size() const { return m_of_label.size(); }
};

/// Sorts levels by energy; exact ties put negative m before positive m.
LevelOrder level_order(const QuditSpec& spec, double field_mt);

/// G^m = G sqrt(S(S+1) - m(m+1)) in MHz, for -S <= m < S.
double coupling_strength(const QuditSpec& spec, double m);

/// g μB |<m| b·S |m'>| in MHz for a field vector in µT.
double coupling_from_field(const QuditSpec& spec, const std::array<double, 3>& field_ut, double m,
                           double m_prime);

/// Approximate photon field of a uniform-current thin strip (infinitely long, zero thickness)
/// at the given height above the surface. Returns the largest |b| across the strip
/// cross-section in µT. Current in nA rms, lengths in nm. Not an EM-solver replacement.
double strip_field(double current_na, double width_nm, double height_nm);

/// |b| in µT at lateral offset x (nm, from the strip centre) and height h (nm).
double strip_field_at(double current_na, double width_nm, double height_nm, double x_nm);

}  // namespace msqp
