#pragma once

#include <string>
#include <utility>
#include <vector>

#include "msqp/composite.hpp"

namespace msqp {

/// Two-level rotation exp(-iθ/2 (cosφ σx - sinφ σy)) on levels (a, b):
/// [[c, s], [-s*, c]] with c = cos(θ/2), s = -i sin(θ/2) e^{iφ}.
struct GivensRotation {
  int a = 0;
  int b = 1;
  double theta = 0.0;
  double phi = 0.0;
};

/// d×d embedding of a rotation.
Matrix givens_matrix(int d, const GivensRotation& r);

/// Vertices are logical levels; edge iff the underlying magnetic numbers differ by one.
struct ConnectivityGraph {
  std::vector<double> m;        ///< magnetic number per logical level
  std::vector<double> energy;   ///< bare energy per logical level (routing tie-break)
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(m.size()); }
  bool adjacent(int p, int q) const;
  std::vector<int> neighbors(int p) const;
  bool connected() const;
  /// Shortest path p -> q; ties go to the lowest-energy intermediate level.
  std::vector<int> path(int p, int q) const;
};

ConnectivityGraph build_connectivity(const QuditSpec& spec, double field_mt,
                                     const std::vector<double>& m_values);
/// Logical level k sits at energy label labels[k].
ConnectivityGraph build_connectivity_from_labels(const LevelOrder& order,
                                                 const std::vector<int>& labels,
                                                 const std::vector<double>& energies);

/// Rotations in time order (first applied first) plus the global phase:
/// U = e^{i global_phase} R_n ... R_1.
struct GateProgram {
  int d = 0;
  std::vector<GivensRotation> rotations;
  double global_phase = 0.0;
};

/// Largest number of rotations givens_decompose may emit: d(d-1)/2 + 3(d-1) <= 2 d².
int rotation_bound(int d);

GateProgram givens_decompose(const Matrix& u, const ConnectivityGraph& graph);

/// u = R_n ... R_1 diag(e^{i phases}): the elimination part of givens_decompose, with the
/// diagonal left unsynthesised (useful when Z rotations are tracked in software).
struct GivensElimination {
  std::vector<GivensRotation> rotations;  ///< time order, applied after the diagonal
  std::vector<double> phases;
  std::vector<int> order, parent;         ///< BFS spanning tree used for the elimination
};
GivensElimination givens_eliminate(const Matrix& u, const ConnectivityGraph& graph);

/// R(π/2, π) R(θ, π/2) R(π/2, 0) in time order R(π/2,0) first; equals diag(e^{-iθ/2}, e^{iθ/2})
/// on (a, b) up to global phase.
std::vector<GivensRotation> synthesize_z_rotation(double theta, int a, int b);

/// Sequence implementing the rotation on a non-adjacent pair by conjugating with π rotations
/// along the shortest path. Adjacent pairs pass through unchanged.
std::vector<GivensRotation> route_rotation(const GivensRotation& target,
                                           const ConnectivityGraph& graph);

/// Time-ordered product of the program's rotations, including the global phase.
Matrix reconstruct_unitary(const GateProgram& program);

/// Max-norm distance between a and b after removing the best global phase.
double phase_insensitive_distance(const Matrix& a, const Matrix& b);

struct PulseOptions {
  double b1_gauss = 2.0;
  double gap_ns = 0.0;
  double start_ns = 0.0;
  /// Shorter pulses are stretched to this length at proportionally lower amplitude.
  double min_duration_ns = 0.0;
};

/// One rectangular pulse per rotation on qudit `qudit` of `space`. `level_of_logical` maps a
/// program level to the retained position in the space. Frame tracking follows from carriers
/// referenced to absolute time. Short-pulse warnings are appended to `warnings`.
ControlSchedule rotations_to_pulses(const GateProgram& program, const CompositeSpace& space,
                                    int qudit, const std::vector<int>& level_of_logical,
                                    const PulseOptions& options,
                                    std::vector<std::string>* warnings = nullptr);

/// Drive phase realising rotation phase φ on retained levels (a, b) of a qudit whose
/// magnetic numbers are (m_a, m_b) and bare energies (e_a, e_b).
double drive_phase_for(double phi, double m_a, double m_b, double e_a, double e_b);

/// Pulse length for angle θ on a transition with |<a|S_y|b>| = sy_element.
double pulse_duration(double theta, double b1_gauss, double g, double sy_element);

}  // namespace msqp
