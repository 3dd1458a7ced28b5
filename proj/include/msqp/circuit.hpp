#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "msqp/types.hpp"

namespace msqp {

/// One gate of an n-qubit circuit. Qubit 0 is the most significant bit of the basis index.
struct CircuitGate {
  std::string name;  ///< X, H, CX, RX, RY, RZ or U
  std::vector<int> qubits;
  double angle = 0.0;
  Matrix unitary;  ///< only for U
};

struct Circuit {
  int n_qubits = 0;
  std::vector<CircuitGate> gates;

  /// 2^n × 2^n product of all gates, first gate applied first.
  Matrix unitary() const;
};

/// Full-register matrix of one gate.
Matrix gate_matrix(const CircuitGate& gate, int n_qubits);

/// Text format, one statement per line, `#` comments:
///   qubits 2
///   X 1 | H 0 | CX 0 1 | RZ 0 0.25 | U 0 1 : re im re im ... (row-major)
Circuit parse_circuit(std::istream& in);

/// The two-qubit Deutsch-Jozsa circuit for oracle 1..4 (identity, X on ancilla, CX, X·CX·X):
/// X(a), H(q), H(a), U_f, H(q) with q = qubit 0 and a = qubit 1.
Circuit deutsch_jozsa_circuit(int oracle);

}  // namespace msqp
