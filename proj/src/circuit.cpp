#include "msqp/circuit.hpp"

#include <cmath>
#include <istream>
#include <sstream>

namespace msqp {

namespace {

Matrix local_matrix(const CircuitGate& g) {
  Matrix m(2, 2);
  const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
  if (g.name == "X") {
    m << 0, 1, 1, 0;
  } else if (g.name == "H") {
    m << 1, 1, 1, -1;
    m /= std::sqrt(2.0);
  } else if (g.name == "RX") {
    m << c, -kI * s, -kI * s, c;
  } else if (g.name == "RY") {
    m << c, -s, s, c;
  } else if (g.name == "RZ") {
    m << std::exp(-kI * g.angle / 2.0), 0, 0, std::exp(kI * g.angle / 2.0);
  } else if (g.name == "CX") {
    m = Matrix::Identity(4, 4);
    m(2, 2) = 0;
    m(3, 3) = 0;
    m(2, 3) = 1;
    m(3, 2) = 1;
  } else if (g.name == "U") {
    m = g.unitary;
  } else {
    throw ConfigError("unknown gate '" + g.name + "'");
  }
  return m;
}

CircuitGate simple_gate(std::string name, std::vector<int> qubits) {
  CircuitGate g;
  g.name = std::move(name);
  g.qubits = std::move(qubits);
  return g;
}

int expected_arity(const std::string& name) {
  if (name == "CX") return 2;
  if (name == "U") return -1;
  return 1;
}

}  // namespace

Matrix gate_matrix(const CircuitGate& gate, int n_qubits) {
  const Matrix local = local_matrix(gate);
  const int k = static_cast<int>(gate.qubits.size());
  if (local.rows() != (1 << k)) throw ConfigError("gate '" + gate.name + "' has wrong arity");
  for (int q : gate.qubits) {
    if (q < 0 || q >= n_qubits) throw ConfigError("gate qubit index out of range");
  }
  const int dim = 1 << n_qubits;
  auto bit = [&](int index, int q) { return (index >> (n_qubits - 1 - q)) & 1; };
  auto sub_index = [&](int index) {
    int s = 0;
    for (int q : gate.qubits) s = (s << 1) | bit(index, q);
    return s;
  };
  Matrix out = Matrix::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    for (int col = 0; col < dim; ++col) {
      bool spectators_match = true;
      for (int q = 0; q < n_qubits && spectators_match; ++q) {
        bool acted = false;
        for (int g : gate.qubits) acted = acted || g == q;
        if (!acted && bit(row, q) != bit(col, q)) spectators_match = false;
      }
      if (spectators_match) out(row, col) = local(sub_index(row), sub_index(col));
    }
  }
  return out;
}

Matrix Circuit::unitary() const {
  Matrix u = Matrix::Identity(1 << n_qubits, 1 << n_qubits);
  for (const auto& g : gates) u = gate_matrix(g, n_qubits) * u;
  return u;
}

Circuit parse_circuit(std::istream& in) {
  Circuit c;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("circuit line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string data;
    const auto colon = line.find(':');
    if (colon != std::string::npos) {
      data = line.substr(colon + 1);
      line.resize(colon);
    }
    std::istringstream ss(line);
    std::string name;
    if (!(ss >> name)) continue;
    if (name == "qubits") {
      if (!(ss >> c.n_qubits) || c.n_qubits < 1 || c.n_qubits > 10) fail("bad qubit count");
      continue;
    }
    if (c.n_qubits == 0) fail("'qubits N' must come first");
    CircuitGate g;
    g.name = name;
    const bool rotation = name == "RX" || name == "RY" || name == "RZ";
    std::vector<double> nums;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(tok, &used));
        if (used != tok.size()) fail("bad token '" + tok + "'");
      } catch (const std::logic_error&) {
        fail("bad token '" + tok + "'");
      }
    }
    if (rotation) {
      if (nums.size() != 2) fail(name + " takes a qubit and an angle");
      g.angle = nums[1];
      nums.pop_back();
    }
    for (double q : nums) {
      if (q != std::floor(q)) fail("qubit index must be an integer");
      g.qubits.push_back(static_cast<int>(q));
    }
    const int arity = expected_arity(name);
    if (arity > 0 && static_cast<int>(g.qubits.size()) != arity) fail("wrong number of qubits");
    if (name == "U") {
      const int k = static_cast<int>(g.qubits.size());
      if (k < 1) fail("U needs at least one qubit");
      std::istringstream ds(data);
      std::vector<double> v;
      double x;
      while (ds >> x) v.push_back(x);
      const int dim = 1 << k;
      if (static_cast<int>(v.size()) != 2 * dim * dim) fail("U needs 2*4^k numbers after ':'");
      g.unitary = Matrix(dim, dim);
      for (int r = 0; r < dim; ++r) {
        for (int col = 0; col < dim; ++col) {
          g.unitary(r, col) = Complex(v[2 * (r * dim + col)], v[2 * (r * dim + col) + 1]);
        }
      }
      if ((g.unitary.adjoint() * g.unitary - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() >
          1e-8) {
        fail("U is not unitary");
      }
    }
    try {
      gate_matrix(g, c.n_qubits);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
    c.gates.push_back(std::move(g));
  }
  if (c.n_qubits == 0) throw ConfigError("circuit is empty");
  return c;
}

Circuit deutsch_jozsa_circuit(int oracle) {
  if (oracle < 1 || oracle > 4) throw ConfigError("Deutsch-Jozsa oracle must be 1..4");
  Circuit c;
  c.n_qubits = 2;
  c.gates = {simple_gate("X", {1}), simple_gate("H", {0}), simple_gate("H", {1})};
  switch (oracle) {
    case 2:
      c.gates.push_back(simple_gate("X", {1}));
      break;
    case 3:
      c.gates.push_back(simple_gate("CX", {0, 1}));
      break;
    case 4:
      c.gates.push_back(simple_gate("X", {0}));
      c.gates.push_back(simple_gate("CX", {0, 1}));
      c.gates.push_back(simple_gate("X", {0}));
      break;
    default:
      break;
  }
  c.gates.push_back(simple_gate("H", {0}));
  return c;
}

}  // namespace msqp
