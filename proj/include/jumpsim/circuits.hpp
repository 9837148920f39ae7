#pragma once

// Small named-gate circuit representation. Gate lists are the exchange format
// for preparation/recovery/syndrome circuits and compiled gate sequences;
// application order is list order (first record acts first).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumpsim/core.hpp"

namespace jumpsim {

struct GateRecord {
  std::string gate;         // "h" | "x" | "z" | "cnot" | "rx" | "rz"
  std::vector<int> qubits;  // 1-based; for cnot: {control, target}
  double angle = 0.0;       // used by rx/rz (exp(-i angle P / ... ), see below)
};

using GateList = std::vector<GateRecord>;

inline StateVector apply_x(const StateVector& s, int q) {
  const int n = s.num_qubits();
  CVector amp(s.dim());
  for (Eigen::Index b = 0; b < amp.size(); ++b)
    amp[flip_bit(b, q, n)] = s.amp(b);
  return StateVector(n, std::move(amp));
}

inline StateVector apply_z(const StateVector& s, int q) {
  const int n = s.num_qubits();
  CVector amp = s.amplitudes();
  for (Eigen::Index b = 0; b < amp.size(); ++b)
    if (bit_of(b, q, n)) amp[b] = -amp[b];
  return StateVector(n, std::move(amp));
}

inline StateVector apply_hadamard(const StateVector& s, int q) {
  const int n = s.num_qubits();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CVector amp(s.dim());
  for (Eigen::Index b = 0; b < amp.size(); ++b) {
    const Eigen::Index partner = flip_bit(b, q, n);
    amp[b] = bit_of(b, q, n) == 0
                 ? inv_sqrt2 * (s.amp(b) + s.amp(partner))
                 : inv_sqrt2 * (s.amp(partner) - s.amp(b));
  }
  return StateVector(n, std::move(amp));
}

inline StateVector apply_cnot(const StateVector& s, int control, int target) {
  const int n = s.num_qubits();
  CVector amp(s.dim());
  for (Eigen::Index b = 0; b < amp.size(); ++b) {
    const Eigen::Index dest =
        bit_of(b, control, n) ? flip_bit(b, target, n) : b;
    amp[dest] = s.amp(b);
  }
  return StateVector(n, std::move(amp));
}

// exp(-i angle Z_q)
inline StateVector apply_rz(const StateVector& s, int q, double angle) {
  const int n = s.num_qubits();
  const Complex phase_down = std::polar(1.0, -angle);
  const Complex phase_up = std::polar(1.0, angle);
  CVector amp = s.amplitudes();
  for (Eigen::Index b = 0; b < amp.size(); ++b)
    amp[b] *= bit_of(b, q, n) ? phase_up : phase_down;
  return StateVector(n, std::move(amp));
}

// exp(-i angle X_q)
inline StateVector apply_rx(const StateVector& s, int q, double angle) {
  const int n = s.num_qubits();
  const double c = std::cos(angle);
  const Complex ms(0.0, -std::sin(angle));
  CVector amp(s.dim());
  for (Eigen::Index b = 0; b < amp.size(); ++b)
    amp[b] = c * s.amp(b) + ms * s.amp(flip_bit(b, q, n));
  return StateVector(n, std::move(amp));
}

inline StateVector apply_gate(const StateVector& s, const GateRecord& g) {
  if (g.gate == "x") return apply_x(s, g.qubits.at(0));
  if (g.gate == "z") return apply_z(s, g.qubits.at(0));
  if (g.gate == "h") return apply_hadamard(s, g.qubits.at(0));
  if (g.gate == "cnot") return apply_cnot(s, g.qubits.at(0), g.qubits.at(1));
  if (g.gate == "rz") return apply_rz(s, g.qubits.at(0), g.angle);
  if (g.gate == "rx") return apply_rx(s, g.qubits.at(0), g.angle);
  throw std::invalid_argument("unknown gate: " + g.gate);
}

inline StateVector apply_gate_list(StateVector s, const GateList& gates) {
  for (const auto& g : gates) s = apply_gate(s, g);
  return s;
}

inline DenseOperator gate_matrix(const GateRecord& g, int num_qubits) {
  if (g.gate == "x") return embed_single_qubit(pauli_x(), g.qubits.at(0), num_qubits);
  if (g.gate == "z") return embed_single_qubit(pauli_z(), g.qubits.at(0), num_qubits);
  if (g.gate == "h") return embed_single_qubit(hadamard(), g.qubits.at(0), num_qubits);
  if (g.gate == "cnot") return embed_cnot(g.qubits.at(0), g.qubits.at(1), num_qubits);
  if (g.gate == "rz")
    return exp_generator(embed_single_qubit(pauli_z(), g.qubits.at(0), num_qubits), g.angle);
  if (g.gate == "rx")
    return exp_generator(embed_single_qubit(pauli_x(), g.qubits.at(0), num_qubits), g.angle);
  throw std::invalid_argument("unknown gate: " + g.gate);
}

inline DenseOperator gate_list_matrix(const GateList& gates, int num_qubits) {
  DenseOperator u = DenseOperator::identity(num_qubits);
  for (const auto& g : gates) u = gate_matrix(g, num_qubits) * u;
  return u;
}

}  // namespace jumpsim
