#pragma once

// The (n+1)-physical-qubit detected-jump code: n logical qubits live in
// codewords (|x,0> + |xbar,1>)/sqrt(2), the +1 eigenspace of the stabilizer
// X (x) X (x) ... (x) X. A spontaneous emission on a known position i maps
// codewords onto mutually orthogonal states and is undone by a fixed circuit
// of one Hadamard, n CNOTs and n bit flips.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jumpsim/circuits.hpp"
#include "jumpsim/core.hpp"
#include "jumpsim/rng.hpp"

namespace jumpsim {

// Direct codeword expansion: (|x,0> + |xbar,1>)/sqrt(2). `logical_index`
// encodes the bit string x with x1 as its most significant bit.
inline StateVector codeword_state(int n, Eigen::Index logical_index) {
  if (n < 1) throw std::invalid_argument("codeword_state: n must be >= 1");
  const Eigen::Index logical_dim = Eigen::Index{1} << n;
  if (logical_index < 0 || logical_index >= logical_dim)
    throw std::invalid_argument("codeword_state: bad logical index");
  const Eigen::Index mask = logical_dim - 1;
  CVector amp = CVector::Zero(logical_dim * 2);
  const double w = 1.0 / std::sqrt(2.0);
  amp[(logical_index << 1) | 0] = w;
  amp[((~logical_index & mask) << 1) | 1] = w;
  return StateVector(n + 1, std::move(amp));
}

inline StateVector codeword_state(int n, const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != n)
    throw std::invalid_argument("codeword_state: bit string length != n");
  Eigen::Index idx = 0;
  for (int b : bits) {
    if (b != 0 && b != 1)
      throw std::invalid_argument("codeword_state: bits must be 0/1");
    idx = (idx << 1) | b;
  }
  return codeword_state(n, idx);
}

struct QeccConditionReport {
  int n = 0;
  long num_checked = 0;
  double max_deviation = 0.0;           // against delta_xy/2 or 0
  double max_deviation_same_bit = 0.0;  // pairs with y_i == x_i
  double max_deviation_diff_bit = 0.0;  // pairs with y_i != x_i
};

class CodeSpec {
 public:
  explicit CodeSpec(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("CodeSpec: n must be >= 1");
    const Eigen::Index logical_dim = Eigen::Index{1} << n;
    codewords_.reserve(static_cast<std::size_t>(logical_dim));
    for (Eigen::Index x = 0; x < logical_dim; ++x)
      codewords_.push_back(codeword_state(n, x));
  }

  int n() const { return n_; }
  int num_physical() const { return n_ + 1; }
  Eigen::Index logical_dim() const { return Eigen::Index{1} << n_; }

  const StateVector& codeword(Eigen::Index logical_index) const {
    return codewords_.at(static_cast<std::size_t>(logical_index));
  }

  // (x)_{j=1..n+1} X_j
  DenseOperator stabilizer() const {
    DenseOperator s = embed_single_qubit(pauli_x(), 1, num_physical());
    for (int q = 2; q <= num_physical(); ++q)
      s = embed_single_qubit(pauli_x(), q, num_physical()) * s;
    return s;
  }

  DenseOperator code_projector() const {
    const Eigen::Index d = dim_for(num_physical());
    CMatrix p = CMatrix::Zero(d, d);
    for (const auto& w : codewords_)
      p += w.amplitudes() * w.amplitudes().adjoint();
    return DenseOperator(num_physical(), std::move(p));
  }

  // Hadamard on qubit n+1, then a collective CNOT from qubit n+1 to qubits
  // 1..n. Applied to (logical (x) |0>) this produces the codeword expansion;
  // applied again to a code state it moves the logical content onto the
  // first n qubits (the circuit is its own inverse up to the Hadamard).
  GateList preparation_circuit() const {
    GateList gates;
    gates.push_back({"h", {num_physical()}, 0.0});
    for (int k = 1; k <= n_; ++k)
      gates.push_back({"cnot", {num_physical(), k}, 0.0});
    return gates;
  }

  GateList collective_cnot() const {
    GateList gates;
    for (int k = 1; k <= n_; ++k)
      gates.push_back({"cnot", {num_physical(), k}, 0.0});
    return gates;
  }

  // Encode through the preparation circuit (tested elsewhere to agree with
  // the direct codeword expansion).
  StateVector encode(const StateVector& logical) const {
    if (logical.num_qubits() != n_)
      throw std::invalid_argument("encode: logical state has wrong qubit count");
    CVector phys = CVector::Zero(logical.dim() * 2);
    for (Eigen::Index x = 0; x < logical.dim(); ++x)
      phys[x << 1] = logical.amp(x);
    return apply_gate_list(StateVector(num_physical(), std::move(phys)),
                           preparation_circuit());
  }

  // Collective CNOT, then Born probabilities of the first n qubits.
  std::vector<double> readout(const StateVector& physical) const {
    check_physical(physical);
    const StateVector rotated =
        apply_gate_list(physical, collective_cnot());
    std::vector<double> probs(static_cast<std::size_t>(logical_dim()), 0.0);
    for (Eigen::Index b = 0; b < rotated.dim(); ++b)
      probs[static_cast<std::size_t>(b >> 1)] += std::norm(rotated.amp(b));
    return probs;
  }

  // Recovery after a detected jump at `position`: H_i, then CNOT(i->k) for
  // all k != i, then X_k for all k != i.
  GateList recovery_circuit(int position) const {
    if (position < 1 || position > num_physical())
      throw std::invalid_argument("recovery_circuit: position out of range");
    GateList gates;
    gates.push_back({"h", {position}, 0.0});
    for (int k = 1; k <= num_physical(); ++k)
      if (k != position) gates.push_back({"cnot", {position, k}, 0.0});
    for (int k = 1; k <= num_physical(); ++k)
      if (k != position) gates.push_back({"x", {k}, 0.0});
    return gates;
  }

  StateVector recover(const StateVector& state_after_jump, int position) const {
    check_physical(state_after_jump);
    return apply_gate_list(state_after_jump, recovery_circuit(position));
  }

  // Projective measurement of the stabilizer through an ancilla prepared in
  // |0>, entangled by H_i CNOT(i->ancilla) H_i for every data qubit, and read
  // out in the computational basis. Returns (+1 or -1, post-measurement data
  // state). The ancilla is discarded (it is re-prepared on every call).
  std::pair<int, StateVector> measure_stabilizer(const StateVector& state,
                                                 std::uint64_t ancilla_seed) const {
    check_physical(state);
    const int ext_qubits = num_physical() + 1;
    const int ancilla = ext_qubits;
    CVector ext = CVector::Zero(state.dim() * 2);
    for (Eigen::Index b = 0; b < state.dim(); ++b) ext[b << 1] = state.amp(b);
    StateVector work(ext_qubits, std::move(ext));
    for (int i = 1; i <= num_physical(); ++i) {
      work = apply_hadamard(work, i);
      work = apply_cnot(work, i, ancilla);
      work = apply_hadamard(work, i);
    }
    double p_minus = 0.0;  // ancilla reads 1
    for (Eigen::Index b = 1; b < work.dim(); b += 2)
      p_minus += std::norm(work.amp(b));
    Rng rng(ancilla_seed);
    const bool minus = rng.uniform() < p_minus;
    const double p_branch = minus ? p_minus : 1.0 - p_minus;
    const int keep_bit = minus ? 1 : 0;
    CVector data = CVector::Zero(state.dim());
    const double scale = 1.0 / std::sqrt(p_branch);
    for (Eigen::Index b = 0; b < state.dim(); ++b)
      data[b] = work.amp((b << 1) | keep_bit) * scale;
    return {minus ? -1 : +1, StateVector(num_physical(), std::move(data))};
  }

  // |<encode(reference)|state>|^2
  double logical_fidelity(const StateVector& state,
                          const StateVector& logical_reference) const {
    check_physical(state);
    return std::norm(inner_product(encode(logical_reference), state));
  }

 private:
  void check_physical(const StateVector& s) const {
    if (s.num_qubits() != num_physical())
      throw std::invalid_argument("state has wrong physical qubit count");
  }

  int n_;
  std::vector<StateVector> codewords_;
};

// Exhaustively evaluates <y|_L sigma_i^+ sigma_i^- |x>_L for all codeword
// pairs and all positions, against delta_xy/2 (when y_i = x_i) or 0.
inline QeccConditionReport verify_qecc_condition(int n) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("verify_qecc_condition: n must be in 1..6");
  const CodeSpec code(n);
  const int num_qubits = code.num_physical();
  QeccConditionReport report;
  report.n = n;
  for (int i = 1; i <= num_qubits; ++i) {
    for (Eigen::Index x = 0; x < code.logical_dim(); ++x) {
      const CVector& xa = code.codeword(x).amplitudes();
      for (Eigen::Index y = 0; y < code.logical_dim(); ++y) {
        const CVector& ya = code.codeword(y).amplitudes();
        Complex m = 0.0;
        for (Eigen::Index b = 0; b < xa.size(); ++b)
          if (bit_of(b, i, num_qubits)) m += std::conj(ya[b]) * xa[b];
        // Bit i of the codeword label, with position n+1 reading 0.
        const int xi = i <= n ? bit_of(x, i, n) : 0;
        const int yi = i <= n ? bit_of(y, i, n) : 0;
        const double expected = (yi == xi && x == y) ? 0.5 : 0.0;
        const double dev = std::abs(m - Complex(expected));
        report.max_deviation = std::max(report.max_deviation, dev);
        if (yi == xi)
          report.max_deviation_same_bit =
              std::max(report.max_deviation_same_bit, dev);
        else
          report.max_deviation_diff_bit =
              std::max(report.max_deviation_diff_bit, dev);
        ++report.num_checked;
      }
    }
  }
  return report;
}

}  // namespace jumpsim
