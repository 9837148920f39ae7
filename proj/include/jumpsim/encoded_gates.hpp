#pragma once

// Encoded-universality toolkit for the jump code: encoded Pauli Hamiltonians
// (Zbar_i = Z_i Z_{n+1}, Xbar_i = X_i), Euler-angle rotations, the
// controlled-phase decomposition, and the conversions that turn XY or
// Heisenberg couplings into an effective X_j X_k Hamiltonian via pulse
// conjugation.
//
// Rotation convention: conjugation is e^{-i phi B} A e^{+i phi B}. With
// spin-1/2 generators (J = sigma/2) this rotates J_x -> J_x cos(phi) +
// J_y sin(phi); with bare Pauli matrices the rotation angle doubles, so
// X -> Y already at phi = pi/4.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumpsim/circuits.hpp"
#include "jumpsim/core.hpp"
#include "jumpsim/decoupling.hpp"
#include "jumpsim/jump_code.hpp"

namespace jumpsim {

enum class TermKind { kSingleZ, kSingleX, kZZ, kXX, kXY, kHeisenberg };

inline std::string term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::kSingleZ: return "z";
    case TermKind::kSingleX: return "x";
    case TermKind::kZZ: return "zz";
    case TermKind::kXX: return "xx";
    case TermKind::kXY: return "xy";
    case TermKind::kHeisenberg: return "heis";
  }
  throw std::logic_error("unreachable");
}

struct HamiltonianTerm {
  TermKind kind = TermKind::kSingleZ;
  int q1 = 0;
  int q2 = 0;            // unused for single-qubit kinds
  double coupling = 1.0; // J_ij or field strength

  static HamiltonianTerm single_z(int i, double c = 1.0) {
    return {TermKind::kSingleZ, i, 0, c};
  }
  static HamiltonianTerm single_x(int i, double c = 1.0) {
    return {TermKind::kSingleX, i, 0, c};
  }
  static HamiltonianTerm zz(int i, int j, double c = 1.0) {
    return {TermKind::kZZ, i, j, c};
  }
  static HamiltonianTerm xx(int i, int j, double c = 1.0) {
    return {TermKind::kXX, i, j, c};
  }
  static HamiltonianTerm xy(int i, int j, double c = 1.0) {
    return {TermKind::kXY, i, j, c};
  }
  static HamiltonianTerm heisenberg(int i, int j, double c = 1.0) {
    return {TermKind::kHeisenberg, i, j, c};
  }

  bool two_qubit() const {
    return kind != TermKind::kSingleZ && kind != TermKind::kSingleX;
  }

  void validate(int num_qubits) const {
    auto in_range = [num_qubits](int q) { return q >= 1 && q <= num_qubits; };
    if (!in_range(q1) || (two_qubit() && !in_range(q2)))
      throw std::invalid_argument("HamiltonianTerm: qubit index out of range");
    if (two_qubit() && q1 == q2)
      throw std::invalid_argument("HamiltonianTerm: qubit indices must differ");
  }
};

inline DenseOperator term_matrix(const HamiltonianTerm& t, int num_qubits) {
  t.validate(num_qubits);
  auto one = [&](const CMatrix& p, int q) {
    return embed_single_qubit(p, q, num_qubits);
  };
  auto two = [&](const CMatrix& p) {
    return one(p, t.q1) * one(p, t.q2);
  };
  DenseOperator base = DenseOperator::zero(num_qubits);
  switch (t.kind) {
    case TermKind::kSingleZ: base = one(pauli_z(), t.q1); break;
    case TermKind::kSingleX: base = one(pauli_x(), t.q1); break;
    case TermKind::kZZ: base = two(pauli_z()); break;
    case TermKind::kXX: base = two(pauli_x()); break;
    case TermKind::kXY: base = two(pauli_x()) + two(pauli_y()); break;
    case TermKind::kHeisenberg:
      base = two(pauli_x()) + two(pauli_y()) + two(pauli_z());
      break;
  }
  return Complex(t.coupling) * base;
}

// One element of a gate sequence: either exp(-i parameter * term) or an
// instantaneous Pauli-product pulse of the term's kind (single X/Z or
// X_i X_j; `parameter` ignored for pulses).
struct SequenceStep {
  HamiltonianTerm term;
  double parameter = 0.0;
  bool pulse = false;
};

struct GateSequence {
  std::vector<SequenceStep> steps;  // steps[0] acts first

  DenseOperator to_unitary(int num_qubits) const {
    DenseOperator u = DenseOperator::identity(num_qubits);
    for (const auto& s : steps) {
      if (s.pulse) {
        u = pulse_matrix(s.term, num_qubits) * u;
      } else {
        u = exp_generator(term_matrix(s.term, num_qubits), s.parameter) * u;
      }
    }
    return u;
  }

  // Same record shape as the circuit gate lists: {gate, qubits, angle}.
  GateList to_gate_list() const {
    GateList out;
    for (const auto& s : steps) {
      GateRecord rec;
      rec.qubits = {s.term.q1};
      if (s.term.two_qubit()) rec.qubits.push_back(s.term.q2);
      if (s.pulse) {
        rec.gate = "pulse_" + term_kind_name(s.term.kind);
        rec.angle = 0.0;
      } else {
        rec.gate = "exp_" + term_kind_name(s.term.kind);
        rec.angle = s.parameter * s.term.coupling;
      }
      out.push_back(std::move(rec));
    }
    return out;
  }

  static DenseOperator pulse_matrix(const HamiltonianTerm& t, int num_qubits) {
    t.validate(num_qubits);
    switch (t.kind) {
      case TermKind::kSingleZ:
        return embed_single_qubit(pauli_z(), t.q1, num_qubits);
      case TermKind::kSingleX:
        return embed_single_qubit(pauli_x(), t.q1, num_qubits);
      case TermKind::kXX:
        return embed_single_qubit(pauli_x(), t.q1, num_qubits) *
               embed_single_qubit(pauli_x(), t.q2, num_qubits);
      default:
        throw std::invalid_argument("pulse must be a Pauli product (x, z, xx)");
    }
  }
};

// --- Encoded Pauli Hamiltonians --------------------------------------------

enum class EncodedAxis { kZ, kX };

// Zbar_i = Z_i Z_{n+1}, Xbar_i = X_i on the n+1 physical qubits.
inline DenseOperator encoded_pauli(int n, EncodedAxis axis, int i) {
  if (i < 1 || i > n)
    throw std::invalid_argument("encoded_pauli: logical index out of range");
  const int num_qubits = n + 1;
  if (axis == EncodedAxis::kX)
    return embed_single_qubit(pauli_x(), i, num_qubits);
  return embed_single_qubit(pauli_z(), i, num_qubits) *
         embed_single_qubit(pauli_z(), num_qubits, num_qubits);
}

// e^{-i phi B} A e^{+i phi B}
inline DenseOperator conjugate_generator(const DenseOperator& a,
                                         const DenseOperator& b, double phi) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("conjugate_generator: dimension mismatch");
  const DenseOperator left = exp_generator(b, phi);
  const DenseOperator right = exp_generator(b, -phi);
  return left * a * right;
}

// --- Euler (ZXZ) decomposition ----------------------------------------------

struct EulerAngles {
  double alpha = 0.0;  // first z rotation
  double theta = 0.0;  // x rotation
  double beta = 0.0;   // last z rotation
};

// Angles with e^{-i omega n.sigma} = e^{-i beta Z} e^{-i theta X} e^{-i alpha Z}.
// Degenerate (diagonal) cases resolve with alpha = 0.
inline EulerAngles euler_angles(const std::array<double, 3>& axis,
                                double omega) {
  const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] +
                               axis[2] * axis[2]);
  if (std::abs(len - 1.0) > 1e-12)
    throw std::invalid_argument("euler_angles: axis must be a unit vector");

  // Target SU(2) matrix.
  const double c = std::cos(omega), s = std::sin(omega);
  const Complex u00(c, -s * axis[2]);
  const Complex u01(-s * axis[1], -s * axis[0]);

  EulerAngles e;
  const double m00 = std::abs(u00), m01 = std::abs(u01);
  e.theta = std::atan2(m01, m00);
  if (m01 <= 1e-15) {  // diagonal: single z rotation
    e.alpha = 0.0;
    e.theta = 0.0;
    e.beta = -std::arg(u00);
    return e;
  }
  if (m00 <= 1e-15) {  // anti-diagonal: theta = pi/2 block
    e.alpha = 0.0;
    e.beta = -(std::arg(u01) + M_PI / 2.0);
    return e;
  }
  // u00 = cos(theta) e^{-i(alpha+beta)}, u01 = -i sin(theta) e^{i(alpha-beta)}
  const double sum = -std::arg(u00);
  const double diff = std::arg(u01) + M_PI / 2.0;
  e.alpha = 0.5 * (sum + diff);
  e.beta = 0.5 * (sum - diff);
  return e;
}

// The same rotation as a three-step sequence over {Z, X} on `qubit`.
inline GateSequence euler_rotation(const std::array<double, 3>& axis,
                                   double omega, int qubit = 1) {
  const EulerAngles e = euler_angles(axis, omega);
  GateSequence seq;
  seq.steps.push_back({HamiltonianTerm::single_z(qubit), e.alpha, false});
  seq.steps.push_back({HamiltonianTerm::single_x(qubit), e.theta, false});
  seq.steps.push_back({HamiltonianTerm::single_z(qubit), e.beta, false});
  return seq;
}

// --- Entangling-gate constructions ------------------------------------------

// CP_ij = e^{-i pi/4 (Z_i + Z_j)} e^{-i 3pi/4 Z_i Z_j} = diag(1,1,1,-1) up to
// a global phase.
inline GateSequence controlled_phase_sequence(int i, int j) {
  if (i == j)
    throw std::invalid_argument("controlled_phase_sequence: i != j required");
  GateSequence seq;
  seq.steps.push_back({HamiltonianTerm::zz(i, j), 3.0 * M_PI / 4.0, false});
  seq.steps.push_back({HamiltonianTerm::single_z(i), M_PI / 4.0, false});
  seq.steps.push_back({HamiltonianTerm::single_z(j), M_PI / 4.0, false});
  return seq;
}

// Case 2: X_iX_j e^{-i theta T_jk} X_iX_j e^{-i theta T_jk} = e^{-i theta X_j X_k}
// with T_jk = (X_jX_k + Y_jY_k)/2.
inline GateSequence xy_to_xx(int i, int j, int k, double theta) {
  if (i == j || j == k || i == k)
    throw std::invalid_argument("xy_to_xx: indices must be distinct");
  const HamiltonianTerm t_jk = HamiltonianTerm::xy(j, k, 0.5);
  const HamiltonianTerm pulse = HamiltonianTerm::xx(i, j);
  GateSequence seq;
  seq.steps.push_back({t_jk, theta, false});
  seq.steps.push_back({pulse, 0.0, true});
  seq.steps.push_back({t_jk, theta, false});
  seq.steps.push_back({pulse, 0.0, true});
  return seq;
}

// Case 3: X_iX_j e^{-i t H_jk} X_iX_j e^{-i t H_jk} = e^{-2 i t J X_j X_k}
// with H_jk = J (XX + YY + ZZ).
inline GateSequence heisenberg_to_xx(int i, int j, int k, double t, double coupling) {
  if (i == j || j == k || i == k)
    throw std::invalid_argument("heisenberg_to_xx: indices must be distinct");
  const HamiltonianTerm h_jk = HamiltonianTerm::heisenberg(j, k, coupling);
  const HamiltonianTerm pulse = HamiltonianTerm::xx(i, j);
  GateSequence seq;
  seq.steps.push_back({h_jk, t, false});
  seq.steps.push_back({pulse, 0.0, true});
  seq.steps.push_back({h_jk, t, false});
  seq.steps.push_back({pulse, 0.0, true});
  return seq;
}

// Case 3 alternative: e^{-i t H} e^{-i pi/2 Z_i} e^{-i t H} e^{-i pi/2 Z_i}
// = e^{-2 i t J Z_i Z_j} up to a global phase.
inline GateSequence heisenberg_to_zz(int i, int j, double t, double coupling) {
  if (i == j)
    throw std::invalid_argument("heisenberg_to_zz: i != j required");
  const HamiltonianTerm h = HamiltonianTerm::heisenberg(i, j, coupling);
  const HamiltonianTerm z_i = HamiltonianTerm::single_z(i);
  GateSequence seq;
  seq.steps.push_back({z_i, M_PI / 2.0, false});
  seq.steps.push_back({h, t, false});
  seq.steps.push_back({z_i, M_PI / 2.0, false});
  seq.steps.push_back({h, t, false});
  return seq;
}

// --- Checkers ----------------------------------------------------------------

// True iff op never maps the orthogonal complement into the code space
// (for unitaries this is equivalent to preserving the code space).
inline bool check_code_preservation(const DenseOperator& op, int n) {
  const CodeSpec code(n);
  if (op.num_qubits() != code.num_physical())
    throw std::invalid_argument("check_code_preservation: wrong qubit count");
  const CMatrix p = code.code_projector().matrix();
  const CMatrix q = CMatrix::Identity(p.rows(), p.cols()) - p;
  return (p * op.matrix() * q).cwiseAbs().maxCoeff() <= 1e-10;
}

// True iff [term, collective X] = 0. Single-body Z terms anticommute with
// the pulse on their qubit; the scheduler must place them after an even
// number of pulses.
inline bool bb_compatibility_check(const HamiltonianTerm& term, int num_qubits) {
  const CMatrix h = term_matrix(term, num_qubits).matrix();
  const CMatrix x = collective_x(num_qubits).matrix();
  return (h * x - x * h).cwiseAbs().maxCoeff() <= 1e-13;
}

// Exact zero-pattern check: no matrix elements between basis states of
// different Hamming weight.
inline bool preserves_hamming_weight(const CMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0.0) &&
          std::popcount(static_cast<std::uint64_t>(r)) !=
              std::popcount(static_cast<std::uint64_t>(c)))
        return false;
  return true;
}

// <y|_L U |x>_L over all codeword pairs: the logical action of a physical op.
inline CMatrix logical_action(const DenseOperator& op, const CodeSpec& code) {
  const Eigen::Index d = code.logical_dim();
  CMatrix m(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    const CVector col = op.matrix() * code.codeword(x).amplitudes();
    for (Eigen::Index y = 0; y < d; ++y)
      m(y, x) = code.codeword(y).amplitudes().dot(col);
  }
  return m;
}

// --- Case compilation ---------------------------------------------------------

enum class ControlCase { kCase1 = 1, kCase2 = 2, kCase3 = 3 };

// Whether a step is directly available from the case's native controls.
// Single X/Z fields are assumed in all three cases; pulses built from X
// fields are always available; the interaction kind must match the case.
inline bool step_realizable(const SequenceStep& s, ControlCase c) {
  if (s.pulse)
    return s.term.kind == TermKind::kSingleX ||
           s.term.kind == TermKind::kSingleZ || s.term.kind == TermKind::kXX;
  switch (s.term.kind) {
    case TermKind::kSingleZ:
    case TermKind::kSingleX:
      return true;
    case TermKind::kXX:
      return c == ControlCase::kCase1;
    case TermKind::kXY:
      return c == ControlCase::kCase2;
    case TermKind::kHeisenberg:
      return c == ControlCase::kCase3;
    case TermKind::kZZ:
      return false;  // never native; built from XX by conjugation
  }
  return false;
}

inline bool sequence_realizable(const GateSequence& seq, ControlCase c) {
  for (const auto& s : seq.steps)
    if (!step_realizable(s, c)) return false;
  return true;
}

namespace detail {

inline int pick_auxiliary(int a, int b, int num_qubits) {
  for (int q = 1; q <= num_qubits; ++q)
    if (q != a && q != b) return q;
  throw std::invalid_argument(
      "case conversion needs a third qubit for the pulse pair");
}

inline void push_rz(GateSequence& seq, int q, double angle) {
  seq.steps.push_back({HamiltonianTerm::single_z(q), angle, false});
}

inline void push_rx(GateSequence& seq, int q, double angle) {
  seq.steps.push_back({HamiltonianTerm::single_x(q), angle, false});
}

// e^{-i theta X_a X_b} from the case's native interaction.
inline void push_xx_rotation(GateSequence& seq, int a, int b, double theta,
                             ControlCase c, int num_qubits) {
  switch (c) {
    case ControlCase::kCase1:
      seq.steps.push_back({HamiltonianTerm::xx(a, b), theta, false});
      return;
    case ControlCase::kCase2: {
      const GateSequence conv =
          xy_to_xx(pick_auxiliary(a, b, num_qubits), a, b, theta);
      seq.steps.insert(seq.steps.end(), conv.steps.begin(), conv.steps.end());
      return;
    }
    case ControlCase::kCase3: {
      const GateSequence conv = heisenberg_to_xx(
          pick_auxiliary(a, b, num_qubits), a, b, 0.5 * theta, 1.0);
      seq.steps.insert(seq.steps.end(), conv.steps.begin(), conv.steps.end());
      return;
    }
  }
}

// e^{-i theta Z_a Z_b}. Cases 1-2 conjugate the XX rotation with pi/4 single
// qubit rotations (X -> Y -> Z on each qubit); Case 3 uses the direct
// Heisenberg route.
inline void push_zz_rotation(GateSequence& seq, int a, int b, double theta,
                             ControlCase c, int num_qubits) {
  if (c == ControlCase::kCase3) {
    const GateSequence conv = heisenberg_to_zz(a, b, 0.5 * theta, 1.0);
    seq.steps.insert(seq.steps.end(), conv.steps.begin(), conv.steps.end());
    return;
  }
  const double q = M_PI / 4.0;
  // V^+ first, then the XX rotation, then V.
  push_rx(seq, b, -q);
  push_rz(seq, b, -q);
  push_rx(seq, a, -q);
  push_rz(seq, a, -q);
  push_xx_rotation(seq, a, b, theta, c, num_qubits);
  push_rz(seq, a, q);
  push_rx(seq, a, q);
  push_rz(seq, b, q);
  push_rx(seq, b, q);
}

// Encoded z rotation on logical qubit i: generator Zbar_i = Z_i Z_{n+1}.
inline void push_encoded_rz(GateSequence& seq, int i, double angle, int n,
                            ControlCase c) {
  push_zz_rotation(seq, i, n + 1, angle, c, n + 1);
}

// Encoded Hadamard on logical qubit i, up to a global phase: rotation by
// pi/2 about (x+z)/sqrt(2), spelled in ZXZ angles over the encoded axes.
inline void push_encoded_hadamard(GateSequence& seq, int i, int n,
                                  ControlCase c) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const EulerAngles e = euler_angles({inv_sqrt2, 0.0, inv_sqrt2}, M_PI / 2.0);
  push_encoded_rz(seq, i, e.alpha, n, c);
  push_rx(seq, i, e.theta);  // Xbar_i = X_i
  push_encoded_rz(seq, i, e.beta, n, c);
}

}  // namespace detail

// Logical CNOT (control i, target j) compiled to the case's native set:
// Hbar_j . CPbar_ij . Hbar_j with every encoded rotation lowered to native
// operations. The result acts as CNOT on the code space up to a global phase.
inline GateSequence logical_cnot_sequence(int i, int j, ControlCase c, int n) {
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw std::invalid_argument("logical_cnot_sequence: bad logical indices");
  if (n + 1 < 3 && c != ControlCase::kCase1)
    throw std::invalid_argument(
        "logical_cnot_sequence: cases 2-3 need at least 3 physical qubits");
  GateSequence seq;
  detail::push_encoded_hadamard(seq, j, n, c);
  // CPbar: Zbar_i Zbar_j = Z_i Z_j, plus the two encoded single-z factors.
  detail::push_zz_rotation(seq, i, j, 3.0 * M_PI / 4.0, c, n + 1);
  detail::push_encoded_rz(seq, i, M_PI / 4.0, n, c);
  detail::push_encoded_rz(seq, j, M_PI / 4.0, n, c);
  detail::push_encoded_hadamard(seq, j, n, c);
  return seq;
}

}  // namespace jumpsim
