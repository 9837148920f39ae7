#pragma once

// Dense complex linear algebra for few-qubit systems: state vectors,
// operators, density matrices, tensor embedding, matrix exponentials.
//
// Basis convention used throughout: qubit 1 is the most significant bit
// of the basis index, so |x1 x2 ... xN> has index x1*2^(N-1) + ... + xN.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpsim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 12;  // dense storage only
inline constexpr double kUnitaryTol = 1e-10;

inline Eigen::Index dim_for(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw std::invalid_argument("num_qubits out of range [1," +
                                std::to_string(kMaxQubits) + "]: " +
                                std::to_string(num_qubits));
  return Eigen::Index{1} << num_qubits;
}

// Bit of `qubit` (1-based, MSB first) in basis index `basis`.
inline int bit_of(Eigen::Index basis, int qubit, int num_qubits) {
  return static_cast<int>((basis >> (num_qubits - qubit)) & 1);
}

inline Eigen::Index flip_bit(Eigen::Index basis, int qubit, int num_qubits) {
  return basis ^ (Eigen::Index{1} << (num_qubits - qubit));
}

inline Eigen::Index set_bit(Eigen::Index basis, int qubit, int num_qubits,
                            int value) {
  const Eigen::Index mask = Eigen::Index{1} << (num_qubits - qubit);
  return value ? (basis | mask) : (basis & ~mask);
}

class StateVector {
 public:
  StateVector(int num_qubits, CVector amplitudes)
      : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
    if (amp_.size() != dim_for(num_qubits_))
      throw std::invalid_argument("StateVector: amplitude length " +
                                  std::to_string(amp_.size()) +
                                  " != 2^" + std::to_string(num_qubits_));
  }

  // |basis_index> computational basis state.
  static StateVector basis_state(int num_qubits, Eigen::Index basis_index) {
    CVector v = CVector::Zero(dim_for(num_qubits));
    if (basis_index < 0 || basis_index >= v.size())
      throw std::invalid_argument("basis index out of range");
    v[basis_index] = 1.0;
    return StateVector(num_qubits, std::move(v));
  }

  static StateVector ground(int num_qubits) {
    return basis_state(num_qubits, 0);
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  Complex amp(Eigen::Index i) const { return amp_[i]; }

  double norm() const { return amp_.norm(); }
  double squared_norm() const { return amp_.squaredNorm(); }

  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm() - 1.0) <= tol;
  }

  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::runtime_error("cannot normalize the zero vector");
    return StateVector(num_qubits_, amp_ / n);
  }

  // Probability that `qubit` reads 1.
  double excitation_probability(int qubit) const {
    double p = 0.0;
    for (Eigen::Index b = 0; b < amp_.size(); ++b)
      if (bit_of(b, qubit, num_qubits_)) p += std::norm(amp_[b]);
    return p;
  }

 private:
  int num_qubits_;
  CVector amp_;
};

class DenseOperator {
 public:
  DenseOperator(int num_qubits, CMatrix entries)
      : num_qubits_(num_qubits), m_(std::move(entries)) {
    const Eigen::Index d = dim_for(num_qubits_);
    if (m_.rows() != d || m_.cols() != d)
      throw std::invalid_argument("DenseOperator: matrix is not 2^n x 2^n");
  }

  static DenseOperator identity(int num_qubits) {
    const Eigen::Index d = dim_for(num_qubits);
    return DenseOperator(num_qubits, CMatrix::Identity(d, d));
  }

  static DenseOperator zero(int num_qubits) {
    const Eigen::Index d = dim_for(num_qubits);
    return DenseOperator(num_qubits, CMatrix::Zero(d, d));
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

  DenseOperator adjoint() const {
    return DenseOperator(num_qubits_, m_.adjoint());
  }

  bool is_unitary(double tol = kUnitaryTol) const {
    const CMatrix err = m_.adjoint() * m_ -
                        CMatrix::Identity(m_.rows(), m_.cols());
    return err.cwiseAbs().maxCoeff() <= tol;
  }

  friend DenseOperator operator*(const DenseOperator& a,
                                 const DenseOperator& b) {
    if (a.num_qubits_ != b.num_qubits_)
      throw std::invalid_argument("operator product: qubit count mismatch");
    return DenseOperator(a.num_qubits_, a.m_ * b.m_);
  }

  friend DenseOperator operator*(Complex scale, const DenseOperator& a) {
    return DenseOperator(a.num_qubits_, scale * a.m_);
  }

  friend DenseOperator operator+(const DenseOperator& a,
                                 const DenseOperator& b) {
    if (a.num_qubits_ != b.num_qubits_)
      throw std::invalid_argument("operator sum: qubit count mismatch");
    return DenseOperator(a.num_qubits_, a.m_ + b.m_);
  }

  friend DenseOperator operator-(const DenseOperator& a,
                                 const DenseOperator& b) {
    if (a.num_qubits_ != b.num_qubits_)
      throw std::invalid_argument("operator difference: qubit count mismatch");
    return DenseOperator(a.num_qubits_, a.m_ - b.m_);
  }

 private:
  int num_qubits_;
  CMatrix m_;
};

class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, CMatrix entries)
      : num_qubits_(num_qubits), m_(std::move(entries)) {
    const Eigen::Index d = dim_for(num_qubits_);
    if (m_.rows() != d || m_.cols() != d)
      throw std::invalid_argument("DensityMatrix: matrix is not 2^n x 2^n");
  }

  static DensityMatrix from_state(const StateVector& psi) {
    return DensityMatrix(psi.num_qubits(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

  double trace_real() const { return m_.trace().real(); }

  // Checks trace 1, Hermiticity, and positivity within the stated tolerances.
  bool is_valid(double trace_tol = 1e-10, double herm_tol = 1e-10,
                double eig_tol = 1e-9) const {
    if (std::abs(m_.trace() - Complex(1.0)) > trace_tol) return false;
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        CMatrix(0.5 * (m_ + m_.adjoint())), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eig_tol;
  }

 private:
  int num_qubits_;
  CMatrix m_;
};

// --- Pauli matrices and ladder operators -----------------------------------

inline CMatrix pauli_i() { return CMatrix::Identity(2, 2); }

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline CMatrix hadamard() {
  CMatrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

// |0><1|, the spontaneous-emission error generator on one qubit.
inline CMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline CMatrix sigma_plus() { return CMatrix(sigma_minus().adjoint()); }

// |1><1|, the excitation number operator on one qubit.
inline CMatrix number_op() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

// --- Tensor embedding -------------------------------------------------------

// I (x) ... (x) op (x) ... (x) I with `op` at 1-based position `qubit_index`.
inline DenseOperator embed_single_qubit(const CMatrix& op, int qubit_index,
                                        int num_qubits) {
  if (op.rows() != 2 || op.cols() != 2)
    throw std::invalid_argument("embed_single_qubit: op must be 2x2");
  if (qubit_index < 1 || qubit_index > num_qubits)
    throw std::invalid_argument("embed_single_qubit: qubit index " +
                                std::to_string(qubit_index) +
                                " out of range 1.." +
                                std::to_string(num_qubits));
  const Eigen::Index d = dim_for(num_qubits);
  CMatrix full = CMatrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int cb = bit_of(col, qubit_index, num_qubits);
    for (int rb = 0; rb < 2; ++rb) {
      const Complex v = op(rb, cb);
      if (v == Complex(0.0)) continue;
      full(set_bit(col, qubit_index, num_qubits, rb), col) += v;
    }
  }
  return DenseOperator(num_qubits, std::move(full));
}

// 4x4 `op` acting on (qubit_a, qubit_b); row/col index of `op` is
// 2*bit_a + bit_b.
inline DenseOperator embed_two_qubit(const CMatrix& op, int qubit_a,
                                     int qubit_b, int num_qubits) {
  if (op.rows() != 4 || op.cols() != 4)
    throw std::invalid_argument("embed_two_qubit: op must be 4x4");
  if (qubit_a == qubit_b)
    throw std::invalid_argument("embed_two_qubit: qubits must be distinct");
  for (int q : {qubit_a, qubit_b})
    if (q < 1 || q > num_qubits)
      throw std::invalid_argument("embed_two_qubit: qubit index out of range");
  const Eigen::Index d = dim_for(num_qubits);
  CMatrix full = CMatrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int cc = 2 * bit_of(col, qubit_a, num_qubits) +
                   bit_of(col, qubit_b, num_qubits);
    for (int rr = 0; rr < 4; ++rr) {
      const Complex v = op(rr, cc);
      if (v == Complex(0.0)) continue;
      Eigen::Index row = set_bit(col, qubit_a, num_qubits, rr >> 1);
      row = set_bit(row, qubit_b, num_qubits, rr & 1);
      full(row, col) += v;
    }
  }
  return DenseOperator(num_qubits, std::move(full));
}

// |c,t> -> |c, t xor c>; index = 2*control_bit + target_bit.
inline CMatrix cnot_matrix() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(3, 2) = 1.0;
  m(2, 3) = 1.0;
  return m;
}

// CNOT with `control` as control and `target` as target.
inline DenseOperator embed_cnot(int control, int target, int num_qubits) {
  return embed_two_qubit(cnot_matrix(), control, target, num_qubits);
}

// --- Core operations --------------------------------------------------------

// op |state>, without renormalization (conditional evolution shrinks norms).
inline StateVector apply(const DenseOperator& op, const StateVector& state) {
  if (op.num_qubits() != state.num_qubits())
    throw std::invalid_argument("apply: qubit count mismatch");
  return StateVector(state.num_qubits(), op.matrix() * state.amplitudes());
}

// <a|b>, conjugating the left argument.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("inner_product: qubit count mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

// Tr(rho^2), clamped into [1/2^n, 1] for reporting.
inline double purity(const DensityMatrix& rho) {
  // Tr(rho^2) equals the squared Frobenius norm for Hermitian rho.
  const double p = (rho.matrix() * rho.matrix()).trace().real();
  const double lo = 1.0 / static_cast<double>(rho.dim());
  return std::min(std::max(p, lo), 1.0);
}

namespace detail {

// Pade [6/6] approximant with scaling and squaring.
inline CMatrix expm_pade(const CMatrix& a) {
  static constexpr double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                 25200.0,    1512.0,    56.0,      1.0};
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  }
  const CMatrix as = a / std::pow(2.0, squarings);
  const CMatrix a2 = as * as;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix u = as * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

inline bool is_normal(const CMatrix& a, double rel_tol = 1e-12) {
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return comm.cwiseAbs().maxCoeff() <= rel_tol * scale * scale;
}

}  // namespace detail

// Matrix exponential. Normal matrices (detected via ||A A* - A* A||) go
// through a Schur decomposition, where T is diagonal; everything else uses
// Pade with scaling and squaring.
inline CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("expm: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("expm: non-finite entries");
  if (a.rows() == 1) return (CMatrix(1, 1) << std::exp(a(0, 0))).finished();

  if (detail::is_normal(a)) {
    Eigen::ComplexSchur<CMatrix> schur(a);
    const CMatrix& t = schur.matrixT();
    const CMatrix& q = schur.matrixU();
    // For a normal matrix T is diagonal up to roundoff.
    CMatrix offdiag = t;
    offdiag.diagonal().setZero();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (offdiag.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
      CVector expd = t.diagonal().array().exp();
      return q * expd.asDiagonal() * q.adjoint();
    }
  }
  return detail::expm_pade(a);
}

inline DenseOperator expm(const DenseOperator& op) {
  return DenseOperator(op.num_qubits(), expm(op.matrix()));
}

// exp(-i theta G) for a (usually Hermitian) generator.
inline DenseOperator exp_generator(const DenseOperator& generator,
                                   double theta) {
  return DenseOperator(generator.num_qubits(),
                       expm(CMatrix(Complex(0.0, -theta) *
                                    generator.matrix())));
}

// Global-phase-insensitive max-norm distance: min_phi ||U - e^{i phi} V||_max,
// with phi aligned on the largest-magnitude entry of V.
inline double phase_insensitive_distance(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_insensitive_distance: shape mismatch");
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  const Complex urc = u(r, c);
  const Complex vrc = v(r, c);
  if (std::abs(vrc) == 0.0 || std::abs(urc) == 0.0)
    return (u - v).cwiseAbs().maxCoeff();
  const Complex ratio = urc / vrc;
  const Complex phase = ratio / std::abs(ratio);
  return (u - phase * v).cwiseAbs().maxCoeff();
}

inline double phase_insensitive_distance(const DenseOperator& u,
                                         const DenseOperator& v) {
  return phase_insensitive_distance(u.matrix(), v.matrix());
}

// 0.5 * ||a - b||_1 over Hermitian matrices.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  const CMatrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (diff + diff.adjoint())),
                                            Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace jumpsim
