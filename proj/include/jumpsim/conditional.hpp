#pragma once

// No-jump (conditional) evolution of spontaneous emission. The conditional
// Hamiltonian is diagonal, so the half-step propagator is applied exactly
// rather than through a series approximation.

#include <cmath>
#include <stdexcept>

#include "jumpsim/core.hpp"
#include "jumpsim/noise.hpp"

namespace jumpsim {

// Sum of kappa_i over the qubits excited in basis state `b`.
inline double excited_rate_sum(Eigen::Index b, const NoiseModel& noise,
                               int num_qubits) {
  double sum = 0.0;
  for (int q = 1; q <= num_qubits; ++q)
    if (bit_of(b, q, num_qubits)) sum += noise.rates[q - 1];
  return sum;
}

// H_c = -(i/2) sum_i kappa_i sigma_i^+ sigma_i^-  (non-Hermitian, diagonal).
inline DenseOperator conditional_hamiltonian(const NoiseModel& noise,
                                             int num_qubits) {
  noise.validate(num_qubits);
  const Eigen::Index d = dim_for(num_qubits);
  CMatrix h = CMatrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b)
    h(b, b) = Complex(0.0, -0.5 * excited_rate_sum(b, noise, num_qubits));
  return DenseOperator(num_qubits, std::move(h));
}

// exp(-i dt H_c) |state>: each amplitude damped by
// exp(-(dt/2) * sum of excited-qubit rates). Exact; no renormalization.
inline StateVector conditional_step(const StateVector& state, double dt,
                                    const NoiseModel& noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("conditional_step: dt must be > 0");
  const int n = state.num_qubits();
  noise.validate(n);
  CVector amp = state.amplitudes();
  for (Eigen::Index b = 0; b < amp.size(); ++b) {
    const double rate = excited_rate_sum(b, noise, n);
    if (rate != 0.0) amp[b] *= std::exp(-0.5 * dt * rate);
  }
  return StateVector(n, std::move(amp));
}

}  // namespace jumpsim
