#pragma once

// Fixed-step fourth-order integrator for the spontaneous-emission master
// equation
//
//   drho/dt = sum_i kappa_i ( L_i rho L_i^+  -  1/2 { L_i^+ L_i , rho } ),
//
// with scheduled pulses applied as instantaneous unitary conjugations.
// Serves as the ensemble-average oracle for the trajectory unravelling.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jumpsim/core.hpp"
#include "jumpsim/noise.hpp"

namespace jumpsim {

struct PulseEvent {
  double time = 0.0;
  DenseOperator unitary;
};

namespace detail {

class LindbladGenerator {
 public:
  LindbladGenerator(std::vector<std::pair<double, DenseOperator>> jump_ops) {
    for (auto& [rate, op] : jump_ops) {
      if (rate < 0.0)
        throw std::invalid_argument("lindblad: negative jump rate");
      if (rate == 0.0) continue;
      rates_.push_back(rate);
      ldag_l_.push_back(CMatrix(op.matrix().adjoint() * op.matrix()));
      l_.push_back(op.matrix());
    }
  }

  CMatrix derivative(const CMatrix& rho) const {
    CMatrix d = CMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < l_.size(); ++i) {
      d.noalias() += rates_[i] * (l_[i] * rho * l_[i].adjoint());
      const CMatrix anti = ldag_l_[i] * rho + rho * ldag_l_[i];
      d.noalias() -= (0.5 * rates_[i]) * anti;
    }
    return d;
  }

 private:
  std::vector<double> rates_;
  std::vector<CMatrix> l_;
  std::vector<CMatrix> ldag_l_;
};

inline CMatrix rk4_segment(CMatrix rho, double t0, double t1, double dt_max,
                           const LindbladGenerator& gen) {
  const double len = t1 - t0;
  if (len <= 0.0) return rho;
  const int steps = std::max(1, static_cast<int>(std::ceil(len / dt_max - 1e-12)));
  const double dt = len / steps;
  for (int s = 0; s < steps; ++s) {
    const CMatrix k1 = gen.derivative(rho);
    const CMatrix k2 = gen.derivative(CMatrix(rho + 0.5 * dt * k1));
    const CMatrix k3 = gen.derivative(CMatrix(rho + 0.5 * dt * k2));
    const CMatrix k4 = gen.derivative(CMatrix(rho + dt * k3));
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace detail

// General form: caller supplies the (rate, jump operator) pairs.
inline DensityMatrix lindblad_integrate_ops(
    const DensityMatrix& initial, double duration,
    std::vector<std::pair<double, DenseOperator>> jump_ops,
    std::vector<PulseEvent> pulses, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("lindblad: dt must be > 0");
  double max_rate = 0.0;
  for (const auto& [rate, op] : jump_ops) max_rate = std::max(max_rate, rate);
  if (dt * max_rate > 0.01 + 1e-15)
    throw std::invalid_argument("lindblad: dt * max rate exceeds 0.01");

  detail::LindbladGenerator gen(std::move(jump_ops));
  std::stable_sort(pulses.begin(), pulses.end(),
                   [](const PulseEvent& a, const PulseEvent& b) {
                     return a.time < b.time;
                   });

  CMatrix rho = initial.matrix();
  double t = 0.0;
  const double eps = 1e-12 * std::max(1.0, duration);
  for (const auto& pulse : pulses) {
    if (pulse.time < -eps || pulse.time > duration + eps)
      throw std::invalid_argument("lindblad: pulse time outside [0, duration]");
    rho = detail::rk4_segment(std::move(rho), t, pulse.time, dt, gen);
    const CMatrix& u = pulse.unitary.matrix();
    rho = u * rho * u.adjoint();
    t = std::max(t, pulse.time);
  }
  rho = detail::rk4_segment(std::move(rho), t, duration, dt, gen);
  return DensityMatrix(initial.num_qubits(), std::move(rho));
}

// Spontaneous-emission form: jump operators are sigma_i^- at rate kappa_i.
inline DensityMatrix lindblad_integrate(const DensityMatrix& initial,
                                        double duration,
                                        const NoiseModel& noise,
                                        std::vector<PulseEvent> pulses,
                                        double dt) {
  const int n = initial.num_qubits();
  noise.validate(n);
  std::vector<std::pair<double, DenseOperator>> ops;
  for (int q = 1; q <= n; ++q)
    ops.emplace_back(noise.rates[q - 1], embed_single_qubit(sigma_minus(), q, n));
  return lindblad_integrate_ops(initial, duration, std::move(ops),
                                std::move(pulses), dt);
}

}  // namespace jumpsim
