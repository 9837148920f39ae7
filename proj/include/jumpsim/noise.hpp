#pragma once

// Spontaneous-emission noise description: per-qubit decay rates plus the
// detector imperfections of the jump-readout apparatus.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumpsim/core.hpp"

namespace jumpsim {

struct DetectorModel {
  double p_undetected = 0.0;    // emission seen by nobody
  double p_misidentify = 0.0;   // emission attributed to a uniformly random
                                // other qubit

  void validate() const {
    if (p_undetected < 0.0 || p_undetected > 1.0)
      throw std::invalid_argument("detector.p_undetected not in [0,1]");
    if (p_misidentify < 0.0 || p_misidentify > 1.0)
      throw std::invalid_argument("detector.p_misidentify not in [0,1]");
    if (p_undetected + p_misidentify > 1.0)
      throw std::invalid_argument(
          "detector probabilities sum exceeds 1");
  }
};

struct NoiseModel {
  std::vector<double> rates;  // kappa_i >= 0, one per qubit, units 1/time
  DetectorModel detector;

  static NoiseModel uniform(int num_qubits, double rate,
                            DetectorModel det = {}) {
    NoiseModel m;
    m.rates.assign(static_cast<std::size_t>(num_qubits), rate);
    m.detector = det;
    return m;
  }

  int num_qubits() const { return static_cast<int>(rates.size()); }

  double total_rate() const {
    return std::accumulate(rates.begin(), rates.end(), 0.0);
  }

  double max_rate() const {
    double m = 0.0;
    for (double k : rates) m = std::max(m, k);
    return m;
  }

  void validate(int expected_qubits) const {
    if (static_cast<int>(rates.size()) != expected_qubits)
      throw std::invalid_argument(
          "noise rates length " + std::to_string(rates.size()) +
          " != qubit count " + std::to_string(expected_qubits));
    for (double k : rates)
      if (!(k >= 0.0))
        throw std::invalid_argument("noise rates must be >= 0");
    detector.validate();
  }
};

struct EmissionEvent {
  double time = 0.0;
  int true_qubit = 0;                 // 1-based
  std::optional<int> reported_qubit;  // nullopt when undetected
};

struct AppliedRecovery {
  double time = 0.0;
  int qubit = 0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<EmissionEvent> events;          // sorted by time
  StateVector final_state;                    // normalized
  std::vector<AppliedRecovery> applied_recoveries;
  int restarts = 0;  // parity checks that fired with no reported position
};

}  // namespace jumpsim
