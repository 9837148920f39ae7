#pragma once

// Monte-Carlo wavefunction unravelling of spontaneous emission: exact
// no-jump damping between sampling steps, first-order jump sampling with a
// capped per-step probability, scheduled instantaneous pulses and gates,
// detector imperfections, and (optionally) detected-jump recovery.
//
// Determinism contract: a trajectory is a pure function of (inputs, seed);
// per-trajectory seeds derive from (base_seed, index); ensemble reductions
// run in a fixed order regardless of worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "jumpsim/conditional.hpp"
#include "jumpsim/core.hpp"
#include "jumpsim/decoupling.hpp"
#include "jumpsim/jump_code.hpp"
#include "jumpsim/noise.hpp"
#include "jumpsim/rng.hpp"

namespace jumpsim {

inline constexpr double kJumpProbabilityCap = 0.1;

struct TimedUnitary {
  double time = 0.0;
  DenseOperator op;
  std::string label;
};

struct ProtocolSchedule {
  std::optional<PulseSchedule> bb;       // collective X at every period/2
  bool qecc_enabled = false;             // recover reported jumps
  bool parity_check_enabled = false;     // periodic stabilizer measurement
  double observation_period = 0.0;       // recovery granularity; 0 = immediate
  double parity_interval = 0.0;          // 0 = no periodic checks
  std::vector<TimedUnitary> gates;       // instantaneous unitaries
  double max_step = 0.0;                 // sampling step override; 0 = auto
  std::shared_ptr<const CodeSpec> code;  // required for qecc / parity

  void validate(int num_qubits, double duration) const {
    if (bb && !(bb->period > 0.0))
      throw std::invalid_argument("schedule: BB period must be > 0");
    if (observation_period < 0.0 || parity_interval < 0.0)
      throw std::invalid_argument("schedule: negative interval");
    if ((qecc_enabled || parity_check_enabled) && !code)
      throw std::invalid_argument("schedule: qecc/parity need a CodeSpec");
    if (code && code->num_physical() != num_qubits)
      throw std::invalid_argument("schedule: CodeSpec size mismatch");
    for (const auto& g : gates) {
      if (g.op.num_qubits() != num_qubits)
        throw std::invalid_argument("schedule: gate qubit count mismatch");
      if (g.time < 0.0 || g.time > duration)
        throw std::invalid_argument("schedule: gate time outside [0, duration]");
    }
  }
};

// sigma_i^- |state>, renormalized.
inline StateVector apply_jump(const StateVector& state, int qubit) {
  const int n = state.num_qubits();
  CVector amp = CVector::Zero(state.dim());
  for (Eigen::Index b = 0; b < state.dim(); ++b)
    if (bit_of(b, qubit, n)) amp[flip_bit(b, qubit, n)] = state.amp(b);
  const double nrm = amp.norm();
  if (nrm == 0.0)
    throw std::runtime_error("apply_jump: qubit has no excited amplitude");
  return StateVector(n, amp / nrm);
}

namespace detail {

inline std::optional<int> report_jump(int true_qubit, int num_qubits,
                                      const DetectorModel& det, Rng& rng) {
  const double v = rng.uniform();
  if (v < det.p_undetected) return std::nullopt;
  if (v < det.p_undetected + det.p_misidentify && num_qubits > 1) {
    // Uniform over the other qubits.
    int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_qubits - 1)));
    return pick + 1 + (pick + 1 >= true_qubit ? 1 : 0);
  }
  return true_qubit;
}

}  // namespace detail

// One sampling step: with probability kappa_i <n_i> dt a jump fires on qubit
// i (state collapses and the event is reported through the detector model);
// otherwise the exact no-jump damping is applied and the state renormalized.
inline std::pair<StateVector, std::optional<EmissionEvent>>
sample_and_apply_jump(const StateVector& state, double dt,
                      const NoiseModel& noise, Rng& rng) {
  const int n = state.num_qubits();
  noise.validate(n);
  if (!(dt > 0.0))
    throw std::invalid_argument("sample_and_apply_jump: dt must be > 0");

  double total = 0.0;
  std::vector<double> dp(static_cast<std::size_t>(n), 0.0);
  for (int q = 1; q <= n; ++q) {
    dp[q - 1] = noise.rates[q - 1] * state.excitation_probability(q) * dt;
    total += dp[q - 1];
  }
  if (total > kJumpProbabilityCap)
    throw std::invalid_argument(
        "sample_and_apply_jump: step jump probability " + std::to_string(total) +
        " exceeds cap " + std::to_string(kJumpProbabilityCap));

  const double u = rng.uniform();
  if (u < total) {
    double acc = 0.0;
    int qubit = n;
    for (int q = 1; q <= n; ++q) {
      acc += dp[q - 1];
      if (u < acc) {
        qubit = q;
        break;
      }
    }
    EmissionEvent ev;
    ev.true_qubit = qubit;
    ev.reported_qubit = detail::report_jump(qubit, n, noise.detector, rng);
    return {apply_jump(state, qubit), ev};
  }
  return {conditional_step(state, dt, noise).normalized(), std::nullopt};
}

namespace detail {

enum class ActionKind { kPulse = 0, kGate = 1, kRecovery = 2, kParity = 3 };

struct Instant {
  double time = 0.0;
  bool pulse = false;
  std::vector<int> gate_indices;
  bool recovery_point = false;
  bool parity_check = false;
};

inline std::vector<Instant> build_instants(const ProtocolSchedule& sched,
                                           double duration) {
  const double eps = 1e-9 * std::max(1.0, duration);
  std::vector<Instant> instants;
  auto at_time = [&](double t) -> Instant& {
    for (auto& ins : instants)
      if (std::abs(ins.time - t) <= eps) return ins;
    instants.push_back({});
    instants.back().time = t;
    return instants.back();
  };

  if (sched.bb && sched.bb->enabled)
    for (double t : bb_pulse_times(sched.bb->period, duration))
      at_time(t).pulse = true;
  for (std::size_t g = 0; g < sched.gates.size(); ++g)
    at_time(sched.gates[g].time).gate_indices.push_back(static_cast<int>(g));
  if (sched.qecc_enabled && sched.observation_period > 0.0)
    for (int k = 1; k * sched.observation_period <= duration + eps; ++k)
      at_time(k * sched.observation_period).recovery_point = true;
  if (sched.parity_check_enabled && sched.parity_interval > 0.0)
    for (int k = 1; k * sched.parity_interval <= duration + eps; ++k)
      at_time(k * sched.parity_interval).parity_check = true;
  // Final flush point.
  Instant& last = at_time(duration);
  if (sched.qecc_enabled) last.recovery_point = true;

  std::sort(instants.begin(), instants.end(),
            [](const Instant& a, const Instant& b) { return a.time < b.time; });
  return instants;
}

struct PendingRecovery {
  double due = 0.0;
  int qubit = 0;
};

}  // namespace detail

// One unravelled history. Interleaves exact no-jump damping, jump sampling,
// scheduled pulses/gates, and recovery. Action order at a coinciding
// instant: BB pulse, program gates, due recoveries, parity check; sampling
// resumes afterwards (a pulse that coincides with a sampling time precedes
// the following interval's jump draw).
inline TrajectoryRecord run_trajectory(const StateVector& initial,
                                       const ProtocolSchedule& schedule,
                                       double duration, const NoiseModel& noise,
                                       std::uint64_t seed) {
  const int n = initial.num_qubits();
  noise.validate(n);
  schedule.validate(n, duration);
  if (!(duration >= 0.0))
    throw std::invalid_argument("run_trajectory: negative duration");
  if (!initial.is_normalized(1e-9))
    throw std::invalid_argument("run_trajectory: initial state not normalized");

  Rng rng(seed);
  StateVector state = initial;
  std::vector<EmissionEvent> events;
  std::vector<AppliedRecovery> recoveries;
  std::vector<detail::PendingRecovery> pending;
  int restarts = 0;

  const double eps = 1e-9 * std::max(1.0, duration);
  const double total_rate = noise.total_rate();
  double dt_auto = total_rate > 0.0 ? 0.01 / total_rate : duration;
  if (schedule.max_step > 0.0) dt_auto = std::min(dt_auto, schedule.max_step);

  const bool immediate_recovery =
      schedule.qecc_enabled && schedule.observation_period <= 0.0;

  auto fire_recovery = [&](double t, int qubit) {
    state = schedule.code->recover(state, qubit);
    recoveries.push_back({t, qubit});
  };

  auto fire_pending = [&](double t) {
    for (const auto& p : pending) fire_recovery(t, p.qubit);
    pending.clear();
  };

  auto handle_event = [&](const EmissionEvent& ev) {
    events.push_back(ev);
    if (!schedule.qecc_enabled || !ev.reported_qubit) return;
    if (immediate_recovery) {
      fire_recovery(ev.time, *ev.reported_qubit);
      return;
    }
    const double tau = schedule.observation_period;
    const double due = std::ceil(ev.time / tau - 1e-9) * tau;
    pending.push_back({std::min(due, duration), *ev.reported_qubit});
  };

  auto integrate_to = [&](double from, double to) {
    const double len = to - from;
    if (len <= eps) return;
    const int steps =
        std::max(1, static_cast<int>(std::ceil(len / dt_auto - 1e-12)));
    const double dt = len / steps;
    for (int s = 0; s < steps; ++s) {
      auto [next, ev] = sample_and_apply_jump(state, dt, noise, rng);
      state = std::move(next);
      if (ev) {
        ev->time = from + (s + 1) * dt;
        handle_event(*ev);
      }
    }
  };

  double t = 0.0;
  for (const auto& instant : detail::build_instants(schedule, duration)) {
    integrate_to(t, instant.time);
    t = std::max(t, instant.time);
    if (instant.pulse) state = apply_collective_x(state);
    for (int g : instant.gate_indices)
      state = apply(schedule.gates[static_cast<std::size_t>(g)].op, state);
    if (instant.recovery_point || !pending.empty()) {
      // Fire everything that has come due (report order).
      std::vector<detail::PendingRecovery> still;
      for (const auto& p : pending) {
        if (p.due <= instant.time + eps)
          fire_recovery(instant.time, p.qubit);
        else
          still.push_back(p);
      }
      pending = std::move(still);
    }
    if (instant.parity_check) {
      auto [outcome, post] =
          schedule.code->measure_stabilizer(state, rng.sub_seed());
      state = std::move(post);
      if (outcome == -1) {
        if (!pending.empty())
          fire_pending(instant.time);  // recovery may still be applied
        else
          ++restarts;  // undetected error: flag for restart, ancilla re-prepped
      }
    }
  }
  integrate_to(t, duration);

  return TrajectoryRecord{seed, std::move(events), state.normalized(),
                          std::move(recoveries), restarts};
}

// --- Ensemble driver ---------------------------------------------------------

struct EventTotals {
  std::int64_t jumps = 0;
  std::int64_t undetected = 0;
  std::int64_t misidentified = 0;
  std::int64_t recoveries = 0;
  std::int64_t restarts = 0;
  std::int64_t windows = 0;              // observation windows (tau > 0 only)
  std::int64_t double_jump_windows = 0;  // windows holding >= 2 true jumps

  EventTotals& operator+=(const EventTotals& o) {
    jumps += o.jumps;
    undetected += o.undetected;
    misidentified += o.misidentified;
    recoveries += o.recoveries;
    restarts += o.restarts;
    windows += o.windows;
    double_jump_windows += o.double_jump_windows;
    return *this;
  }
};

inline EventTotals summarize_events(const TrajectoryRecord& rec,
                                    double duration,
                                    double observation_period) {
  EventTotals t;
  t.jumps = static_cast<std::int64_t>(rec.events.size());
  for (const auto& ev : rec.events) {
    if (!ev.reported_qubit)
      ++t.undetected;
    else if (*ev.reported_qubit != ev.true_qubit)
      ++t.misidentified;
  }
  t.recoveries = static_cast<std::int64_t>(rec.applied_recoveries.size());
  t.restarts = rec.restarts;
  if (observation_period > 0.0 && duration > 0.0) {
    const double eps = 1e-9 * std::max(1.0, duration);
    const auto num_windows = static_cast<std::int64_t>(
        std::ceil(duration / observation_period - eps));
    std::vector<int> counts(static_cast<std::size_t>(num_windows), 0);
    for (const auto& ev : rec.events) {
      auto w = static_cast<std::int64_t>(
          std::ceil(ev.time / observation_period - eps)) - 1;
      w = std::clamp<std::int64_t>(w, 0, num_windows - 1);
      ++counts[static_cast<std::size_t>(w)];
    }
    t.windows = num_windows;
    for (int c : counts)
      if (c >= 2) ++t.double_jump_windows;
  }
  return t;
}

struct EnsembleOptions {
  bool accumulate_density = false;
  int num_threads = 0;  // 0 = hardware concurrency
  std::function<double(const TrajectoryRecord&)> score;  // optional
};

struct EnsembleResult {
  std::optional<DensityMatrix> density;
  std::vector<double> scores;  // empty unless a scorer was given
  EventTotals totals;
};

inline EnsembleResult run_ensemble(const StateVector& initial,
                                   const ProtocolSchedule& schedule,
                                   double duration, const NoiseModel& noise,
                                   int num_trajectories,
                                   std::uint64_t base_seed,
                                   const EnsembleOptions& options = {}) {
  if (num_trajectories < 1)
    throw std::invalid_argument("run_ensemble: need at least one trajectory");

  // Fixed block size: the reduction order (within blocks, then across blocks
  // in index order) never depends on the worker count.
  constexpr int kBlock = 64;
  const int num_blocks = (num_trajectories + kBlock - 1) / kBlock;
  const Eigen::Index d = initial.dim();

  std::vector<CMatrix> block_density;
  if (options.accumulate_density)
    block_density.assign(static_cast<std::size_t>(num_blocks),
                         CMatrix::Zero(d, d));
  std::vector<double> scores;
  if (options.score) scores.assign(static_cast<std::size_t>(num_trajectories), 0.0);
  std::vector<EventTotals> block_totals(static_cast<std::size_t>(num_blocks));

  std::atomic<int> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const int blk = next_block.fetch_add(1);
      if (blk >= num_blocks) return;
      const int lo = blk * kBlock;
      const int hi = std::min(num_trajectories, lo + kBlock);
      for (int idx = lo; idx < hi; ++idx) {
        const TrajectoryRecord rec =
            run_trajectory(initial, schedule, duration, noise,
                           derive_seed(base_seed, static_cast<std::uint64_t>(idx)));
        if (options.accumulate_density)
          block_density[static_cast<std::size_t>(blk)].noalias() +=
              rec.final_state.amplitudes() *
              rec.final_state.amplitudes().adjoint();
        if (options.score) scores[static_cast<std::size_t>(idx)] = options.score(rec);
        block_totals[static_cast<std::size_t>(blk)] +=
            summarize_events(rec, duration, schedule.observation_period);
      }
    }
  };

  int threads = options.num_threads > 0
                    ? options.num_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, num_blocks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleResult result;
  for (const auto& bt : block_totals) result.totals += bt;
  if (options.accumulate_density) {
    CMatrix rho = CMatrix::Zero(d, d);
    for (const auto& part : block_density) rho += part;  // fixed block order
    rho /= static_cast<double>(num_trajectories);
    result.density = DensityMatrix(initial.num_qubits(), std::move(rho));
  }
  result.scores = std::move(scores);
  return result;
}

inline DensityMatrix ensemble_density(const StateVector& initial,
                                      const ProtocolSchedule& schedule,
                                      double duration, const NoiseModel& noise,
                                      int num_trajectories,
                                      std::uint64_t base_seed,
                                      int num_threads = 0) {
  EnsembleOptions opt;
  opt.accumulate_density = true;
  opt.num_threads = num_threads;
  return *run_ensemble(initial, schedule, duration, noise, num_trajectories,
                       base_seed, opt)
              .density;
}

}  // namespace jumpsim
