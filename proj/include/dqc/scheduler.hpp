#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "dqc/circuit.hpp"
#include "dqc/costmodel.hpp"
#include "dqc/metrics.hpp"
#include "dqc/milp.hpp"
#include "dqc/netgraph.hpp"

namespace dqc {

struct SchedulerParams {
  double beta = 0.85;             // batch capacity fraction
  double alpha = 0.55;            // freed-capacity fraction that opens a cycle
  double gamma_threshold = 5.0;   // fill filter on the k=2 partition cost
  double omega0 = 1.0;
  double omega1 = 1.0;
  double t_local = 5e-4;          // local layer time over decoherence time
  double solver_time_limit_s = 10.0;
  GeneratorOptions generator;
};

/// One queued job with everything derived from its spec.
struct QueuedCircuit {
  CircuitSpec spec;
  LayeredCircuit layered;
  InteractionGraph graph;
  std::vector<double> nu;  // nu[k-1] for k = 1..k_max (batch scheduling only)
  double nu_fill = 0.0;    // k=2 estimate used by the fill filter
};

/// Mutable state of one scheduling run. A QPU whose release time is at or
/// before `now` is idle; at most one circuit occupies a QPU at any time.
struct SchedulerState {
  double now = 0.0;
  std::vector<double> qpu_release;
  std::deque<QueuedCircuit> queue;  // arrival order
};

/// Expected busy time: when the QPU next becomes free. Release times are
/// exact here because execution times are computed at assignment.
double ebt(const SchedulerState& state, int j);

/// Pops circuits from the queue head while their cumulative width stays
/// within beta * c_tot. The first circuit that would cross the budget stays
/// queued, as does everything behind it.
std::vector<QueuedCircuit> select_batch(SchedulerState& state, double beta,
                                        long long c_tot);

/// Advances `now` to the earliest instant at which idle capacity reaches
/// alpha times the total capacity of the whole network.
void trigger_next_cycle(SchedulerState& state, double alpha, const NetworkModel& net);

/// Assigns circuits that the batch optimization left out: QPUs are scanned
/// in increasing expected-busy-time order (capacity and id break ties) and
/// each circuit takes the largest capacities within the shortest feasible
/// prefix; it starts when the last of its QPUs frees up. Chosen QPUs leave
/// the scan list. Throws when a circuit cannot fit the network at all.
void handle_overflow(SchedulerState& state, const std::vector<QueuedCircuit>& overflow,
                     const NetworkModel& net, const SchedulerParams& params,
                     std::uint64_t run_seed, ScheduleTrace& trace);

/// Starts low-cost queued circuits on QPUs idle right now: a circuit passes
/// when its k=2 partition cost estimate is at most gamma_threshold and its
/// width fits the idle capacity; assignment is the single-circuit
/// optimization restricted to idle QPUs.
void fill_qpus(SchedulerState& state, const NetworkModel& net,
               const SchedulerParams& params, std::uint64_t run_seed,
               ScheduleTrace& trace);

/// Dynamic batch scheduling: repeated cycles of batch selection, joint
/// MILP assignment with downward zeta relaxation, overflow handling, idle
/// fill and cycle triggering.
ScheduleTrace run_batch_scheduler(const std::vector<CircuitSpec>& workload,
                                  const NetworkModel& net, const CostModel& model,
                                  const SchedulerParams& params, std::uint64_t seed);

/// Strict arrival-order scheduling; each circuit waits for QPU releases
/// until its single-circuit optimization becomes feasible, then starts
/// immediately.
ScheduleTrace run_single_scheduler(const std::vector<CircuitSpec>& workload,
                                   const NetworkModel& net, const SchedulerParams& params,
                                   std::uint64_t seed);

/// Random allocation baseline: each circuit gets a uniformly random subset
/// of at most k_max QPUs, redrawn (up to 100 times, then a deterministic
/// largest-first pick) while the drawn capacities fall short of the width —
/// a uniform draw over the feasible choices the optimizing schedulers
/// search. The circuit starts when the last QPU of its draw frees up.
ScheduleTrace run_random_baseline(const std::vector<CircuitSpec>& workload,
                                  const NetworkModel& net, const SchedulerParams& params,
                                  std::uint64_t seed);

}  // namespace dqc
