#include "dqc/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dqc/rng.hpp"

namespace dqc {

namespace {

std::deque<QueuedCircuit> make_queue(const std::vector<CircuitSpec>& workload,
                                     const SchedulerParams& params,
                                     const CostModel* model) {
  std::vector<CircuitSpec> specs = workload;
  std::sort(specs.begin(), specs.end(), [](const CircuitSpec& a, const CircuitSpec& b) {
    return a.arrival_index < b.arrival_index;
  });
  std::deque<QueuedCircuit> queue;
  for (const CircuitSpec& spec : specs) {
    QueuedCircuit qc;
    qc.spec = spec;
    GeneratedCircuit gen = generate_circuit(spec.kind, spec.width, params.generator);
    qc.layered = std::move(gen.layered);
    qc.graph = std::move(gen.graph);
    if (model != nullptr) {
      const GraphFeatures features = extract_features(qc.graph);
      qc.nu.assign(static_cast<std::size_t>(spec.k_max), 0.0);
      for (int k = 2; k <= spec.k_max; ++k) {
        qc.nu[static_cast<std::size_t>(k - 1)] = predict_nu(*model, features, k);
      }
      qc.nu_fill = predict_nu(*model, features, 2);
    }
    queue.push_back(std::move(qc));
  }
  return queue;
}

std::vector<MilpQpu> milp_qpus(const NetworkModel& net,
                               const std::vector<bool>& usable) {
  std::vector<MilpQpu> qpus;
  qpus.reserve(static_cast<std::size_t>(net.qpu_count()));
  for (int j = 0; j < net.qpu_count(); ++j) {
    qpus.push_back({j, net.qpu(j).capacity, usable[static_cast<std::size_t>(j)]});
  }
  return qpus;
}

std::vector<std::vector<MilpLink>> milp_links(const NetworkModel& net) {
  const int n = net.qpu_count();
  std::vector<std::vector<MilpLink>> links(static_cast<std::size_t>(n),
                                           std::vector<MilpLink>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const LinkParams& lp = net.link(a, b);
      links[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {lp.latency, lp.fidelity};
      links[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = {lp.latency, lp.fidelity};
    }
  }
  return links;
}

std::vector<bool> idle_mask(const SchedulerState& state) {
  std::vector<bool> idle(state.qpu_release.size());
  for (std::size_t j = 0; j < state.qpu_release.size(); ++j) {
    idle[j] = state.qpu_release[j] <= state.now;
  }
  return idle;
}

/// Largest coverage any set of at most k_max QPUs can reach.
long long best_coverage(const NetworkModel& net, const std::vector<bool>& usable,
                        int k_max) {
  std::vector<int> caps;
  for (int j = 0; j < net.qpu_count(); ++j) {
    if (usable[static_cast<std::size_t>(j)]) caps.push_back(net.qpu(j).capacity);
  }
  std::sort(caps.begin(), caps.end(), std::greater<int>());
  long long sum = 0;
  for (std::size_t i = 0; i < caps.size() && i < static_cast<std::size_t>(k_max); ++i) {
    sum += caps[i];
  }
  return sum;
}

void start_circuit(SchedulerState& state, const QueuedCircuit& qc,
                   const std::vector<int>& qpu_set, double start,
                   const NetworkModel& net, const SchedulerParams& params,
                   std::uint64_t run_seed, ScheduleTrace& trace) {
  const CircuitExecution exec =
      plan_execution(qc.layered, qc.graph, qpu_set, net, params.t_local,
                     derive_seed(run_seed, streams::kPartition,
                                 static_cast<std::uint64_t>(qc.spec.id)));
  TraceEntry entry;
  entry.circuit_id = qc.spec.id;
  entry.kind = qc.spec.kind;
  entry.width = qc.spec.width;
  entry.start = start;
  entry.jet = exec.jet;
  entry.end = start + exec.jet;
  entry.qpu_set = qpu_set;
  std::sort(entry.qpu_set.begin(), entry.qpu_set.end());
  entry.parts = static_cast<int>(qpu_set.size());
  entry.remote_gates = exec.profile.remote_total();
  entry.remote_by_class = exec.profile.remote_by_class;
  entry.n_local_layers = exec.profile.n_local_layers;
  for (int j : entry.qpu_set) {
    state.qpu_release[static_cast<std::size_t>(j)] = entry.end;
  }
  trace.entries.push_back(std::move(entry));
}

void finalize(ScheduleTrace& trace) {
  double makespan = 0.0;
  for (const TraceEntry& e : trace.entries) makespan = std::max(makespan, e.end);
  trace.makespan = makespan;
  trace.total_circuits = static_cast<int>(trace.entries.size());
}

double next_release_after(const SchedulerState& state, double t) {
  double next = std::numeric_limits<double>::infinity();
  for (double r : state.qpu_release) {
    if (r > t) next = std::min(next, r);
  }
  return next;
}

}  // namespace

double ebt(const SchedulerState& state, int j) {
  if (j < 0 || j >= static_cast<int>(state.qpu_release.size())) {
    throw std::out_of_range("unknown QPU id in EBT query");
  }
  return std::max(state.now, state.qpu_release[static_cast<std::size_t>(j)]);
}

std::vector<QueuedCircuit> select_batch(SchedulerState& state, double beta,
                                        long long c_tot) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1)");
  }
  std::vector<QueuedCircuit> batch;
  const double budget = beta * static_cast<double>(c_tot);
  long long used = 0;
  while (!state.queue.empty()) {
    const int width = state.queue.front().spec.width;
    if (static_cast<double>(used + width) > budget) break;
    used += width;
    batch.push_back(std::move(state.queue.front()));
    state.queue.pop_front();
  }
  return batch;
}

void trigger_next_cycle(SchedulerState& state, double alpha, const NetworkModel& net) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  const double target = alpha * static_cast<double>(net.total_capacity());
  auto free_at = [&](double t) {
    long long free = 0;
    for (int j = 0; j < net.qpu_count(); ++j) {
      if (state.qpu_release[static_cast<std::size_t>(j)] <= t) free += net.qpu(j).capacity;
    }
    return static_cast<double>(free);
  };
  double t = state.now;
  while (free_at(t) < target) {
    const double next = next_release_after(state, t);
    if (next == std::numeric_limits<double>::infinity()) break;  // everything free
    t = next;
  }
  state.now = t;
}

void handle_overflow(SchedulerState& state, const std::vector<QueuedCircuit>& overflow,
                     const NetworkModel& net, const SchedulerParams& params,
                     std::uint64_t run_seed, ScheduleTrace& trace) {
  // Scan order: soonest-free first, larger capacity then lower id on ties.
  std::vector<int> scan(static_cast<std::size_t>(net.qpu_count()));
  std::iota(scan.begin(), scan.end(), 0);
  std::sort(scan.begin(), scan.end(), [&](int a, int b) {
    const double ea = ebt(state, a);
    const double eb = ebt(state, b);
    if (ea != eb) return ea < eb;
    const int ca = net.qpu(a).capacity;
    const int cb = net.qpu(b).capacity;
    if (ca != cb) return ca > cb;
    return a < b;
  });

  for (const QueuedCircuit& qc : overflow) {
    std::vector<int> chosen;
    for (std::size_t prefix = 1; prefix <= scan.size() && chosen.empty(); ++prefix) {
      // Largest capacities within the prefix, keeping the scan order on ties.
      std::vector<int> pool(scan.begin(), scan.begin() + static_cast<std::ptrdiff_t>(prefix));
      std::stable_sort(pool.begin(), pool.end(), [&net](int a, int b) {
        return net.qpu(a).capacity > net.qpu(b).capacity;
      });
      long long covered = 0;
      std::vector<int> picked;
      for (int j : pool) {
        if (static_cast<int>(picked.size()) == qc.spec.k_max) break;
        picked.push_back(j);
        covered += net.qpu(j).capacity;
        if (covered >= qc.spec.width) break;
      }
      if (covered >= qc.spec.width) chosen = std::move(picked);
    }
    if (chosen.empty()) {
      throw std::runtime_error("circuit " + std::to_string(qc.spec.id) + " of width " +
                               std::to_string(qc.spec.width) +
                               " cannot fit the network within its partition bound");
    }
    double start = state.now;
    for (int j : chosen) start = std::max(start, state.qpu_release[static_cast<std::size_t>(j)]);
    start_circuit(state, qc, chosen, start, net, params, run_seed, trace);
    std::vector<int> remaining;
    for (int j : scan) {
      if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) remaining.push_back(j);
    }
    scan = std::move(remaining);
  }
}

void fill_qpus(SchedulerState& state, const NetworkModel& net,
               const SchedulerParams& params, std::uint64_t run_seed,
               ScheduleTrace& trace) {
  if (params.gamma_threshold < 0.0) {
    throw std::invalid_argument("gamma_threshold must be non-negative");
  }
  std::vector<bool> idle = idle_mask(state);
  long long avl_capacity = 0;
  for (int j = 0; j < net.qpu_count(); ++j) {
    if (idle[static_cast<std::size_t>(j)]) avl_capacity += net.qpu(j).capacity;
  }
  if (avl_capacity <= 0) return;

  for (auto it = state.queue.begin(); it != state.queue.end();) {
    if (it->nu_fill > params.gamma_threshold || it->spec.width > avl_capacity) {
      ++it;
      continue;
    }
    SingleProblem sp;
    sp.circuit_id = it->spec.id;
    sp.width = it->spec.width;
    sp.k_max = it->spec.k_max;
    sp.qpus = milp_qpus(net, idle);
    sp.links = milp_links(net);
    sp.omega0 = params.omega0;
    sp.omega1 = params.omega1;
    const SolveResult result = solve(build_single_milp(sp), params.solver_time_limit_s);
    if (result.status == SolveStatus::Infeasible) {
      // Idle capacity is too fragmented for this circuit's partition bound.
      ++it;
      continue;
    }
    const std::vector<int>& qpu_set = result.plan.circuits.front().qpu_ids;
    start_circuit(state, *it, qpu_set, state.now, net, params, run_seed, trace);
    for (int j : qpu_set) {
      idle[static_cast<std::size_t>(j)] = false;
      avl_capacity -= net.qpu(j).capacity;
    }
    it = state.queue.erase(it);
  }
}

ScheduleTrace run_batch_scheduler(const std::vector<CircuitSpec>& workload,
                                  const NetworkModel& net, const CostModel& model,
                                  const SchedulerParams& params, std::uint64_t seed) {
  SchedulerState state;
  state.qpu_release.assign(static_cast<std::size_t>(net.qpu_count()), 0.0);
  state.queue = make_queue(workload, params, &model);
  ScheduleTrace trace;

  while (!state.queue.empty()) {
    const std::vector<bool> available = idle_mask(state);
    long long c_tot = 0;
    for (int j = 0; j < net.qpu_count(); ++j) {
      if (available[static_cast<std::size_t>(j)]) c_tot += net.qpu(j).capacity;
    }

    std::vector<QueuedCircuit> batch = select_batch(state, params.beta, c_tot);
    std::vector<QueuedCircuit> unassigned;
    if (batch.empty()) {
      // Even the head circuit exceeds the budget; route it through the
      // overflow path so the run always progresses.
      unassigned.push_back(std::move(state.queue.front()));
      state.queue.pop_front();
    } else {
      BatchProblem problem;
      problem.qpus = milp_qpus(net, available);
      problem.links = milp_links(net);
      problem.omega0 = params.omega0;
      problem.omega1 = params.omega1;
      for (const QueuedCircuit& qc : batch) {
        problem.circuits.push_back(
            {qc.spec.id, qc.spec.width, qc.spec.k_max, qc.nu});
      }
      const AssignmentPlan plan =
          solve_batch_with_zeta_relaxation(problem, params.solver_time_limit_s);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const CircuitAssignment& ca = plan.circuits[i];
        if (ca.assigned) {
          start_circuit(state, batch[i], ca.qpu_ids, state.now, net, params, seed, trace);
        } else {
          unassigned.push_back(std::move(batch[i]));
        }
      }
    }
    if (!unassigned.empty()) {
      handle_overflow(state, unassigned, net, params, seed, trace);
    }
    fill_qpus(state, net, params, seed, trace);
    if (!state.queue.empty()) {
      trigger_next_cycle(state, params.alpha, net);
    }
  }
  finalize(trace);
  return trace;
}

ScheduleTrace run_single_scheduler(const std::vector<CircuitSpec>& workload,
                                   const NetworkModel& net, const SchedulerParams& params,
                                   std::uint64_t seed) {
  SchedulerState state;
  state.qpu_release.assign(static_cast<std::size_t>(net.qpu_count()), 0.0);
  state.queue = make_queue(workload, params, nullptr);
  ScheduleTrace trace;

  const std::vector<bool> all_usable(static_cast<std::size_t>(net.qpu_count()), true);
  while (!state.queue.empty()) {
    const QueuedCircuit qc = std::move(state.queue.front());
    state.queue.pop_front();
    if (best_coverage(net, all_usable, qc.spec.k_max) < qc.spec.width) {
      throw std::runtime_error("circuit " + std::to_string(qc.spec.id) + " of width " +
                               std::to_string(qc.spec.width) +
                               " cannot fit the network within its partition bound");
    }
    for (;;) {
      SingleProblem sp;
      sp.circuit_id = qc.spec.id;
      sp.width = qc.spec.width;
      sp.k_max = qc.spec.k_max;
      sp.qpus = milp_qpus(net, idle_mask(state));
      sp.links = milp_links(net);
      sp.omega0 = params.omega0;
      sp.omega1 = params.omega1;
      const SolveResult result = solve(build_single_milp(sp), params.solver_time_limit_s);
      if (result.status != SolveStatus::Infeasible) {
        start_circuit(state, qc, result.plan.circuits.front().qpu_ids, state.now, net,
                      params, seed, trace);
        break;
      }
      const double next = next_release_after(state, state.now);
      if (next == std::numeric_limits<double>::infinity()) {
        throw std::logic_error("no QPU release to wait for");
      }
      state.now = next;
    }
  }
  finalize(trace);
  return trace;
}

ScheduleTrace run_random_baseline(const std::vector<CircuitSpec>& workload,
                                  const NetworkModel& net, const SchedulerParams& params,
                                  std::uint64_t seed) {
  SchedulerState state;
  state.qpu_release.assign(static_cast<std::size_t>(net.qpu_count()), 0.0);
  state.queue = make_queue(workload, params, nullptr);
  ScheduleTrace trace;
  Rng rng(derive_seed(seed, streams::kBaseline));

  std::vector<int> all_ids(static_cast<std::size_t>(net.qpu_count()));
  std::iota(all_ids.begin(), all_ids.end(), 0);
  const std::vector<bool> all_usable(static_cast<std::size_t>(net.qpu_count()), true);

  // Subset sizes weighted by the number of subsets of that size, so the draw
  // is uniform over all subsets of at most k_max QPUs; rejection of draws
  // that miss the width renormalizes to a uniform draw over the feasible
  // choice set the optimizing schedulers search.
  auto size_weights = [&all_ids](int k_cap) {
    std::vector<double> cumulative(static_cast<std::size_t>(k_cap) + 1, 0.0);
    for (int k = 1; k <= k_cap; ++k) {
      double combos = 1.0;
      for (int i = 0; i < k; ++i) {
        combos *= static_cast<double>(all_ids.size() - i) / (i + 1);
      }
      cumulative[static_cast<std::size_t>(k)] =
          cumulative[static_cast<std::size_t>(k - 1)] + combos;
    }
    return cumulative;
  };

  while (!state.queue.empty()) {
    const QueuedCircuit qc = std::move(state.queue.front());
    state.queue.pop_front();
    if (best_coverage(net, all_usable, qc.spec.k_max) < qc.spec.width) {
      throw std::runtime_error("circuit " + std::to_string(qc.spec.id) + " of width " +
                               std::to_string(qc.spec.width) +
                               " cannot fit the network within its partition bound");
    }
    const int k_cap = std::min(qc.spec.k_max, net.qpu_count());
    const std::vector<double> cumulative = size_weights(k_cap);
    std::vector<int> picked;
    for (int attempt = 0; attempt < 100 && picked.empty(); ++attempt) {
      const double rsize = rng.uniform_real() * cumulative.back();
      int k = k_cap;
      for (int c = 1; c <= k_cap; ++c) {
        if (rsize < cumulative[static_cast<std::size_t>(c)]) {
          k = c;
          break;
        }
      }
      std::vector<int> pool = all_ids;
      std::vector<int> draw;
      long long covered = 0;
      for (int i = 0; i < k; ++i) {
        const std::size_t pick = static_cast<std::size_t>(rng.bounded(pool.size()));
        const int j = pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        draw.push_back(j);
        covered += net.qpu(j).capacity;
      }
      if (covered >= qc.spec.width) picked = std::move(draw);
    }
    if (picked.empty()) {
      // Deterministic fallback: largest capacities first.
      std::vector<int> by_cap = all_ids;
      std::sort(by_cap.begin(), by_cap.end(), [&net](int a, int b) {
        const int ca = net.qpu(a).capacity;
        const int cb = net.qpu(b).capacity;
        if (ca != cb) return ca > cb;
        return a < b;
      });
      long long covered = 0;
      for (int j : by_cap) {
        picked.push_back(j);
        covered += net.qpu(j).capacity;
        if (covered >= qc.spec.width) break;
      }
    }
    // The circuit runs as soon as the last QPU of its draw frees up.
    double start = state.now;
    for (int j : picked) start = std::max(start, state.qpu_release[static_cast<std::size_t>(j)]);
    start_circuit(state, qc, picked, start, net, params, seed, trace);
  }
  finalize(trace);
  return trace;
}

}  // namespace dqc
