#include "dqc/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dqc {

long long ExecutionProfile::remote_total() const {
  long long sum = 0;
  for (const auto& [pair, count] : remote_by_pair) sum += count;
  return sum;
}

ExecutionProfile classify_layers(const LayeredCircuit& circ, const Partition& partition,
                                 const std::vector<int>& part_to_qpu,
                                 const NetworkModel& net) {
  if (part_to_qpu.size() != partition.parts.size()) {
    throw std::invalid_argument("one QPU per part required");
  }
  std::vector<int> qpu_of(static_cast<std::size_t>(circ.width), -1);
  for (std::size_t p = 0; p < partition.parts.size(); ++p) {
    for (int qubit : partition.parts[p]) {
      if (qubit < 0 || qubit >= circ.width) {
        throw std::invalid_argument("partition qubit outside circuit width");
      }
      qpu_of[static_cast<std::size_t>(qubit)] = part_to_qpu[p];
    }
  }
  for (int q = 0; q < circ.width; ++q) {
    if (qpu_of[static_cast<std::size_t>(q)] < 0) {
      throw std::invalid_argument("partition does not cover qubit " + std::to_string(q));
    }
  }

  ExecutionProfile profile;
  for (const auto& layer : circ.layers) {
    bool has_remote = false;
    for (const Gate& g : layer) {
      if (!g.is_two_qubit()) continue;
      const int j1 = qpu_of[static_cast<std::size_t>(g.q0)];
      const int j2 = qpu_of[static_cast<std::size_t>(g.q1)];
      if (j1 == j2) continue;
      has_remote = true;
      profile.remote_by_pair[{std::min(j1, j2), std::max(j1, j2)}] += 1;
      profile.remote_by_class[net.link(j1, j2).switches] += 1;
    }
    if (!has_remote) ++profile.n_local_layers;
  }
  return profile;
}

double jet(const ExecutionProfile& profile, double t_local,
           const std::map<int, double>& latency_by_class) {
  if (t_local < 0.0) throw std::invalid_argument("t_local must be non-negative");
  double total = profile.n_local_layers * t_local;
  for (const auto& [cls, count] : profile.remote_by_class) {
    auto it = latency_by_class.find(cls);
    if (it == latency_by_class.end()) {
      throw std::invalid_argument("no latency for switch class " + std::to_string(cls));
    }
    total += static_cast<double>(count) * it->second;
  }
  return total;
}

std::vector<int> proportional_part_sizes(int width, const std::vector<int>& capacities) {
  if (capacities.empty()) throw std::invalid_argument("no capacities given");
  const int k = static_cast<int>(capacities.size());
  if (width < k) throw std::invalid_argument("cannot split fewer qubits than parts");
  long long cap_sum = 0;
  for (int c : capacities) {
    if (c < 1) throw std::invalid_argument("capacities must be >= 1");
    cap_sum += c;
  }
  if (cap_sum < width) throw std::invalid_argument("capacities do not cover the width");

  std::vector<int> sizes(static_cast<std::size_t>(k));
  int placed = 0;
  for (int p = 0; p < k; ++p) {
    sizes[static_cast<std::size_t>(p)] =
        static_cast<int>(static_cast<long long>(width) * capacities[static_cast<std::size_t>(p)] / cap_sum);
    placed += sizes[static_cast<std::size_t>(p)];
  }
  // Remainder goes to the largest parts first, respecting capacity.
  std::vector<int> by_capacity(static_cast<std::size_t>(k));
  std::iota(by_capacity.begin(), by_capacity.end(), 0);
  std::stable_sort(by_capacity.begin(), by_capacity.end(), [&capacities](int a, int b) {
    return capacities[static_cast<std::size_t>(a)] > capacities[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 0; placed < width; i = (i + 1) % by_capacity.size()) {
    const int p = by_capacity[i];
    if (sizes[static_cast<std::size_t>(p)] < capacities[static_cast<std::size_t>(p)]) {
      ++sizes[static_cast<std::size_t>(p)];
      ++placed;
    }
  }
  // Flooring can leave a part empty; borrow from the fullest part.
  for (int p = 0; p < k; ++p) {
    while (sizes[static_cast<std::size_t>(p)] == 0) {
      const auto donor = std::max_element(sizes.begin(), sizes.end());
      --*donor;
      ++sizes[static_cast<std::size_t>(p)];
    }
  }
  return sizes;
}

CircuitExecution plan_execution(const LayeredCircuit& circ, const InteractionGraph& graph,
                                const std::vector<int>& qpu_set, const NetworkModel& net,
                                double t_local, std::uint64_t seed) {
  if (qpu_set.empty()) throw std::invalid_argument("empty QPU set");
  std::vector<int> qpus = qpu_set;
  std::sort(qpus.begin(), qpus.end());
  std::vector<int> capacities;
  capacities.reserve(qpus.size());
  for (int j : qpus) capacities.push_back(net.qpu(j).capacity);

  CircuitExecution exec;
  const std::vector<int> sizes = proportional_part_sizes(circ.width, capacities);
  PartitionResult part = kway_partition(graph, sizes, seed);
  exec.partition = std::move(part.partition);
  exec.cut = std::move(part.cut);

  // Match parts to QPUs: try every permutation (k <= 4 in practice), keep the
  // cheapest total remote latency among capacity-feasible matchings.
  const int k = static_cast<int>(qpus.size());
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    bool feasible = true;
    for (int p = 0; p < k && feasible; ++p) {
      const int part_size = static_cast<int>(exec.partition.parts[static_cast<std::size_t>(p)].size());
      feasible = part_size <= capacities[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])];
    }
    if (!feasible) continue;
    double cost = 0.0;
    for (const auto& [part_pair, weight] : exec.cut.pairwise_cut) {
      const int j1 = qpus[static_cast<std::size_t>(perm[static_cast<std::size_t>(part_pair.first)])];
      const int j2 = qpus[static_cast<std::size_t>(perm[static_cast<std::size_t>(part_pair.second)])];
      cost += static_cast<double>(weight) * net.link(j1, j2).latency;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_perm.empty()) {
    throw std::logic_error("no capacity-feasible part-to-QPU matching");
  }

  exec.part_to_qpu.resize(static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) {
    exec.part_to_qpu[static_cast<std::size_t>(p)] = qpus[static_cast<std::size_t>(best_perm[static_cast<std::size_t>(p)])];
  }
  exec.profile = classify_layers(circ, exec.partition, exec.part_to_qpu, net);
  exec.jet = jet(exec.profile, t_local, net.latency_by_class());
  return exec;
}

namespace {

void append_mean(ReportTable& table, const std::string& metric, const std::string& kind,
                 double sum, long long count) {
  if (count > 0) table.rows.push_back({metric, kind, sum / static_cast<double>(count)});
}

}  // namespace

ReportTable aggregate(const ScheduleTrace& trace) {
  ReportTable table;
  std::map<CircuitKind, std::pair<double, long long>> remote_by_kind;
  std::map<CircuitKind, std::pair<double, long long>> jet_by_kind;
  double remote_all = 0.0;
  double jet_all = 0.0;
  double parts_all = 0.0;
  for (const TraceEntry& e : trace.entries) {
    remote_by_kind[e.kind].first += static_cast<double>(e.remote_gates);
    remote_by_kind[e.kind].second += 1;
    jet_by_kind[e.kind].first += e.jet;
    jet_by_kind[e.kind].second += 1;
    remote_all += static_cast<double>(e.remote_gates);
    jet_all += e.jet;
    parts_all += e.parts;
  }
  const long long n = static_cast<long long>(trace.entries.size());
  for (CircuitKind kind : kAllCircuitKinds) {
    auto it = remote_by_kind.find(kind);
    if (it == remote_by_kind.end()) continue;
    append_mean(table, "remote_gates", to_string(kind), it->second.first, it->second.second);
    append_mean(table, "jet", to_string(kind), jet_by_kind[kind].first,
                jet_by_kind[kind].second);
  }
  append_mean(table, "remote_gates", "ALL", remote_all, n);
  append_mean(table, "jet", "ALL", jet_all, n);
  append_mean(table, "partitions", "ALL", parts_all, n);
  table.rows.push_back({"makespan", "ALL", trace.makespan});
  table.rows.push_back({"throughput", "ALL", trace.throughput()});
  return table;
}

}  // namespace dqc
