#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dqc/circuit.hpp"
#include "dqc/klpartition.hpp"
#include "dqc/netgraph.hpp"

namespace dqc {

/// Remote/local structure of one executed circuit: how many layers contain
/// only local gates, and the remote gate counts per QPU pair and per link
/// switch class.
struct ExecutionProfile {
  int n_local_layers = 0;
  std::map<int, long long> remote_by_class;
  std::map<std::pair<int, int>, long long> remote_by_pair;  // (j1 < j2)

  long long remote_total() const;
};

/// Walks the layers: a two-qubit gate is remote when its endpoints sit on
/// different QPUs; a layer without remote gates counts as local.
ExecutionProfile classify_layers(const LayeredCircuit& circ, const Partition& partition,
                                 const std::vector<int>& part_to_qpu,
                                 const NetworkModel& net);

/// Job execution time in decoherence-time units: local layers at t_local each
/// plus every remote gate at its link class latency. Layers that contain a
/// remote gate contribute only their remote gate terms.
double jet(const ExecutionProfile& profile, double t_local,
           const std::map<int, double>& latency_by_class);

/// Part sizes for a circuit split across QPUs of the given capacities:
/// proportional to capacity, floored, remainder to the largest parts, every
/// part capped at its capacity and at least one qubit.
std::vector<int> proportional_part_sizes(int width, const std::vector<int>& capacities);

/// Everything derived from one circuit-to-QPU-set assignment: the partition,
/// the part-to-QPU matching (all k! matchings tried, cheapest kept), the
/// execution profile and the execution time.
struct CircuitExecution {
  Partition partition;
  CutReport cut;
  std::vector<int> part_to_qpu;
  ExecutionProfile profile;
  double jet = 0.0;
};

CircuitExecution plan_execution(const LayeredCircuit& circ, const InteractionGraph& graph,
                                const std::vector<int>& qpu_set, const NetworkModel& net,
                                double t_local, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Run-level reporting
// ---------------------------------------------------------------------------

struct TraceEntry {
  int circuit_id = 0;
  CircuitKind kind = CircuitKind::GHZ;
  int width = 0;
  double start = 0.0;
  double end = 0.0;
  double jet = 0.0;
  std::vector<int> qpu_set;
  int parts = 0;
  long long remote_gates = 0;
  std::map<int, long long> remote_by_class;
  int n_local_layers = 0;
};

struct ScheduleTrace {
  std::vector<TraceEntry> entries;
  double makespan = 0.0;
  int total_circuits = 0;

  double throughput() const { return makespan > 0.0 ? total_circuits / makespan : 0.0; }
};

struct ReportRow {
  std::string metric;
  std::string kind;  // circuit kind or "ALL"
  double value = 0.0;
};

struct ReportTable {
  std::vector<ReportRow> rows;
};

/// Per-kind means of remote gates and execution time, global means of remote
/// gates and partition counts, makespan and throughput.
ReportTable aggregate(const ScheduleTrace& trace);

}  // namespace dqc
