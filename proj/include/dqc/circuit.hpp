#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dqc {

enum class CircuitKind { GHZ, WState, DJ, QFT };

inline constexpr std::array<CircuitKind, 4> kAllCircuitKinds = {
    CircuitKind::GHZ, CircuitKind::WState, CircuitKind::DJ, CircuitKind::QFT};

const char* to_string(CircuitKind kind);
CircuitKind circuit_kind_from_string(const std::string& name);

// Gate angles never influence scheduling, so parameterized gates carry no
// parameter here.
enum class GateOp { H, X, CX, CP, CRY };

struct Gate {
  GateOp op;
  int q0 = 0;
  int q1 = -1;  // -1 for single-qubit gates
  bool is_two_qubit() const { return q1 >= 0; }
};

/// A circuit job as seen by the scheduler: width (qubits required), the
/// maximum number of partitions it tolerates, and its position in the
/// arrival queue.
struct CircuitSpec {
  int id = 0;
  CircuitKind kind = CircuitKind::GHZ;
  int width = 0;
  int k_max = 4;
  int arrival_index = 0;
};

/// Weighted undirected graph over a circuit's qubits; the weight of an edge
/// is the number of two-qubit gates between that qubit pair.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  explicit InteractionGraph(int width) : width_(width) {}

  int width() const { return width_; }
  void add_interaction(int a, int b, long long weight = 1);
  long long weight(int a, int b) const;
  const std::map<std::pair<int, int>, long long>& edges() const { return edges_; }
  long long total_edge_weight() const;
  std::vector<long long> weighted_degrees() const;

 private:
  int width_ = 0;
  std::map<std::pair<int, int>, long long> edges_;  // key (a < b), weight >= 1
};

/// A circuit as an ordered sequence of layers; gates within one layer touch
/// disjoint qubits and can execute in parallel.
struct LayeredCircuit {
  int width = 0;
  std::vector<std::vector<Gate>> layers;

  int layer_count() const { return static_cast<int>(layers.size()); }
};

struct GeneratorOptions {
  bool qft_final_swaps = true;  // each final swap adds three CX gates
};

/// Gate sequence of one benchmark circuit.
///   GHZ:    H on qubit 0, then a CX chain down the line (path graph).
///   WState: per line segment a controlled rotation followed by a CX back
///           (path graph, every edge weight 2).
///   DJ:     H everywhere, CX from each input onto the last qubit, H on the
///           inputs again (star graph centered on the last qubit).
///   QFT:    H plus one controlled phase per qubit pair (complete graph);
///           optional final swaps add weight 3 on mirrored pairs.
std::vector<Gate> benchmark_gates(CircuitKind kind, int width,
                                  const GeneratorOptions& options = {});

/// Greedy as-soon-as-possible layering: each gate lands in the earliest
/// layer after every earlier gate touching one of its qubits.
LayeredCircuit layers_asap(int width, const std::vector<Gate>& gates);

InteractionGraph interaction_graph(const LayeredCircuit& circ);

struct GeneratedCircuit {
  LayeredCircuit layered;
  InteractionGraph graph;
};

GeneratedCircuit generate_circuit(CircuitKind kind, int width,
                                  const GeneratorOptions& options = {});

/// One gate per line: `H 0`, `CX 0 1`, `CP 0 1`, `CRY 0 1`.
void write_gate_list(std::ostream& out, const std::vector<Gate>& gates);

struct WorkloadParams {
  int total = 36;
  std::map<CircuitKind, double> mix = {{CircuitKind::GHZ, 0.25},
                                       {CircuitKind::WState, 0.25},
                                       {CircuitKind::DJ, 0.25},
                                       {CircuitKind::QFT, 0.25}};
  std::map<CircuitKind, std::pair<int, int>> width_ranges = {
      {CircuitKind::GHZ, {18, 26}},
      {CircuitKind::WState, {18, 26}},
      {CircuitKind::DJ, {14, 22}},
      {CircuitKind::QFT, {10, 18}}};
  int k_max = 4;
  GeneratorOptions generator;
};

/// Width ranges per kind for the two evaluation scenarios: `shift` is added
/// to the base ranges above (0 for the first scenario, 4 for the second).
std::map<CircuitKind, std::pair<int, int>> scenario_ranges(int shift);

/// Draws the per-kind circuit counts from the mix fractions (floor plus
/// round-robin remainder), samples widths uniformly from each kind's range,
/// and shuffles the result into an arrival order. Fully determined by seed.
std::vector<CircuitSpec> sample_workload(const WorkloadParams& params,
                                         std::uint64_t seed);

}  // namespace dqc
