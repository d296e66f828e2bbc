#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "dqc/circuit.hpp"

using namespace dqc;

namespace {

// Pair counts straight from a gate list, bypassing the layering.
std::map<std::pair<int, int>, long long> direct_pair_counts(const std::vector<Gate>& gates) {
  std::map<std::pair<int, int>, long long> counts;
  for (const Gate& g : gates) {
    if (!g.is_two_qubit()) continue;
    counts[{std::min(g.q0, g.q1), std::max(g.q0, g.q1)}] += 1;
  }
  return counts;
}

}  // namespace

TEST_CASE("GHZ is a unit-weight path") {
  const GeneratedCircuit ghz = generate_circuit(CircuitKind::GHZ, 4);
  CHECK(ghz.graph.edges().size() == 3);
  CHECK(ghz.graph.weight(0, 1) == 1);
  CHECK(ghz.graph.weight(1, 2) == 1);
  CHECK(ghz.graph.weight(2, 3) == 1);
  CHECK(ghz.layered.layer_count() == 4);  // H, then three chained CX

  const GeneratedCircuit small = generate_circuit(CircuitKind::GHZ, 3);
  CHECK(small.graph.weight(0, 1) == 1);
  CHECK(small.graph.weight(1, 2) == 1);
  CHECK(small.graph.weight(0, 2) == 0);
}

TEST_CASE("QFT without swaps is a complete unit-weight graph") {
  GeneratorOptions options;
  options.qft_final_swaps = false;
  const GeneratedCircuit qft = generate_circuit(CircuitKind::QFT, 4, options);
  CHECK(qft.graph.edges().size() == 6);
  CHECK(qft.graph.total_edge_weight() == 6);
  for (const auto& [edge, w] : qft.graph.edges()) CHECK(w == 1);
}

TEST_CASE("QFT final swaps add weight 3 to mirrored pairs") {
  const GeneratedCircuit qft = generate_circuit(CircuitKind::QFT, 4);
  CHECK(qft.graph.weight(0, 3) == 4);
  CHECK(qft.graph.weight(1, 2) == 4);
  CHECK(qft.graph.weight(0, 1) == 1);
  CHECK(qft.graph.weight(2, 3) == 1);
}

TEST_CASE("DJ is a star on the last qubit") {
  const GeneratedCircuit dj2 = generate_circuit(CircuitKind::DJ, 2);
  CHECK(dj2.graph.edges().size() == 1);
  CHECK(dj2.graph.weight(0, 1) == 1);

  const GeneratedCircuit dj5 = generate_circuit(CircuitKind::DJ, 5);
  CHECK(dj5.graph.edges().size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(dj5.graph.weight(i, 4) == 1);
}

TEST_CASE("W-state is a weight-2 path") {
  const GeneratedCircuit w = generate_circuit(CircuitKind::WState, 3);
  CHECK(w.graph.weight(0, 1) == 2);
  CHECK(w.graph.weight(1, 2) == 2);
  CHECK(w.graph.total_edge_weight() == 4);
}

TEST_CASE("as-soon-as-possible layering") {
  const std::vector<Gate> gates = {{GateOp::H, 0}, {GateOp::H, 1}, {GateOp::CX, 0, 1}};
  const LayeredCircuit circ = layers_asap(2, gates);
  REQUIRE(circ.layer_count() == 2);
  CHECK(circ.layers[0].size() == 2);
  CHECK(circ.layers[1].size() == 1);

  CHECK(layers_asap(3, {}).layer_count() == 0);
}

TEST_CASE("interaction graph ignores single-qubit gates") {
  const LayeredCircuit circ = layers_asap(3, {{GateOp::H, 0}, {GateOp::H, 1}, {GateOp::X, 2}});
  CHECK(interaction_graph(circ).edges().empty());
}

TEST_CASE("layering round-trips the pair counts for every generator") {
  for (CircuitKind kind : kAllCircuitKinds) {
    for (int w = 2; w <= 30; ++w) {
      const std::vector<Gate> gates = benchmark_gates(kind, w);
      const LayeredCircuit circ = layers_asap(w, gates);
      const InteractionGraph graph = interaction_graph(circ);
      const auto direct = direct_pair_counts(gates);
      REQUIRE(graph.edges().size() == direct.size());
      for (const auto& [edge, count] : direct) {
        CHECK(graph.weight(edge.first, edge.second) == count);
      }
    }
  }
}

TEST_CASE("no qubit appears twice within a layer") {
  for (CircuitKind kind : kAllCircuitKinds) {
    for (int w = 2; w <= 30; ++w) {
      const GeneratedCircuit gen = generate_circuit(kind, w);
      for (const auto& layer : gen.layered.layers) {
        std::set<int> seen;
        for (const Gate& g : layer) {
          CHECK(seen.insert(g.q0).second);
          if (g.is_two_qubit()) CHECK(seen.insert(g.q1).second);
        }
      }
    }
  }
}

TEST_CASE("total edge weights per family") {
  GeneratorOptions no_swaps;
  no_swaps.qft_final_swaps = false;
  for (int w = 2; w <= 30; ++w) {
    CHECK(generate_circuit(CircuitKind::QFT, w, no_swaps).graph.total_edge_weight() ==
          static_cast<long long>(w) * (w - 1) / 2);
    CHECK(generate_circuit(CircuitKind::GHZ, w).graph.total_edge_weight() == w - 1);
    CHECK(generate_circuit(CircuitKind::WState, w).graph.total_edge_weight() == 2 * (w - 1));
    CHECK(generate_circuit(CircuitKind::DJ, w).graph.total_edge_weight() == w - 1);
  }
}

TEST_CASE("generator rejects width below 2") {
  CHECK_THROWS_AS(benchmark_gates(CircuitKind::GHZ, 1), std::invalid_argument);
}

TEST_CASE("gate list dump format") {
  std::ostringstream out;
  write_gate_list(out, {{GateOp::H, 0}, {GateOp::CX, 0, 1}, {GateOp::CP, 2, 1},
                        {GateOp::CRY, 1, 2}});
  CHECK(out.str() == "H 0\nCX 0 1\nCP 2 1\nCRY 1 2\n");
}

TEST_CASE("workload sampling: counts, ranges, arrival order") {
  WorkloadParams params;
  params.total = 36;
  const std::vector<CircuitSpec> specs = sample_workload(params, 7);
  REQUIRE(specs.size() == 36);

  std::map<CircuitKind, int> counts;
  std::set<int> arrivals;
  for (const CircuitSpec& s : specs) {
    ++counts[s.kind];
    arrivals.insert(s.arrival_index);
    const auto [lo, hi] = params.width_ranges.at(s.kind);
    CHECK(s.width >= lo);
    CHECK(s.width <= hi);
    CHECK(s.k_max == 4);
  }
  for (CircuitKind kind : kAllCircuitKinds) CHECK(counts[kind] == 9);
  CHECK(arrivals.size() == 36);

  // Same seed reproduces, different seed deviates.
  const std::vector<CircuitSpec> again = sample_workload(params, 7);
  REQUIRE(again.size() == specs.size());
  bool same = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    same = same && specs[i].kind == again[i].kind && specs[i].width == again[i].width;
  }
  CHECK(same);
  const std::vector<CircuitSpec> other = sample_workload(params, 8);
  bool identical = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    identical = identical && specs[i].kind == other[i].kind && specs[i].width == other[i].width;
  }
  CHECK_FALSE(identical);
}

TEST_CASE("workload remainder is assigned round-robin") {
  WorkloadParams params;
  params.total = 10;
  const std::vector<CircuitSpec> specs = sample_workload(params, 3);
  std::map<CircuitKind, int> counts;
  for (const CircuitSpec& s : specs) ++counts[s.kind];
  CHECK(counts[CircuitKind::GHZ] == 3);
  CHECK(counts[CircuitKind::WState] == 3);
  CHECK(counts[CircuitKind::DJ] == 2);
  CHECK(counts[CircuitKind::QFT] == 2);
}

TEST_CASE("scenario ranges shift") {
  const auto sc2 = scenario_ranges(4);
  CHECK(sc2.at(CircuitKind::GHZ) == std::pair<int, int>{22, 30});
  CHECK(sc2.at(CircuitKind::DJ) == std::pair<int, int>{18, 26});
  CHECK(sc2.at(CircuitKind::QFT) == std::pair<int, int>{14, 22});
}
