#include "dqc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dqc/rng.hpp"

namespace dqc {

const char* to_string(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::GHZ: return "GHZ";
    case CircuitKind::WState: return "WSTATE";
    case CircuitKind::DJ: return "DJ";
    case CircuitKind::QFT: return "QFT";
  }
  return "?";
}

CircuitKind circuit_kind_from_string(const std::string& name) {
  for (CircuitKind kind : kAllCircuitKinds) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown circuit kind: " + name);
}

void InteractionGraph::add_interaction(int a, int b, long long weight) {
  if (a == b) throw std::invalid_argument("self-interaction");
  if (a < 0 || b < 0 || a >= width_ || b >= width_) {
    throw std::out_of_range("qubit index outside circuit width");
  }
  if (weight < 1) throw std::invalid_argument("interaction weight must be >= 1");
  const auto key = std::minmax(a, b);
  edges_[{key.first, key.second}] += weight;
}

long long InteractionGraph::weight(int a, int b) const {
  const auto key = std::minmax(a, b);
  auto it = edges_.find({key.first, key.second});
  return it == edges_.end() ? 0 : it->second;
}

long long InteractionGraph::total_edge_weight() const {
  long long sum = 0;
  for (const auto& [edge, w] : edges_) sum += w;
  return sum;
}

std::vector<long long> InteractionGraph::weighted_degrees() const {
  std::vector<long long> deg(static_cast<std::size_t>(width_), 0);
  for (const auto& [edge, w] : edges_) {
    deg[static_cast<std::size_t>(edge.first)] += w;
    deg[static_cast<std::size_t>(edge.second)] += w;
  }
  return deg;
}

std::vector<Gate> benchmark_gates(CircuitKind kind, int width,
                                  const GeneratorOptions& options) {
  if (width < 2) throw std::invalid_argument("circuit width must be >= 2");
  std::vector<Gate> gates;
  switch (kind) {
    case CircuitKind::GHZ:
      gates.push_back({GateOp::H, 0});
      for (int i = 0; i + 1 < width; ++i) {
        gates.push_back({GateOp::CX, i, i + 1});
      }
      break;
    case CircuitKind::WState:
      for (int i = 0; i + 1 < width; ++i) {
        gates.push_back({GateOp::CRY, i, i + 1});
        gates.push_back({GateOp::CX, i + 1, i});
      }
      break;
    case CircuitKind::DJ: {
      const int target = width - 1;
      for (int i = 0; i < width; ++i) gates.push_back({GateOp::H, i});
      for (int i = 0; i < width - 1; ++i) gates.push_back({GateOp::CX, i, target});
      for (int i = 0; i < width - 1; ++i) gates.push_back({GateOp::H, i});
      break;
    }
    case CircuitKind::QFT:
      for (int i = 0; i < width; ++i) {
        gates.push_back({GateOp::H, i});
        for (int j = i + 1; j < width; ++j) {
          gates.push_back({GateOp::CP, j, i});
        }
      }
      if (options.qft_final_swaps) {
        for (int i = 0; i < width - 1 - i; ++i) {
          const int j = width - 1 - i;
          gates.push_back({GateOp::CX, i, j});
          gates.push_back({GateOp::CX, j, i});
          gates.push_back({GateOp::CX, i, j});
        }
      }
      break;
  }
  return gates;
}

LayeredCircuit layers_asap(int width, const std::vector<Gate>& gates) {
  LayeredCircuit circ;
  circ.width = width;
  // next_free[q]: earliest layer still open for qubit q
  std::vector<int> next_free(static_cast<std::size_t>(width), 0);
  for (const Gate& g : gates) {
    if (g.q0 < 0 || g.q0 >= width || (g.is_two_qubit() && g.q1 >= width)) {
      throw std::out_of_range("gate qubit outside circuit width");
    }
    int layer = next_free[static_cast<std::size_t>(g.q0)];
    if (g.is_two_qubit()) {
      layer = std::max(layer, next_free[static_cast<std::size_t>(g.q1)]);
    }
    if (layer >= circ.layer_count()) circ.layers.resize(static_cast<std::size_t>(layer) + 1);
    circ.layers[static_cast<std::size_t>(layer)].push_back(g);
    next_free[static_cast<std::size_t>(g.q0)] = layer + 1;
    if (g.is_two_qubit()) next_free[static_cast<std::size_t>(g.q1)] = layer + 1;
  }
  return circ;
}

InteractionGraph interaction_graph(const LayeredCircuit& circ) {
  InteractionGraph g(circ.width);
  for (const auto& layer : circ.layers) {
    for (const Gate& gate : layer) {
      if (gate.is_two_qubit()) g.add_interaction(gate.q0, gate.q1);
    }
  }
  return g;
}

GeneratedCircuit generate_circuit(CircuitKind kind, int width,
                                  const GeneratorOptions& options) {
  const std::vector<Gate> gates = benchmark_gates(kind, width, options);
  GeneratedCircuit out;
  out.layered = layers_asap(width, gates);
  out.graph = interaction_graph(out.layered);
  return out;
}

void write_gate_list(std::ostream& out, const std::vector<Gate>& gates) {
  for (const Gate& g : gates) {
    switch (g.op) {
      case GateOp::H: out << "H"; break;
      case GateOp::X: out << "X"; break;
      case GateOp::CX: out << "CX"; break;
      case GateOp::CP: out << "CP"; break;
      case GateOp::CRY: out << "CRY"; break;
    }
    out << ' ' << g.q0;
    if (g.is_two_qubit()) out << ' ' << g.q1;
    out << '\n';
  }
}

std::map<CircuitKind, std::pair<int, int>> scenario_ranges(int shift) {
  std::map<CircuitKind, std::pair<int, int>> ranges = {
      {CircuitKind::GHZ, {18, 26}},
      {CircuitKind::WState, {18, 26}},
      {CircuitKind::DJ, {14, 22}},
      {CircuitKind::QFT, {10, 18}}};
  for (auto& [kind, range] : ranges) {
    range.first += shift;
    range.second += shift;
  }
  return ranges;
}

std::vector<CircuitSpec> sample_workload(const WorkloadParams& params,
                                         std::uint64_t seed) {
  if (params.total < 0) throw std::invalid_argument("workload size must be >= 0");
  double frac_sum = 0.0;
  for (CircuitKind kind : kAllCircuitKinds) {
    auto it = params.mix.find(kind);
    const double f = it == params.mix.end() ? 0.0 : it->second;
    if (f < 0.0) throw std::invalid_argument("mix fractions must be >= 0");
    frac_sum += f;
  }
  if (std::abs(frac_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("mix fractions must sum to 1");
  }

  // Floor counts per kind, then hand out the remainder round-robin.
  std::array<int, 4> counts{};
  int assigned = 0;
  for (std::size_t i = 0; i < kAllCircuitKinds.size(); ++i) {
    auto it = params.mix.find(kAllCircuitKinds[i]);
    const double f = it == params.mix.end() ? 0.0 : it->second;
    counts[i] = static_cast<int>(f * params.total + 1e-9);
    assigned += counts[i];
  }
  for (std::size_t i = 0; assigned < params.total;
       i = (i + 1) % kAllCircuitKinds.size()) {
    auto it = params.mix.find(kAllCircuitKinds[i]);
    if (it == params.mix.end() || it->second <= 0.0) continue;
    ++counts[i];
    ++assigned;
  }

  Rng rng(derive_seed(seed, streams::kWorkload));
  std::vector<CircuitSpec> specs;
  specs.reserve(static_cast<std::size_t>(params.total));
  int id = 0;
  for (std::size_t i = 0; i < kAllCircuitKinds.size(); ++i) {
    const CircuitKind kind = kAllCircuitKinds[i];
    auto range_it = params.width_ranges.find(kind);
    if (counts[i] > 0 && range_it == params.width_ranges.end()) {
      throw std::invalid_argument(std::string("no width range for kind ") +
                                  to_string(kind));
    }
    for (int n = 0; n < counts[i]; ++n) {
      const auto [lo, hi] = range_it->second;
      if (lo < 2 || hi < lo) throw std::invalid_argument("bad width range");
      CircuitSpec spec;
      spec.id = id++;
      spec.kind = kind;
      spec.width = rng.uniform_int(lo, hi);
      spec.k_max = params.k_max;
      specs.push_back(spec);
    }
  }
  rng.shuffle(specs);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    specs[i].arrival_index = static_cast<int>(i);
  }
  return specs;
}

}  // namespace dqc
