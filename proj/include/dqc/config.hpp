#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dqc/circuit.hpp"
#include "dqc/netgraph.hpp"
#include "dqc/scheduler.hpp"

namespace dqc {

/// Configuration problems carry the offending field path so the message
/// pinpoints the mistake before anything runs.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct TopologyConfig {
  int pods = 4;
  int qpus_per_pod = 4;
  std::vector<int> capacities = {8, 8,  8,  8,  12, 12, 12, 12,
                                 16, 16, 16, 16, 20, 20, 20, 20};
  double switch_loss_db = 0.5;
  double t_el = 0.005;  // over the decoherence time
  std::map<int, double> fidelity_by_class = {{1, 0.96}, {3, 0.94}, {5, 0.92}};
  std::uint64_t seed = 1;  // capacity placement
};

struct WorkloadConfig {
  int total = 36;
  std::map<CircuitKind, double> mix = {{CircuitKind::GHZ, 0.25},
                                       {CircuitKind::WState, 0.25},
                                       {CircuitKind::DJ, 0.25},
                                       {CircuitKind::QFT, 0.25}};
  std::map<CircuitKind, std::pair<int, int>> ranges = scenario_ranges(0);
  int k_max = 4;
  bool qft_final_swaps = true;
  std::uint64_t seed = 1;
  std::string dump_dir;  // when set, gate lists are written here
};

struct SchedulerConfig {
  std::string name = "batch";  // batch | single | baseline
  double beta = 0.85;
  double alpha = 0.55;
  double gamma_threshold = 5.0;
  double omega0 = 1.0;
  double omega1 = 1.0;
  double t_local = 5e-4;
  double solver_time_limit_s = 10.0;
};

struct CostModelConfig {
  int width_lo = 10;
  int width_hi = 30;
  std::vector<int> ks = {2, 3, 4};
  std::uint64_t seed = 1;
  int restarts = 10;
  std::string path;  // load a trained model instead of fitting one
};

struct ScenarioConfig {
  std::string name = "Sc.1";
  int range_shift = 0;
};

struct SweepConfig {
  std::vector<int> m_values = {36};
  std::vector<double> alphas = {0.55};
  std::vector<double> switch_loss_db = {0.5};
  std::vector<std::uint64_t> workload_seeds = {1};
  std::vector<std::uint64_t> capacity_seeds = {1};
  std::vector<std::string> schedulers = {"batch", "single", "baseline"};
  std::vector<ScenarioConfig> scenarios = {{"Sc.1", 0}};
  bool paired_seeds = true;  // pair capacity seeds with workload seeds; else cross
};

struct OutputConfig {
  std::string dir = "results";
  std::vector<std::string> formats = {"csv"};
};

struct ExperimentConfig {
  TopologyConfig topology;
  WorkloadConfig workload;
  SchedulerConfig scheduler;
  CostModelConfig costmodel;
  SweepConfig sweep;
  OutputConfig output;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical serialization; parsing it back yields the same configuration.
std::string config_to_text(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Shuffles the capacity multiset with the topology seed, then builds the
/// fat tree.
NetworkModel build_network(const TopologyConfig& topo);

NetworkModel build_network_with_loss(const TopologyConfig& topo, double switch_loss_db);

SchedulerParams scheduler_params(const SchedulerConfig& sched,
                                 const WorkloadConfig& workload);

WorkloadParams workload_params(const WorkloadConfig& workload, int total,
                               int range_shift);

}  // namespace dqc
