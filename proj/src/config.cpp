#include "dqc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dqc/rng.hpp"

namespace dqc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void expect_keys(const json& j, const std::string& path,
                 const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key()) == 0) fail(path + "." + it.key(), "unknown field");
  }
}

template <typename T>
T get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<T>();
}

template <typename T>
void read_field(const json& section, const std::string& path, const char* key, T& out) {
  auto it = section.find(key);
  if (it == section.end()) return;
  const std::string field_path = path + "." + key;
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) fail(field_path, "expected a string");
      out = it->get<std::string>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(field_path, "expected a boolean");
      out = it->get<bool>();
    } else {
      out = get_number<T>(*it, field_path);
    }
  } catch (const json::exception& e) {
    fail(field_path, e.what());
  }
}

template <typename T>
std::vector<T> read_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number<T>(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::map<CircuitKind, double> read_kind_map(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object keyed by circuit kind");
  std::map<CircuitKind, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CircuitKind kind;
    try {
      kind = circuit_kind_from_string(it.key());
    } catch (const std::invalid_argument& e) {
      fail(path + "." + it.key(), e.what());
    }
    out[kind] = get_number<double>(it.value(), path + "." + it.key());
  }
  return out;
}

std::map<CircuitKind, std::pair<int, int>> read_kind_ranges(const json& j,
                                                            const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object keyed by circuit kind");
  std::map<CircuitKind, std::pair<int, int>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CircuitKind kind;
    try {
      kind = circuit_kind_from_string(it.key());
    } catch (const std::invalid_argument& e) {
      fail(path + "." + it.key(), e.what());
    }
    const auto range = read_list<int>(it.value(), path + "." + it.key());
    if (range.size() != 2 || range[0] > range[1]) {
      fail(path + "." + it.key(), "expected [lo, hi] with lo <= hi");
    }
    out[kind] = {range[0], range[1]};
  }
  return out;
}

void parse_topology(const json& j, TopologyConfig& topo) {
  expect_keys(j, "topology",
              {"pods", "qpus_per_pod", "capacities", "switch_loss_db",
               "t_el_over_tdec", "fidelity_by_class", "seed"});
  read_field(j, "topology", "pods", topo.pods);
  read_field(j, "topology", "qpus_per_pod", topo.qpus_per_pod);
  if (auto it = j.find("capacities"); it != j.end()) {
    topo.capacities = read_list<int>(*it, "topology.capacities");
  }
  read_field(j, "topology", "switch_loss_db", topo.switch_loss_db);
  read_field(j, "topology", "t_el_over_tdec", topo.t_el);
  read_field(j, "topology", "seed", topo.seed);
  if (auto it = j.find("fidelity_by_class"); it != j.end()) {
    if (!it->is_object()) fail("topology.fidelity_by_class", "expected an object");
    topo.fidelity_by_class.clear();
    for (auto fit = it->begin(); fit != it->end(); ++fit) {
      int cls = 0;
      try {
        cls = std::stoi(fit.key());
      } catch (const std::exception&) {
        fail("topology.fidelity_by_class." + fit.key(), "class must be an integer");
      }
      topo.fidelity_by_class[cls] =
          get_number<double>(fit.value(), "topology.fidelity_by_class." + fit.key());
    }
  }
  if (topo.pods < 1 || topo.qpus_per_pod < 1) fail("topology.pods", "must be positive");
  if (topo.capacities.size() !=
      static_cast<std::size_t>(topo.pods) * static_cast<std::size_t>(topo.qpus_per_pod)) {
    fail("topology.capacities", "length must equal pods * qpus_per_pod");
  }
  for (std::size_t i = 0; i < topo.capacities.size(); ++i) {
    if (topo.capacities[i] < 1) {
      fail("topology.capacities[" + std::to_string(i) + "]", "must be >= 1");
    }
  }
  if (!(topo.t_el > 0.0)) fail("topology.t_el_over_tdec", "must be positive");
  if (topo.switch_loss_db < 0.0) fail("topology.switch_loss_db", "must be >= 0");
  for (const auto& [cls, fid] : topo.fidelity_by_class) {
    if (!(fid > 0.0 && fid <= 1.0)) {
      fail("topology.fidelity_by_class." + std::to_string(cls), "must be in (0, 1]");
    }
  }
}

void parse_workload(const json& j, WorkloadConfig& wl) {
  expect_keys(j, "workload",
              {"m", "mix", "ranges", "k_max", "qft_final_swaps", "seed", "dump_dir"});
  read_field(j, "workload", "m", wl.total);
  read_field(j, "workload", "k_max", wl.k_max);
  read_field(j, "workload", "qft_final_swaps", wl.qft_final_swaps);
  read_field(j, "workload", "seed", wl.seed);
  read_field(j, "workload", "dump_dir", wl.dump_dir);
  if (auto it = j.find("mix"); it != j.end()) wl.mix = read_kind_map(*it, "workload.mix");
  if (auto it = j.find("ranges"); it != j.end()) {
    wl.ranges = read_kind_ranges(*it, "workload.ranges");
  }
  if (wl.total < 1) fail("workload.m", "must be >= 1");
  if (wl.k_max < 1) fail("workload.k_max", "must be >= 1");
  double sum = 0.0;
  for (const auto& [kind, f] : wl.mix) {
    if (f < 0.0) fail(std::string("workload.mix.") + to_string(kind), "must be >= 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail("workload.mix", "fractions must sum to 1");
  for (const auto& [kind, range] : wl.ranges) {
    if (range.first < 2) {
      fail(std::string("workload.ranges.") + to_string(kind), "widths must be >= 2");
    }
  }
}

void parse_scheduler(const json& j, SchedulerConfig& sc) {
  expect_keys(j, "scheduler",
              {"name", "beta", "alpha", "gamma_threshold", "omega0", "omega1",
               "t_local_over_tdec", "solver_time_limit_s"});
  read_field(j, "scheduler", "name", sc.name);
  read_field(j, "scheduler", "beta", sc.beta);
  read_field(j, "scheduler", "alpha", sc.alpha);
  read_field(j, "scheduler", "gamma_threshold", sc.gamma_threshold);
  read_field(j, "scheduler", "omega0", sc.omega0);
  read_field(j, "scheduler", "omega1", sc.omega1);
  read_field(j, "scheduler", "t_local_over_tdec", sc.t_local);
  read_field(j, "scheduler", "solver_time_limit_s", sc.solver_time_limit_s);
  if (sc.name != "batch" && sc.name != "single" && sc.name != "baseline") {
    fail("scheduler.name", "must be batch, single or baseline");
  }
  if (!(sc.beta > 0.0 && sc.beta < 1.0)) fail("scheduler.beta", "must be in (0, 1)");
  if (!(sc.alpha > 0.0 && sc.alpha <= 1.0)) fail("scheduler.alpha", "must be in (0, 1]");
  if (sc.gamma_threshold < 0.0) fail("scheduler.gamma_threshold", "must be >= 0");
  if (sc.omega0 < 0.0 || sc.omega1 < 0.0) fail("scheduler.omega0", "must be >= 0");
  if (sc.t_local < 0.0) fail("scheduler.t_local_over_tdec", "must be >= 0");
  if (!(sc.solver_time_limit_s > 0.0)) {
    fail("scheduler.solver_time_limit_s", "must be positive");
  }
}

void parse_costmodel(const json& j, CostModelConfig& cm) {
  expect_keys(j, "costmodel", {"width_lo", "width_hi", "ks", "seed", "restarts", "path"});
  read_field(j, "costmodel", "width_lo", cm.width_lo);
  read_field(j, "costmodel", "width_hi", cm.width_hi);
  read_field(j, "costmodel", "seed", cm.seed);
  read_field(j, "costmodel", "restarts", cm.restarts);
  read_field(j, "costmodel", "path", cm.path);
  if (auto it = j.find("ks"); it != j.end()) cm.ks = read_list<int>(*it, "costmodel.ks");
  if (cm.width_lo < 2 || cm.width_hi < cm.width_lo) {
    fail("costmodel.width_lo", "need 2 <= width_lo <= width_hi");
  }
  if (cm.ks.empty()) fail("costmodel.ks", "must not be empty");
  for (int k : cm.ks) {
    if (k < 2 || k > cm.width_lo) fail("costmodel.ks", "every k must be in [2, width_lo]");
  }
  if (cm.restarts < 1) fail("costmodel.restarts", "must be >= 1");
}

void parse_sweep(const json& j, SweepConfig& sw) {
  expect_keys(j, "sweep",
              {"m_values", "alphas", "switch_loss_db", "workload_seeds",
               "capacity_seeds", "schedulers", "scenarios", "paired_seeds"});
  if (auto it = j.find("m_values"); it != j.end()) {
    sw.m_values = read_list<int>(*it, "sweep.m_values");
  }
  if (auto it = j.find("alphas"); it != j.end()) {
    sw.alphas = read_list<double>(*it, "sweep.alphas");
  }
  if (auto it = j.find("switch_loss_db"); it != j.end()) {
    sw.switch_loss_db = read_list<double>(*it, "sweep.switch_loss_db");
  }
  if (auto it = j.find("workload_seeds"); it != j.end()) {
    sw.workload_seeds = read_list<std::uint64_t>(*it, "sweep.workload_seeds");
  }
  if (auto it = j.find("capacity_seeds"); it != j.end()) {
    sw.capacity_seeds = read_list<std::uint64_t>(*it, "sweep.capacity_seeds");
  }
  if (auto it = j.find("schedulers"); it != j.end()) {
    if (!it->is_array()) fail("sweep.schedulers", "expected a list");
    sw.schedulers.clear();
    for (const auto& s : *it) {
      if (!s.is_string()) fail("sweep.schedulers", "expected strings");
      sw.schedulers.push_back(s.get<std::string>());
    }
  }
  if (auto it = j.find("scenarios"); it != j.end()) {
    if (!it->is_array()) fail("sweep.scenarios", "expected a list");
    sw.scenarios.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& sj = (*it)[i];
      const std::string path = "sweep.scenarios[" + std::to_string(i) + "]";
      expect_keys(sj, path, {"name", "range_shift"});
      ScenarioConfig sc;
      read_field(sj, path, "name", sc.name);
      read_field(sj, path, "range_shift", sc.range_shift);
      sw.scenarios.push_back(std::move(sc));
    }
  }
  read_field(j, "sweep", "paired_seeds", sw.paired_seeds);

  if (sw.m_values.empty()) fail("sweep.m_values", "must not be empty");
  if (sw.alphas.empty()) fail("sweep.alphas", "must not be empty");
  if (sw.switch_loss_db.empty()) fail("sweep.switch_loss_db", "must not be empty");
  if (sw.workload_seeds.empty()) fail("sweep.workload_seeds", "must not be empty");
  if (sw.capacity_seeds.empty()) fail("sweep.capacity_seeds", "must not be empty");
  if (sw.schedulers.empty()) fail("sweep.schedulers", "must not be empty");
  if (sw.scenarios.empty()) fail("sweep.scenarios", "must not be empty");
  for (const std::string& s : sw.schedulers) {
    if (s != "batch" && s != "single" && s != "baseline") {
      fail("sweep.schedulers", "unknown scheduler: " + s);
    }
  }
  const std::set<std::uint64_t> wl_seeds(sw.workload_seeds.begin(), sw.workload_seeds.end());
  if (wl_seeds.size() != sw.workload_seeds.size()) {
    fail("sweep.workload_seeds", "seeds must be distinct");
  }
  const std::set<std::uint64_t> cap_seeds(sw.capacity_seeds.begin(), sw.capacity_seeds.end());
  if (cap_seeds.size() != sw.capacity_seeds.size()) {
    fail("sweep.capacity_seeds", "seeds must be distinct");
  }
}

void parse_output(const json& j, OutputConfig& out) {
  expect_keys(j, "output", {"dir", "formats"});
  read_field(j, "output", "dir", out.dir);
  if (auto it = j.find("formats"); it != j.end()) {
    if (!it->is_array()) fail("output.formats", "expected a list");
    out.formats.clear();
    for (const auto& f : *it) {
      if (!f.is_string() || f.get<std::string>() != "csv") {
        fail("output.formats", "only csv is supported");
      }
      out.formats.push_back(f.get<std::string>());
    }
  }
  if (out.dir.empty()) fail("output.dir", "must not be empty");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  expect_keys(j, "<root>",
              {"topology", "workload", "scheduler", "costmodel", "sweep", "output"});
  ExperimentConfig cfg;
  if (auto it = j.find("topology"); it != j.end()) parse_topology(*it, cfg.topology);
  if (auto it = j.find("workload"); it != j.end()) parse_workload(*it, cfg.workload);
  if (auto it = j.find("scheduler"); it != j.end()) parse_scheduler(*it, cfg.scheduler);
  if (auto it = j.find("costmodel"); it != j.end()) parse_costmodel(*it, cfg.costmodel);
  if (auto it = j.find("sweep"); it != j.end()) parse_sweep(*it, cfg.sweep);
  if (auto it = j.find("output"); it != j.end()) parse_output(*it, cfg.output);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  json j;
  json& topo = j["topology"];
  topo["pods"] = cfg.topology.pods;
  topo["qpus_per_pod"] = cfg.topology.qpus_per_pod;
  topo["capacities"] = cfg.topology.capacities;
  topo["switch_loss_db"] = cfg.topology.switch_loss_db;
  topo["t_el_over_tdec"] = cfg.topology.t_el;
  for (const auto& [cls, fid] : cfg.topology.fidelity_by_class) {
    topo["fidelity_by_class"][std::to_string(cls)] = fid;
  }
  topo["seed"] = cfg.topology.seed;

  json& wl = j["workload"];
  wl["m"] = cfg.workload.total;
  for (const auto& [kind, f] : cfg.workload.mix) wl["mix"][to_string(kind)] = f;
  for (const auto& [kind, range] : cfg.workload.ranges) {
    wl["ranges"][to_string(kind)] = {range.first, range.second};
  }
  wl["k_max"] = cfg.workload.k_max;
  wl["qft_final_swaps"] = cfg.workload.qft_final_swaps;
  wl["seed"] = cfg.workload.seed;
  if (!cfg.workload.dump_dir.empty()) wl["dump_dir"] = cfg.workload.dump_dir;

  json& sc = j["scheduler"];
  sc["name"] = cfg.scheduler.name;
  sc["beta"] = cfg.scheduler.beta;
  sc["alpha"] = cfg.scheduler.alpha;
  sc["gamma_threshold"] = cfg.scheduler.gamma_threshold;
  sc["omega0"] = cfg.scheduler.omega0;
  sc["omega1"] = cfg.scheduler.omega1;
  sc["t_local_over_tdec"] = cfg.scheduler.t_local;
  sc["solver_time_limit_s"] = cfg.scheduler.solver_time_limit_s;

  json& cm = j["costmodel"];
  cm["width_lo"] = cfg.costmodel.width_lo;
  cm["width_hi"] = cfg.costmodel.width_hi;
  cm["ks"] = cfg.costmodel.ks;
  cm["seed"] = cfg.costmodel.seed;
  cm["restarts"] = cfg.costmodel.restarts;
  if (!cfg.costmodel.path.empty()) cm["path"] = cfg.costmodel.path;

  json& sw = j["sweep"];
  sw["m_values"] = cfg.sweep.m_values;
  sw["alphas"] = cfg.sweep.alphas;
  sw["switch_loss_db"] = cfg.sweep.switch_loss_db;
  sw["workload_seeds"] = cfg.sweep.workload_seeds;
  sw["capacity_seeds"] = cfg.sweep.capacity_seeds;
  sw["schedulers"] = cfg.sweep.schedulers;
  for (const ScenarioConfig& scenario : cfg.sweep.scenarios) {
    sw["scenarios"].push_back({{"name", scenario.name}, {"range_shift", scenario.range_shift}});
  }
  sw["paired_seeds"] = cfg.sweep.paired_seeds;

  json& out = j["output"];
  out["dir"] = cfg.output.dir;
  out["formats"] = cfg.output.formats;

  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // The hash identifies what the experiment computes, not where it lands.
  ExperimentConfig keyed = cfg;
  keyed.output = OutputConfig{};
  const std::string text = config_to_text(keyed);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

NetworkModel build_network(const TopologyConfig& topo) {
  return build_network_with_loss(topo, topo.switch_loss_db);
}

NetworkModel build_network_with_loss(const TopologyConfig& topo, double switch_loss_db) {
  std::vector<int> capacities = topo.capacities;
  Rng rng(derive_seed(topo.seed, streams::kCapacity));
  rng.shuffle(capacities);
  return build_fat_tree(topo.pods, topo.qpus_per_pod, capacities, switch_loss_db,
                        topo.t_el, topo.fidelity_by_class);
}

SchedulerParams scheduler_params(const SchedulerConfig& sched,
                                 const WorkloadConfig& workload) {
  SchedulerParams params;
  params.beta = sched.beta;
  params.alpha = sched.alpha;
  params.gamma_threshold = sched.gamma_threshold;
  params.omega0 = sched.omega0;
  params.omega1 = sched.omega1;
  params.t_local = sched.t_local;
  params.solver_time_limit_s = sched.solver_time_limit_s;
  params.generator.qft_final_swaps = workload.qft_final_swaps;
  return params;
}

WorkloadParams workload_params(const WorkloadConfig& workload, int total,
                               int range_shift) {
  WorkloadParams params;
  params.total = total;
  params.mix = workload.mix;
  params.width_ranges = workload.ranges;
  for (auto& [kind, range] : params.width_ranges) {
    range.first += range_shift;
    range.second += range_shift;
  }
  params.k_max = workload.k_max;
  params.generator.qft_final_swaps = workload.qft_final_swaps;
  return params;
}

}  // namespace dqc
