// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier than the unit tests; run through ctest or
// directly as build/tests/acceptance.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dqc/config.hpp"
#include "dqc/experiment.hpp"
#include "dqc/rng.hpp"
#include "dqc/scheduler.hpp"
#include "oracles.hpp"

using namespace dqc;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), seconds, detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int criterion, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(criterion, name, pass, seconds, detail);
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

struct RunKey {
  std::string scheduler;
  int scenario_shift;  // 0 or 4
  double loss_db;
  std::uint64_t seed;

  bool operator<(const RunKey& other) const {
    return std::tie(scheduler, scenario_shift, loss_db, seed) <
           std::tie(other.scheduler, other.scenario_shift, other.loss_db, other.seed);
  }
};

struct Fixtures {
  CostModel model;
  std::map<RunKey, ScheduleTrace> traces;
  std::map<RunKey, std::vector<CircuitSpec>> workloads;
};

Fixtures g_fix;

constexpr int kM = 36;
const std::vector<std::uint64_t> kSeeds = {1, 2, 3, 4, 5};

NetworkModel fixture_net(double loss_db) {
  TopologyConfig topo;  // defaults carry the 16-QPU configuration
  return build_network_with_loss(topo, loss_db);
}

const ScheduleTrace& fixture_trace(const RunKey& key) {
  auto it = g_fix.traces.find(key);
  if (it != g_fix.traces.end()) return it->second;

  const NetworkModel net = fixture_net(key.loss_db);
  WorkloadConfig wl;
  const std::vector<CircuitSpec> workload =
      sample_workload(workload_params(wl, kM, key.scenario_shift), key.seed);
  SchedulerConfig sc;
  SchedulerParams params = scheduler_params(sc, wl);
  params.alpha = 0.55;

  ScheduleTrace trace;
  if (key.scheduler == "batch") {
    trace = run_batch_scheduler(workload, net, g_fix.model, params, key.seed);
  } else if (key.scheduler == "single") {
    trace = run_single_scheduler(workload, net, params, key.seed);
  } else {
    trace = run_random_baseline(workload, net, params, key.seed);
  }
  g_fix.workloads[key] = workload;
  return g_fix.traces.emplace(key, std::move(trace)).first->second;
}

double mean_metric(const ScheduleTrace& trace, CircuitKind kind,
                   const char* metric) {
  double sum = 0.0;
  long long n = 0;
  for (const TraceEntry& e : trace.entries) {
    if (e.kind != kind) continue;
    sum += std::string(metric) == "remote" ? static_cast<double>(e.remote_gates) : e.jet;
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

double mean_remote_all(const ScheduleTrace& trace) {
  double sum = 0.0;
  for (const TraceEntry& e : trace.entries) sum += static_cast<double>(e.remote_gates);
  return sum / static_cast<double>(trace.entries.size());
}

double seeds_mean(const std::string& scheduler, int shift, double loss,
                  const std::function<double(const ScheduleTrace&)>& f) {
  double sum = 0.0;
  for (std::uint64_t seed : kSeeds) {
    sum += f(fixture_trace({scheduler, shift, loss, seed}));
  }
  return sum / static_cast<double>(kSeeds.size());
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

bool criterion_milp_exactness(std::string& detail) {
  Rng rng(20240817);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    BatchProblem p;
    const int j = rng.uniform_int(2, 6);
    for (int q = 0; q < j; ++q) {
      p.qpus.push_back({q, rng.uniform_int(2, 12), rng.uniform_int(0, 9) > 0});
    }
    p.links.assign(static_cast<std::size_t>(j),
                   std::vector<MilpLink>(static_cast<std::size_t>(j)));
    for (int a = 0; a < j; ++a) {
      for (int b = a + 1; b < j; ++b) {
        const MilpLink link{0.001 + 0.02 * rng.uniform_real(),
                            0.9 + 0.1 * rng.uniform_real()};
        p.links[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = link;
        p.links[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = link;
      }
    }
    const int batch = rng.uniform_int(1, 3);
    for (int m = 0; m < batch; ++m) {
      BatchCircuit c;
      c.id = m;
      c.width = rng.uniform_int(2, 16);
      c.k_max = rng.uniform_int(1, 3);
      for (int k = 1; k <= c.k_max; ++k) c.nu.push_back(5.0 * rng.uniform_real());
      p.circuits.push_back(std::move(c));
    }
    p.omega0 = rng.uniform_int(0, 3) == 0 ? 0.0 : 1.0;
    p.omega1 = rng.uniform_int(0, 3) == 0 ? 0.0 : 1.0;
    p.zeta = rng.uniform_int(0, batch);

    const SolveResult got = solve(build_batch_milp(p));
    const oracle::OracleResult want = oracle::batch_oracle(p);
    if (want.feasible != (got.status == SolveStatus::Optimal)) {
      detail = "feasibility mismatch at trial " + std::to_string(trial);
      return false;
    }
    if (want.feasible) {
      ++feasible;
      if (std::abs(got.plan.objective - want.objective) > 1e-9) {
        detail = "objective mismatch at trial " + std::to_string(trial) + ": got " +
                 std::to_string(got.plan.objective) + " want " +
                 std::to_string(want.objective);
        return false;
      }
    }
  }
  detail = std::to_string(feasible) + "/200 feasible, all objectives exact";
  return true;
}

bool criterion_link_latency(std::string& detail) {
  const NetworkModel net = build_fat_tree(
      4, 4, std::vector<int>(16, 8), 0.5, 0.005, {{1, 0.96}, {3, 0.94}, {5, 0.92}});
  const std::map<int, double> latency = net.latency_by_class();
  const double want1 = 0.005 * std::pow(10.0, 0.05);
  const double want3 = 0.005 * std::pow(10.0, 0.15);
  const double want5 = 0.005 * std::pow(10.0, 0.25);
  const bool pass = std::abs(latency.at(1) - want1) <= 1e-12 &&
                    std::abs(latency.at(3) - want3) <= 1e-12 &&
                    std::abs(latency.at(5) - want5) <= 1e-12;
  std::ostringstream d;
  d << "latencies " << latency.at(1) << ", " << latency.at(3) << ", " << latency.at(5);
  detail = d.str();
  return pass;
}

bool criterion_regression(std::string& detail) {
  std::ostringstream d;
  bool pass = true;
  for (const auto& [k, c] : g_fix.model.per_k) {
    d << "k=" << k << " R2=" << c.r2 << " ";
    pass = pass && c.r2 >= 0.95;
    const double dom = std::abs(c.connectivity);
    pass = pass && dom > std::abs(c.density) && dom > std::abs(c.variation) &&
           dom > std::abs(c.intercept);
  }
  detail = d.str();
  return pass;
}

bool criterion_remote_gate_levels(std::string& detail) {
  // First scenario, three seeds: the batch scheduler keeps QFT local while
  // random allocation does not.
  double batch_qft = 0.0;
  double base_qft = 0.0;
  double base_ghz = 0.0;
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    batch_qft += mean_metric(fixture_trace({"batch", 0, 0.5, seed}), CircuitKind::QFT, "remote");
    base_qft += mean_metric(fixture_trace({"baseline", 0, 0.5, seed}), CircuitKind::QFT, "remote");
    base_ghz += mean_metric(fixture_trace({"baseline", 0, 0.5, seed}), CircuitKind::GHZ, "remote");
  }
  batch_qft /= 3.0;
  base_qft /= 3.0;
  base_ghz /= 3.0;
  std::ostringstream d;
  d << "batch QFT " << batch_qft << ", baseline QFT " << base_qft << ", baseline GHZ "
    << base_ghz;
  detail = d.str();
  return batch_qft == 0.0 && base_qft > 50.0 && base_ghz < 3.0;
}

bool criterion_ordering(std::string& detail) {
  std::ostringstream d;
  bool pass = true;
  for (int shift : {0, 4}) {
    const double remote_batch = seeds_mean("batch", shift, 0.5, mean_remote_all);
    const double remote_single = seeds_mean("single", shift, 0.5, mean_remote_all);
    const double remote_base = seeds_mean("baseline", shift, 0.5, mean_remote_all);
    const double mk_batch = seeds_mean("batch", shift, 0.5,
                                       [](const ScheduleTrace& t) { return t.makespan; });
    const double mk_single = seeds_mean("single", shift, 0.5,
                                        [](const ScheduleTrace& t) { return t.makespan; });
    const double mk_base = seeds_mean("baseline", shift, 0.5,
                                      [](const ScheduleTrace& t) { return t.makespan; });
    d << (shift == 0 ? "Sc.1" : "Sc.2") << " remote " << remote_batch << "/"
      << remote_single << "/" << remote_base << " makespan " << mk_batch << "/"
      << mk_single << "/" << mk_base << "  ";
    pass = pass && remote_batch <= remote_single && remote_single <= remote_base;
    pass = pass && mk_batch <= mk_single && mk_single <= mk_base;
  }
  detail = d.str();
  return pass;
}

bool criterion_switch_loss(std::string& detail) {
  // Second scenario: batch gains over single grow with switch loss.
  std::map<double, double> improvement;
  for (double loss : {0.5, 1.0, 2.0}) {
    const double mk_batch = seeds_mean("batch", 4, loss,
                                       [](const ScheduleTrace& t) { return t.makespan; });
    const double mk_single = seeds_mean("single", 4, loss,
                                        [](const ScheduleTrace& t) { return t.makespan; });
    improvement[loss] = (mk_single - mk_batch) / mk_single;
  }
  std::ostringstream d;
  d << "improvement " << improvement[0.5] * 100 << "% / " << improvement[1.0] * 100
    << "% / " << improvement[2.0] * 100 << "%";
  detail = d.str();
  return improvement[0.5] > 0.0 && improvement[1.0] > improvement[0.5] &&
         improvement[2.0] > improvement[1.0] && improvement[2.0] >= 0.20;
}

bool criterion_invariants(std::string& detail) {
  int checked_traces = 0;
  // Occupancy, conservation, non-preemption over every cached trace.
  for (const auto& [key, trace] : g_fix.traces) {
    ++checked_traces;
    const auto& workload = g_fix.workloads.at(key);
    if (trace.entries.size() != workload.size()) {
      detail = "conservation broken for " + key.scheduler;
      return false;
    }
    std::map<int, const CircuitSpec*> by_id;
    for (const CircuitSpec& s : workload) by_id[s.id] = &s;
    std::set<int> seen;
    const NetworkModel net = fixture_net(key.loss_db);
    for (const TraceEntry& e : trace.entries) {
      if (!seen.insert(e.circuit_id).second) {
        detail = "duplicate circuit in trace";
        return false;
      }
      const CircuitSpec& spec = *by_id.at(e.circuit_id);
      long long cap = 0;
      for (int j : e.qpu_set) cap += net.qpu(j).capacity;
      if (cap < spec.width || e.parts > spec.k_max ||
          std::abs(e.end - (e.start + e.jet)) > 1e-12) {
        detail = "capacity, partition bound or interval broken";
        return false;
      }
    }
    for (int j = 0; j < net.qpu_count(); ++j) {
      std::vector<std::pair<double, double>> intervals;
      for (const TraceEntry& e : trace.entries) {
        if (std::find(e.qpu_set.begin(), e.qpu_set.end(), j) != e.qpu_set.end()) {
          intervals.emplace_back(e.start, e.end);
        }
      }
      std::sort(intervals.begin(), intervals.end());
      for (std::size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].first < intervals[i - 1].second - 1e-12) {
          detail = "overlapping occupancy on QPU " + std::to_string(j);
          return false;
        }
      }
    }
  }

  // Execution time linearity.
  {
    ExecutionProfile profile;
    profile.n_local_layers = 5;
    profile.remote_by_class[1] = 2;
    profile.remote_by_class[5] = 3;
    const std::map<int, double> lat = {{1, 0.006}, {5, 0.009}};
    const double base = jet(profile, 5e-4, lat);
    std::map<int, double> doubled = lat;
    doubled[5] *= 2.0;
    if (std::abs(jet(profile, 1e-3, lat) - base - 5 * 5e-4) > 1e-12 ||
        std::abs(jet(profile, 5e-4, doubled) - base - 3 * 0.009) > 1e-12) {
      detail = "jet linearity broken";
      return false;
    }
  }

  // Cut / remote-gate cross-module consistency.
  {
    const NetworkModel net = fixture_net(0.5);
    for (CircuitKind kind : kAllCircuitKinds) {
      const GeneratedCircuit gen = generate_circuit(kind, 20);
      const CircuitExecution exec =
          plan_execution(gen.layered, gen.graph, {1, 6, 11}, net, 5e-4, 5);
      if (exec.profile.remote_total() != exec.cut.total_cut) {
        detail = "remote gates disagree with the partition cut";
        return false;
      }
    }
  }

  // Bisection optimality against brute force on widths up to 10.
  for (CircuitKind kind : kAllCircuitKinds) {
    for (int w = 4; w <= 10; ++w) {
      const InteractionGraph g = generate_circuit(kind, w).graph;
      const long long got = kl_bisect(g, w / 2, w - w / 2, 31, 20).cut.total_cut;
      const long long want = oracle::min_cut_exhaustive(g, {w / 2, w - w / 2});
      if (got != want) {
        detail = std::string("bisection missed the optimum on ") + to_string(kind) +
                 " w=" + std::to_string(w);
        return false;
      }
    }
  }
  detail = std::to_string(checked_traces) + " traces checked";
  return true;
}

bool criterion_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  ExperimentConfig cfg;
  cfg.sweep.m_values = {12};
  cfg.sweep.workload_seeds = {1, 2};
  cfg.sweep.schedulers = {"batch", "single", "baseline"};
  cfg.costmodel.width_lo = 10;
  cfg.costmodel.width_hi = 16;
  const fs::path dir_a = fs::temp_directory_path() / "dqc_acc_a";
  const fs::path dir_b = fs::temp_directory_path() / "dqc_acc_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  cfg.output.dir = dir_a.string();
  run_experiment(cfg);
  cfg.output.dir = dir_b.string();
  run_experiment(cfg);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const bool runs_equal = slurp(dir_a / "runs.csv") == slurp(dir_b / "runs.csv");
  const bool agg_equal = slurp(dir_a / "aggregate.csv") == slurp(dir_b / "aggregate.csv");
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  detail = runs_equal && agg_equal ? "result files byte-identical" : "files differ";
  return runs_equal && agg_equal;
}

}  // namespace

int main() {
  std::printf("acceptance suite, engine %s\n", kEngineVersion);

  run_criterion(2, "fat-tree link latency multipliers", criterion_link_latency);
  run_criterion(1, "batch MILP matches exhaustive enumeration", criterion_milp_exactness);

  {
    const auto t0 = std::chrono::steady_clock::now();
    WorkloadConfig wl;
    GeneratorOptions options;
    options.qft_final_swaps = wl.qft_final_swaps;
    g_fix.model = train_cost_model(training_graphs(10, 30, options), {2, 3, 4}, 1, 10);
    std::printf("(cost model trained in %.1fs)\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  run_criterion(3, "partition cost regression quality", criterion_regression);
  run_criterion(4, "per-type remote gate levels", criterion_remote_gate_levels);
  run_criterion(5, "batch <= single <= baseline ordering", criterion_ordering);
  run_criterion(6, "batch advantage grows with switch loss", criterion_switch_loss);
  run_criterion(7, "invariant property suites", criterion_invariants);
  run_criterion(8, "experiment reruns are byte-identical", criterion_determinism);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
