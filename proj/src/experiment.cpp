#include "dqc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "dqc/scheduler.hpp"

namespace dqc {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Values are quantized to the CSV precision as soon as a row is built, so
// aggregating in memory and aggregating re-read files give identical bytes.
double quantize(double v) { return std::strtod(format_value(v).c_str(), nullptr); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> seed_pairs(const SweepConfig& sweep) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  if (sweep.paired_seeds) {
    for (std::size_t i = 0; i < sweep.workload_seeds.size(); ++i) {
      pairs.emplace_back(sweep.workload_seeds[i],
                         sweep.capacity_seeds[i % sweep.capacity_seeds.size()]);
    }
  } else {
    for (std::uint64_t ws : sweep.workload_seeds) {
      for (std::uint64_t cs : sweep.capacity_seeds) pairs.emplace_back(ws, cs);
    }
  }
  return pairs;
}

}  // namespace

CostModel obtain_cost_model(const ExperimentConfig& cfg) {
  if (!cfg.costmodel.path.empty()) {
    return load_cost_model_file(cfg.costmodel.path);
  }
  GeneratorOptions options;
  options.qft_final_swaps = cfg.workload.qft_final_swaps;
  return train_cost_model(
      training_graphs(cfg.costmodel.width_lo, cfg.costmodel.width_hi, options),
      cfg.costmodel.ks, cfg.costmodel.seed, cfg.costmodel.restarts);
}

ScheduleTrace run_cell(const std::string& scheduler, const ExperimentConfig& cfg,
                       const CostModel& model, const NetworkModel& net,
                       int m, int range_shift, double alpha,
                       std::uint64_t workload_seed) {
  SchedulerParams params = scheduler_params(cfg.scheduler, cfg.workload);
  params.alpha = alpha > 0.0 ? alpha : cfg.scheduler.alpha;
  const std::vector<CircuitSpec> workload =
      sample_workload(workload_params(cfg.workload, m, range_shift), workload_seed);
  if (scheduler == "batch") {
    for (int k = 2; k <= cfg.workload.k_max; ++k) {
      if (!model.has(k)) {
        throw ConfigError("cost model has no fit for k=" + std::to_string(k) +
                          " but workload.k_max is " + std::to_string(cfg.workload.k_max) +
                          "; extend costmodel.ks or retrain");
      }
    }
    return run_batch_scheduler(workload, net, model, params, workload_seed);
  }
  if (scheduler == "single") {
    return run_single_scheduler(workload, net, params, workload_seed);
  }
  if (scheduler == "baseline") {
    return run_random_baseline(workload, net, params, workload_seed);
  }
  throw ConfigError("unknown scheduler: " + scheduler);
}

namespace {

std::vector<RunRow> sweep_rows(const ExperimentConfig& cfg, const CostModel& model) {
  const auto pairs = seed_pairs(cfg.sweep);
  std::vector<RunRow> rows;

  for (const std::string& scheduler : cfg.sweep.schedulers) {
    // Only the batch scheduler has a cycle trigger to sweep.
    const std::vector<double> alphas =
        scheduler == "batch" ? cfg.sweep.alphas : std::vector<double>{0.0};
    for (const ScenarioConfig& scenario : cfg.sweep.scenarios) {
      for (double loss : cfg.sweep.switch_loss_db) {
        for (const auto& [workload_seed, capacity_seed] : pairs) {
          TopologyConfig topo = cfg.topology;
          topo.seed = capacity_seed;
          const NetworkModel net = build_network_with_loss(topo, loss);
          for (int m : cfg.sweep.m_values) {
            for (double alpha : alphas) {
              const ScheduleTrace trace =
                  run_cell(scheduler, cfg, model, net, m, scenario.range_shift,
                           alpha, workload_seed);
              const ReportTable table = aggregate(trace);
              for (const ReportRow& r : table.rows) {
                RunRow row;
                row.scheduler = scheduler;
                row.scenario = scenario.name;
                if (cfg.sweep.switch_loss_db.size() > 1) {
                  // Keep loss levels distinguishable in the scenario column.
                  row.scenario += "@" + format_value(loss) + "dB";
                }
                row.m = m;
                row.alpha = quantize(alpha);
                row.seed = workload_seed;
                row.metric = r.metric;
                row.kind = r.kind;
                row.value = quantize(r.value);
                rows.push_back(std::move(row));
              }
            }
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<RunRow> run_experiment_rows(const ExperimentConfig& cfg) {
  return sweep_rows(cfg, obtain_cost_model(cfg));
}

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << "scheduler,scenario,M,alpha,seed,metric,circuit_kind,value\n";
  for (const RunRow& r : rows) {
    out << r.scheduler << ',' << r.scenario << ',' << r.m << ','
        << format_value(r.alpha) << ',' << r.seed << ',' << r.metric << ','
        << r.kind << ',' << format_value(r.value) << '\n';
  }
}

std::vector<RunRow> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty runs csv");
  if (line != "scheduler,scenario,M,alpha,seed,metric,circuit_kind,value") {
    throw std::runtime_error("unexpected runs csv header: " + line);
  }
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::runtime_error("malformed runs csv row: " + line);
    RunRow r;
    r.scheduler = fields[0];
    r.scenario = fields[1];
    r.m = std::stoi(fields[2]);
    r.alpha = std::stod(fields[3]);
    r.seed = std::stoull(fields[4]);
    r.metric = fields[5];
    r.kind = fields[6];
    r.value = std::stod(fields[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  using Key = std::tuple<std::string, std::string, int, double, std::string, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const RunRow& r : rows) {
    groups[{r.scheduler, r.scenario, r.m, r.alpha, r.metric, r.kind}].push_back(r.value);
  }
  out << "scheduler,scenario,M,alpha,metric,circuit_kind,mean,stddev,n\n";
  for (const auto& [key, values] : groups) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev =
        values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
        << format_value(std::get<3>(key)) << ',' << std::get<4>(key) << ','
        << std::get<5>(key) << ',' << format_value(mean) << ',' << format_value(stddev)
        << ',' << values.size() << '\n';
  }
}

std::size_t run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output.dir);

  const CostModel model = obtain_cost_model(cfg);
  const std::vector<RunRow> rows = sweep_rows(cfg, model);
  {
    std::ofstream out(fs::path(cfg.output.dir) / "runs.csv");
    if (!out) throw std::runtime_error("cannot write runs.csv");
    write_runs_csv(out, rows);
  }
  {
    std::ofstream out(fs::path(cfg.output.dir) / "aggregate.csv");
    if (!out) throw std::runtime_error("cannot write aggregate.csv");
    write_aggregate_csv(out, rows);
  }
  {
    std::ofstream out(fs::path(cfg.output.dir) / "config.json");
    if (!out) throw std::runtime_error("cannot write config.json");
    out << config_to_text(cfg);
  }
  {
    std::ostringstream model_text;
    save_cost_model(model, model_text);
    std::ofstream out(fs::path(cfg.output.dir) / "manifest.txt");
    if (!out) throw std::runtime_error("cannot write manifest.txt");
    out << "engine_version: " << kEngineVersion << '\n';
    out << "config_hash: " << hex64(config_hash(cfg)) << '\n';
    out << "costmodel_checksum: " << hex64(fnv1a(model_text.str())) << '\n';
    out << "runs_rows: " << rows.size() << '\n';
    // Timestamp stays on the last line so byte comparisons can drop it.
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "timestamp: " << stamp << '\n';
  }
  return rows.size();
}

}  // namespace dqc
