#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqc/config.hpp"
#include "dqc/experiment.hpp"
#include "dqc/scheduler.hpp"

namespace {

using namespace dqc;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ExperimentConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return load_config_file(config_path);
}

std::pair<int, int> parse_width_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    throw ConfigError("widths must look like lo..hi, got: " + text);
  }
  return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 2))};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int cmd_topo(const std::string& config_path, int pods, int qpus_per_pod) {
  ExperimentConfig cfg = load_or_default(config_path);
  if (pods > 0) cfg.topology.pods = pods;
  if (qpus_per_pod > 0) cfg.topology.qpus_per_pod = qpus_per_pod;
  const std::size_t want =
      static_cast<std::size_t>(cfg.topology.pods) * static_cast<std::size_t>(cfg.topology.qpus_per_pod);
  if (cfg.topology.capacities.size() != want) {
    throw ConfigError("topology.capacities length must equal pods * qpus_per_pod (" +
                      std::to_string(want) + ")");
  }
  const NetworkModel net = build_network(cfg.topology);
  std::cout << "j1,j2,capacity_j1,capacity_j2,switches,latency,fidelity\n";
  for (int a = 0; a < net.qpu_count(); ++a) {
    for (int b = a + 1; b < net.qpu_count(); ++b) {
      const LinkParams& lp = net.link(a, b);
      std::cout << a << ',' << b << ',' << net.qpu(a).capacity << ','
                << net.qpu(b).capacity << ',' << lp.switches << ','
                << format_value(lp.latency) << ',' << format_value(lp.fidelity) << '\n';
    }
  }
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& widths,
              const std::string& ks, std::uint64_t seed, int restarts,
              const std::string& out_path) {
  ExperimentConfig cfg = load_or_default(config_path);
  if (!widths.empty()) {
    const auto [lo, hi] = parse_width_range(widths);
    cfg.costmodel.width_lo = lo;
    cfg.costmodel.width_hi = hi;
  }
  if (!ks.empty()) cfg.costmodel.ks = parse_int_list(ks);
  if (seed != 0) cfg.costmodel.seed = seed;
  if (restarts > 0) cfg.costmodel.restarts = restarts;
  cfg.costmodel.path.clear();  // always fit here

  const CostModel model = obtain_cost_model(cfg);
  if (!out_path.empty()) save_cost_model_file(model, out_path);
  std::cout << "k,chi_density,chi_connectivity,chi_variation,chi_intercept,r2\n";
  for (const auto& [k, c] : model.per_k) {
    std::cout << k << ',' << format_value(c.density) << ',' << format_value(c.connectivity)
              << ',' << format_value(c.variation) << ',' << format_value(c.intercept)
              << ',' << format_value(c.r2) << '\n';
  }
  if (!out_path.empty()) std::cerr << "cost model written to " << out_path << '\n';
  return 0;
}

int cmd_schedule(const std::string& config_path, const std::string& scheduler,
                 std::uint64_t seed, int m, double alpha, int range_shift,
                 const std::string& costmodel_path, const std::string& dump_dir,
                 const std::string& out_path) {
  ExperimentConfig cfg = load_or_default(config_path);
  if (!scheduler.empty()) cfg.scheduler.name = scheduler;
  if (cfg.scheduler.name != "batch" && cfg.scheduler.name != "single" &&
      cfg.scheduler.name != "baseline") {
    throw ConfigError("scheduler must be batch, single or baseline");
  }
  if (seed != 0) cfg.workload.seed = seed;
  if (m > 0) cfg.workload.total = m;
  if (alpha > 0.0) cfg.scheduler.alpha = alpha;
  if (!costmodel_path.empty()) cfg.costmodel.path = costmodel_path;
  if (!dump_dir.empty()) cfg.workload.dump_dir = dump_dir;

  CostModel model;
  if (cfg.scheduler.name == "batch") model = obtain_cost_model(cfg);
  const NetworkModel net = build_network(cfg.topology);

  if (!cfg.workload.dump_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.workload.dump_dir);
    const auto workload = sample_workload(
        workload_params(cfg.workload, cfg.workload.total, range_shift), cfg.workload.seed);
    GeneratorOptions options;
    options.qft_final_swaps = cfg.workload.qft_final_swaps;
    for (const CircuitSpec& spec : workload) {
      std::ostringstream name;
      name << "circuit_" << spec.arrival_index << '_' << to_string(spec.kind) << '_'
           << spec.width << ".txt";
      std::ofstream gates(fs::path(cfg.workload.dump_dir) / name.str());
      write_gate_list(gates, benchmark_gates(spec.kind, spec.width, options));
    }
  }

  const ScheduleTrace trace = run_cell(cfg.scheduler.name, cfg, model, net,
                                       cfg.workload.total, range_shift,
                                       cfg.scheduler.alpha, cfg.workload.seed);
  const ReportTable table = aggregate(trace);
  std::vector<RunRow> rows;
  for (const ReportRow& r : table.rows) {
    RunRow row;
    row.scheduler = cfg.scheduler.name;
    row.scenario = range_shift == 0 ? "Sc.1" : ("shift+" + std::to_string(range_shift));
    row.m = cfg.workload.total;
    row.alpha = cfg.scheduler.name == "batch" ? cfg.scheduler.alpha : 0.0;
    row.seed = cfg.workload.seed;
    row.metric = r.metric;
    row.kind = r.kind;
    row.value = r.value;
    rows.push_back(std::move(row));
  }
  if (out_path.empty()) {
    write_runs_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_runs_csv(out, rows);
  }
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = load_or_default(config_path);
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  const std::size_t rows = run_experiment(cfg);
  std::cerr << "wrote " << rows << " rows under " << cfg.output.dir << '\n';
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& runs_file,
               const std::string& out_path) {
  namespace fs = std::filesystem;
  const std::string path =
      !runs_file.empty() ? runs_file : (fs::path(in_dir) / "runs.csv").string();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const std::vector<RunRow> rows = read_runs_csv(in);
  if (out_path.empty()) {
    write_aggregate_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_aggregate_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit scheduling engine for distributed quantum processing networks"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Experiment config file (JSON)");

  auto* topo = app.add_subcommand("topo", "Print the pairwise link table of the topology");
  int topo_pods = 0;
  int topo_qpp = 0;
  topo->add_option("--pods", topo_pods, "Override pod count");
  topo->add_option("--qpus-per-pod", topo_qpp, "Override QPUs per pod");

  auto* train = app.add_subcommand("train-costmodel",
                                   "Fit the partition cost regression and report R2 per k");
  std::string train_widths, train_ks, train_out = "costmodel.txt";
  std::uint64_t train_seed = 0;
  int train_restarts = 0;
  train->add_option("--widths", train_widths, "Training width range, e.g. 10..30");
  train->add_option("--ks", train_ks, "Partition counts, e.g. 2,3,4");
  train->add_option("--seed", train_seed, "Training seed");
  train->add_option("--restarts", train_restarts, "Partitioner restarts per cut");
  train->add_option("--out", train_out, "Cost model output file");

  auto* sched = app.add_subcommand("schedule", "Run one workload through one scheduler");
  std::string sched_name, sched_costmodel, sched_dump, sched_out;
  std::uint64_t sched_seed = 0;
  int sched_m = 0;
  int sched_shift = 0;
  double sched_alpha = 0.0;
  sched->add_option("--scheduler", sched_name, "batch | single | baseline");
  sched->add_option("--seed", sched_seed, "Workload seed");
  sched->add_option("--m", sched_m, "Number of circuits");
  sched->add_option("--alpha", sched_alpha, "Cycle trigger fraction (batch)");
  sched->add_option("--scenario-shift", sched_shift, "Added to every width range");
  sched->add_option("--costmodel", sched_costmodel, "Trained cost model file");
  sched->add_option("--dump-circuits", sched_dump, "Directory for gate list dumps");
  sched->add_option("--out", sched_out, "Write the run table here instead of stdout");

  auto* exp = app.add_subcommand("experiment", "Run the full sweep from the config");
  std::string exp_out;
  exp->add_option("--out", exp_out, "Output directory override");

  auto* report = app.add_subcommand("report", "Aggregate per-run rows into summary tables");
  std::string report_in = "results", report_runs, report_out;
  report->add_option("--in", report_in, "Results directory holding runs.csv");
  report->add_option("--runs", report_runs, "Explicit runs.csv path");
  report->add_option("--out", report_out, "Write the aggregate here instead of stdout");

  // Let --config appear after the subcommand as well.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (topo->parsed()) return cmd_topo(config_path, topo_pods, topo_qpp);
    if (train->parsed()) {
      return cmd_train(config_path, train_widths, train_ks, train_seed, train_restarts,
                       train_out);
    }
    if (sched->parsed()) {
      return cmd_schedule(config_path, sched_name, sched_seed, sched_m, sched_alpha,
                          sched_shift, sched_costmodel, sched_dump, sched_out);
    }
    if (exp->parsed()) return cmd_experiment(config_path, exp_out);
    if (report->parsed()) return cmd_report(report_in, report_runs, report_out);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
