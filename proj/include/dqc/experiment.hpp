#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dqc/config.hpp"
#include "dqc/costmodel.hpp"
#include "dqc/metrics.hpp"

namespace dqc {

inline constexpr const char* kEngineVersion = "0.1.0";

/// One metric row of one run, with its full sweep context.
struct RunRow {
  std::string scheduler;
  std::string scenario;
  int m = 0;
  double alpha = 0.0;  // 0 for schedulers that have no cycle trigger
  std::uint64_t seed = 0;
  std::string metric;
  std::string kind;
  double value = 0.0;
};

/// Loads the configured cost model from file, or trains it on the standard
/// per-(kind, width) graph set.
CostModel obtain_cost_model(const ExperimentConfig& cfg);

/// One scheduling run for a given sweep cell.
ScheduleTrace run_cell(const std::string& scheduler, const ExperimentConfig& cfg,
                       const CostModel& model, const NetworkModel& net,
                       int m, int range_shift, double alpha,
                       std::uint64_t workload_seed);

/// Full sweep: every (scheduler, scenario, M, switch loss, alpha, seed pair)
/// cell in deterministic order.
std::vector<RunRow> run_experiment_rows(const ExperimentConfig& cfg);

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows);
std::vector<RunRow> read_runs_csv(std::istream& in);

/// Aggregation is a pure fold over per-run rows: mean and sample standard
/// deviation across seeds per sweep cell and metric.
void write_aggregate_csv(std::ostream& out, const std::vector<RunRow>& rows);

/// Runs the sweep and persists runs.csv, aggregate.csv and manifest.txt under
/// the configured output directory. Returns the number of per-run rows.
std::size_t run_experiment(const ExperimentConfig& cfg);

}  // namespace dqc
