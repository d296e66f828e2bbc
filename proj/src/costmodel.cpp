#include "dqc/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dqc/klpartition.hpp"
#include "dqc/linalg.hpp"
#include "dqc/rng.hpp"

namespace dqc {

GraphFeatures extract_features(const InteractionGraph& g) {
  if (g.width() < 2) throw std::invalid_argument("feature extraction needs width >= 2");
  const int n = g.width();
  const std::vector<long long> degrees = g.weighted_degrees();
  const double total_weight = static_cast<double>(g.total_edge_weight());

  GraphFeatures f;
  f.width = n;
  f.total_edge_weight = total_weight;
  if (total_weight == 0.0) return f;  // degenerate: no interactions at all

  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  f.weighted_density = total_weight / pairs;

  double mean = 0.0;
  for (long long d : degrees) mean += static_cast<double>(d);
  mean /= n;
  double var = 0.0;
  for (long long d : degrees) {
    const double diff = static_cast<double>(d) - mean;
    var += diff * diff;
  }
  var /= n;
  f.coeff_variation = std::sqrt(var) / mean;

  // Normalized Laplacian: unit diagonal, -w(i,j)/sqrt(d_i d_j) off-diagonal.
  std::vector<std::vector<double>> lap(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) lap[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  for (const auto& [edge, weight] : g.edges()) {
    const auto i = static_cast<std::size_t>(edge.first);
    const auto j = static_cast<std::size_t>(edge.second);
    const double norm = std::sqrt(static_cast<double>(degrees[i]) *
                                  static_cast<double>(degrees[j]));
    lap[i][j] = -static_cast<double>(weight) / norm;
    lap[j][i] = lap[i][j];
  }
  const std::vector<double> eig = symmetric_eigenvalues(std::move(lap));
  f.algebraic_connectivity = std::max(0.0, eig[1]);
  return f;
}

CostModel train_cost_model(const std::vector<InteractionGraph>& dataset,
                           const std::vector<int>& ks, std::uint64_t seed,
                           int restarts) {
  if (dataset.empty()) throw std::invalid_argument("training set is empty");
  int min_width = std::numeric_limits<int>::max();
  for (const InteractionGraph& g : dataset) min_width = std::min(min_width, g.width());
  for (int k : ks) {
    if (k < 2 || k > min_width) {
      throw std::invalid_argument("every k must lie in [2, min dataset width]");
    }
  }

  std::vector<GraphFeatures> features;
  features.reserve(dataset.size());
  for (const InteractionGraph& g : dataset) features.push_back(extract_features(g));

  CostModel model;
  for (int k : ks) {
    // Normalized cut targets from the partitioner.
    std::vector<double> target(dataset.size());
    for (std::size_t d = 0; d < dataset.size(); ++d) {
      const double weight = features[d].total_edge_weight;
      if (weight <= 0.0) {
        throw std::invalid_argument("training graph without two-qubit gates");
      }
      const long long cut = balanced_cut_size(
          dataset[d], k, derive_seed(seed, streams::kPartition, d * 8 + static_cast<std::size_t>(k)),
          restarts);
      target[d] = static_cast<double>(cut) / weight;
    }

    // Normal equations over (density, connectivity, variation, 1) with a tiny
    // ridge term for conditioning.
    constexpr int kDim = 4;
    std::vector<std::vector<double>> ata(kDim, std::vector<double>(kDim, 0.0));
    std::vector<double> aty(kDim, 0.0);
    for (std::size_t d = 0; d < dataset.size(); ++d) {
      const double row[kDim] = {features[d].weighted_density,
                                features[d].algebraic_connectivity,
                                features[d].coeff_variation, 1.0};
      for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += row[i] * row[j];
        aty[static_cast<std::size_t>(i)] += row[i] * target[d];
      }
    }
    for (int i = 0; i < kDim; ++i) ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += 1e-8;

    std::vector<double> beta;
    try {
      beta = solve_linear(ata, aty);
    } catch (const std::runtime_error&) {
      std::ostringstream msg;
      msg << "cost model training failed for k=" << k << ": singular design matrix ("
          << dataset.size() << " samples, min width " << min_width << ")";
      throw std::runtime_error(msg.str());
    }

    double mean_target = 0.0;
    for (double y : target) mean_target += y;
    mean_target /= static_cast<double>(target.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t d = 0; d < dataset.size(); ++d) {
      const double pred = beta[0] * features[d].weighted_density +
                          beta[1] * features[d].algebraic_connectivity +
                          beta[2] * features[d].coeff_variation + beta[3];
      ss_res += (target[d] - pred) * (target[d] - pred);
      ss_tot += (target[d] - mean_target) * (target[d] - mean_target);
    }

    CostModel::Coeffs coeffs;
    coeffs.density = beta[0];
    coeffs.connectivity = beta[1];
    coeffs.variation = beta[2];
    coeffs.intercept = beta[3];
    coeffs.r2 = ss_tot == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                              : 1.0 - ss_res / ss_tot;
    model.per_k[k] = coeffs;
  }
  return model;
}

double predict_nu(const CostModel& model, const GraphFeatures& f, int k) {
  auto it = model.per_k.find(k);
  if (it == model.per_k.end()) {
    throw std::out_of_range("cost model has no fit for k=" + std::to_string(k));
  }
  const CostModel::Coeffs& c = it->second;
  const double normalized = c.density * f.weighted_density +
                            c.connectivity * f.algebraic_connectivity +
                            c.variation * f.coeff_variation + c.intercept;
  return std::max(0.0, normalized * f.total_edge_weight);
}

std::vector<InteractionGraph> training_graphs(int width_lo, int width_hi,
                                              const GeneratorOptions& options) {
  if (width_lo < 2 || width_hi < width_lo) {
    throw std::invalid_argument("bad training width range");
  }
  std::vector<InteractionGraph> graphs;
  for (CircuitKind kind : kAllCircuitKinds) {
    for (int w = width_lo; w <= width_hi; ++w) {
      graphs.push_back(generate_circuit(kind, w, options).graph);
    }
  }
  return graphs;
}

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_cost_model(const CostModel& model, std::ostream& out) {
  out << "costmodel v1\n";
  out << "# columns: k chi_density chi_connectivity chi_variation chi_intercept r2\n";
  out << "# r2 is the in-sample fit on the training graphs\n";
  for (const auto& [k, c] : model.per_k) {
    out << "k " << k << ' ' << exact(c.density) << ' ' << exact(c.connectivity)
        << ' ' << exact(c.variation) << ' ' << exact(c.intercept) << " r2 "
        << exact(c.r2) << '\n';
  }
}

CostModel load_cost_model(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != "costmodel v1") {
    throw std::runtime_error("unrecognized cost model header: " + header);
  }
  CostModel model;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag_k, tag_r2;
    int k = 0;
    CostModel::Coeffs c;
    ls >> tag_k >> k >> c.density >> c.connectivity >> c.variation >> c.intercept >>
        tag_r2;
    if (!ls || tag_k != "k" || tag_r2 != "r2") {
      throw std::runtime_error("malformed cost model line: " + line);
    }
    std::string r2_text;
    ls >> r2_text;
    c.r2 = std::strtod(r2_text.c_str(), nullptr);
    model.per_k[k] = c;
  }
  if (model.per_k.empty()) throw std::runtime_error("cost model file had no rows");
  return model;
}

void save_cost_model_file(const CostModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cost model file: " + path);
  save_cost_model(model, out);
}

CostModel load_cost_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read cost model file: " + path);
  return load_cost_model(in);
}

}  // namespace dqc
