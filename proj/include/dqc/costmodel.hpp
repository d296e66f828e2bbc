#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dqc/circuit.hpp"

namespace dqc {

/// Structural features of an interaction graph that drive the partition cost
/// regression:
///   weighted_density       total edge weight over the number of qubit pairs
///   algebraic_connectivity second-smallest eigenvalue of the normalized
///                          Laplacian (isolated qubits contribute a plain
///                          unit diagonal entry)
///   coeff_variation        std/mean of the weighted qubit degrees
struct GraphFeatures {
  double weighted_density = 0.0;
  double algebraic_connectivity = 0.0;
  double coeff_variation = 0.0;
  double total_edge_weight = 0.0;
  int width = 0;
};

GraphFeatures extract_features(const InteractionGraph& g);

/// Per-k linear model for the normalized k-way cut. Feature order is fixed:
/// (density, connectivity, variation, intercept). r2 is the in-sample fit
/// quality; NaN when the training targets had zero variance.
struct CostModel {
  struct Coeffs {
    double density = 0.0;
    double connectivity = 0.0;
    double variation = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
  };
  std::map<int, Coeffs> per_k;

  bool has(int k) const { return per_k.count(k) != 0; }
};

/// Fits one ordinary-least-squares model per requested partition count k.
/// Targets are balanced k-way cut sizes divided by total edge weight; the
/// normal equations carry a tiny ridge term (1e-8) purely for conditioning.
CostModel train_cost_model(const std::vector<InteractionGraph>& dataset,
                           const std::vector<int>& ks, std::uint64_t seed,
                           int restarts = 10);

/// Estimated partition cost: the linear model rescaled by the total edge
/// weight, clamped below at zero. Throws on a k the model was not fit for.
double predict_nu(const CostModel& model, const GraphFeatures& f, int k);

/// One interaction graph per (kind, width) over an inclusive width range;
/// the standard training set.
std::vector<InteractionGraph> training_graphs(int width_lo, int width_hi,
                                              const GeneratorOptions& options = {});

/// Flat text serialization with exact decimal round-trip of every
/// coefficient.
void save_cost_model(const CostModel& model, std::ostream& out);
CostModel load_cost_model(std::istream& in);
void save_cost_model_file(const CostModel& model, const std::string& path);
CostModel load_cost_model_file(const std::string& path);

}  // namespace dqc
