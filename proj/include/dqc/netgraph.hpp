#pragma once

#include <map>
#include <vector>

namespace dqc {

/// One processing node. Capacity counts computing qubits. The `available`
/// flag is a static configuration attribute (e.g. a node taken out of
/// service); runtime busy/idle bookkeeping lives in the scheduler, not here.
struct Qpu {
  int id = 0;
  int capacity = 0;
  bool available = true;
};

/// Parameters of the logical link between one unordered QPU pair. Latency is
/// the time to establish one entangled pair, expressed as a multiple of the
/// decoherence time; fidelity is the entanglement fidelity in (0, 1].
/// `switches` records the number of optical switches on the path for
/// switch-based topologies (0 when not applicable).
struct LinkParams {
  double latency = 0.0;
  double fidelity = 1.0;
  int switches = 0;
};

/// Complete logical graph over the QPUs: every unordered pair carries link
/// parameters, there are no self-links, and lookup is symmetric. The model
/// is immutable once populated and safe to share read-only across concurrent
/// runs. All times are stored normalized by the decoherence time, so the
/// model carries no absolute time unit.
class NetworkModel {
 public:
  NetworkModel() = default;
  explicit NetworkModel(std::vector<Qpu> qpus);

  int qpu_count() const { return static_cast<int>(qpus_.size()); }
  const std::vector<Qpu>& qpus() const { return qpus_; }
  const Qpu& qpu(int j) const;

  /// Sets both directions of the (j1, j2) link. Throws on self-links,
  /// unknown ids, non-positive latency, or fidelity outside (0, 1].
  void set_link(int j1, int j2, LinkParams params);

  /// Symmetric lookup; throws if the pair was never populated.
  const LinkParams& link(int j1, int j2) const;

  /// Sum of capacities, restricted to statically available QPUs on request.
  long long total_capacity(bool only_available = false) const;

  /// Latency (resp. fidelity) per switch class, collected from the stored
  /// links. Throws if two links of the same class disagree: the execution
  /// time model assumes class-uniform link parameters.
  std::map<int, double> latency_by_class() const;

  /// Throws unless every unordered pair has been populated.
  void validate() const;

 private:
  int pair_index(int j1, int j2) const;

  std::vector<Qpu> qpus_;
  std::vector<LinkParams> links_;
  std::vector<bool> link_set_;
};

/// Number of optical switches on the path between two QPU slots of a fat
/// tree: 1 under a shared edge switch (edge switches host two QPUs each),
/// 3 within a pod across edge switches, 5 across pods.
int fat_tree_switch_count(int j1, int j2, int qpus_per_pod);

/// Builds the fat-tree interconnect. Capacities are assigned to QPU ids in
/// the order given. Latency of an n-switch path is t_el divided by the
/// per-switch transmission efficiency raised to n, with the efficiency
/// derived from the per-switch loss in dB; fidelity comes from the
/// switch-class map. Throws on dimension mismatch, non-positive t_el,
/// negative loss, or a missing fidelity class.
NetworkModel build_fat_tree(int pods, int qpus_per_pod,
                            const std::vector<int>& capacities,
                            double switch_loss_db, double t_el,
                            const std::map<int, double>& fidelity_by_class);

}  // namespace dqc
