#include "dqc/netgraph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dqc {

NetworkModel::NetworkModel(std::vector<Qpu> qpus) : qpus_(std::move(qpus)) {
  for (std::size_t j = 0; j < qpus_.size(); ++j) {
    if (qpus_[j].id != static_cast<int>(j)) {
      throw std::invalid_argument("QPU ids must be contiguous from 0");
    }
    if (qpus_[j].capacity < 1) {
      throw std::invalid_argument("QPU capacity must be at least 1");
    }
  }
  const std::size_t pairs = qpus_.size() * (qpus_.size() - 1) / 2;
  links_.resize(pairs);
  link_set_.assign(pairs, false);
}

const Qpu& NetworkModel::qpu(int j) const {
  if (j < 0 || j >= qpu_count()) {
    throw std::out_of_range("unknown QPU id " + std::to_string(j));
  }
  return qpus_[static_cast<std::size_t>(j)];
}

int NetworkModel::pair_index(int j1, int j2) const {
  if (j1 == j2) throw std::invalid_argument("self-link requested");
  if (j1 < 0 || j2 < 0 || j1 >= qpu_count() || j2 >= qpu_count()) {
    throw std::out_of_range("unknown QPU id in link request");
  }
  const int lo = j1 < j2 ? j1 : j2;
  const int hi = j1 < j2 ? j2 : j1;
  // Row-major upper triangle.
  return lo * qpu_count() - lo * (lo + 1) / 2 + (hi - lo - 1);
}

void NetworkModel::set_link(int j1, int j2, LinkParams params) {
  if (!(params.latency > 0.0)) {
    throw std::invalid_argument("link latency must be positive");
  }
  if (!(params.fidelity > 0.0 && params.fidelity <= 1.0)) {
    throw std::invalid_argument("link fidelity must be in (0, 1]");
  }
  const int idx = pair_index(j1, j2);
  links_[static_cast<std::size_t>(idx)] = params;
  link_set_[static_cast<std::size_t>(idx)] = true;
}

const LinkParams& NetworkModel::link(int j1, int j2) const {
  const int idx = pair_index(j1, j2);
  if (!link_set_[static_cast<std::size_t>(idx)]) {
    throw std::logic_error("link (" + std::to_string(j1) + ", " +
                           std::to_string(j2) + ") was never populated");
  }
  return links_[static_cast<std::size_t>(idx)];
}

long long NetworkModel::total_capacity(bool only_available) const {
  long long sum = 0;
  for (const Qpu& q : qpus_) {
    if (only_available && !q.available) continue;
    sum += q.capacity;
  }
  return sum;
}

std::map<int, double> NetworkModel::latency_by_class() const {
  std::map<int, double> out;
  for (int a = 0; a < qpu_count(); ++a) {
    for (int b = a + 1; b < qpu_count(); ++b) {
      const LinkParams& lp = link(a, b);
      auto [it, inserted] = out.emplace(lp.switches, lp.latency);
      if (!inserted && it->second != lp.latency) {
        throw std::logic_error("links of switch class " +
                               std::to_string(lp.switches) +
                               " have inconsistent latencies");
      }
    }
  }
  return out;
}

void NetworkModel::validate() const {
  for (bool set : link_set_) {
    if (!set) throw std::logic_error("network has unpopulated links");
  }
}

int fat_tree_switch_count(int j1, int j2, int qpus_per_pod) {
  const int pod1 = j1 / qpus_per_pod;
  const int pod2 = j2 / qpus_per_pod;
  if (pod1 != pod2) return 5;
  // Two QPUs per edge switch within a pod.
  const int edge1 = (j1 % qpus_per_pod) / 2;
  const int edge2 = (j2 % qpus_per_pod) / 2;
  return edge1 == edge2 ? 1 : 3;
}

NetworkModel build_fat_tree(int pods, int qpus_per_pod,
                            const std::vector<int>& capacities,
                            double switch_loss_db, double t_el,
                            const std::map<int, double>& fidelity_by_class) {
  if (pods < 1 || qpus_per_pod < 1) {
    throw std::invalid_argument("pods and qpus_per_pod must be positive");
  }
  if (static_cast<std::size_t>(pods) * static_cast<std::size_t>(qpus_per_pod) !=
      capacities.size()) {
    throw std::invalid_argument(
        "capacity list length must equal pods * qpus_per_pod");
  }
  if (!(t_el > 0.0)) throw std::invalid_argument("t_el must be positive");
  if (switch_loss_db < 0.0) {
    throw std::invalid_argument("switch loss must be non-negative");
  }

  std::vector<Qpu> qpus;
  qpus.reserve(capacities.size());
  for (std::size_t j = 0; j < capacities.size(); ++j) {
    qpus.push_back(Qpu{static_cast<int>(j), capacities[j], true});
  }
  NetworkModel net(std::move(qpus));

  const int count = net.qpu_count();
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      const int n_s = fat_tree_switch_count(a, b, qpus_per_pod);
      auto fit = fidelity_by_class.find(n_s);
      if (fit == fidelity_by_class.end()) {
        throw std::invalid_argument("no fidelity given for switch class " +
                                    std::to_string(n_s));
      }
      LinkParams lp;
      lp.switches = n_s;
      // Transmission efficiency of one switch: 10^(-loss_db / 10).
      lp.latency = t_el * std::pow(10.0, switch_loss_db * n_s / 10.0);
      lp.fidelity = fit->second;
      net.set_link(a, b, lp);
    }
  }
  net.validate();
  return net;
}

}  // namespace dqc
