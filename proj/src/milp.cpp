#include "dqc/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dqc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string var_name(const char* prefix, std::initializer_list<int> parts) {
  std::string name = prefix;
  for (int p : parts) {
    name += '_';
    name += std::to_string(p);
  }
  return name;
}

}  // namespace

double BatchProblem::pair_cost(int width, int j1, int j2) const {
  const MilpLink& link = links[static_cast<std::size_t>(j1)][static_cast<std::size_t>(j2)];
  return omega0 * width * link.latency + omega1 * (1.0 - link.fidelity);
}

double SingleProblem::pair_cost(int j1, int j2) const {
  const MilpLink& link = links[static_cast<std::size_t>(j1)][static_cast<std::size_t>(j2)];
  return omega0 * width * link.latency + omega1 * (1.0 - link.fidelity);
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeout: return "feasible-timeout";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

namespace {

void check_links(std::size_t qpu_count, const std::vector<std::vector<MilpLink>>& links) {
  if (links.size() != qpu_count) {
    throw std::invalid_argument("link matrix must be J x J");
  }
  for (const auto& row : links) {
    if (row.size() != qpu_count) throw std::invalid_argument("link matrix must be J x J");
  }
}

std::vector<std::pair<int, int>> all_pairs(int j_count) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < j_count; ++a) {
    for (int b = a + 1; b < j_count; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace

MilpInstance build_batch_milp(const BatchProblem& p) {
  check_links(p.qpus.size(), p.links);
  if (p.zeta < 0 || p.zeta > static_cast<int>(p.circuits.size())) {
    throw std::invalid_argument("zeta must lie in [0, batch size]");
  }
  for (const BatchCircuit& c : p.circuits) {
    if (c.k_max < 1 || static_cast<int>(c.nu.size()) < c.k_max) {
      throw std::invalid_argument("circuit needs nu values for k = 1..k_max");
    }
    for (double nu : c.nu) {
      if (nu < 0.0) throw std::invalid_argument("nu must be non-negative");
    }
  }
  if (p.omega0 < 0.0 || p.omega1 < 0.0) {
    throw std::invalid_argument("objective weights must be non-negative");
  }

  MilpInstance inst;
  inst.source = p;
  const int n_circ = static_cast<int>(p.circuits.size());
  const int n_qpu = static_cast<int>(p.qpus.size());
  inst.pairs = all_pairs(n_qpu);
  const int n_pair = static_cast<int>(inst.pairs.size());

  auto add_var = [&inst](std::string name, bool binary, double ub) {
    inst.vars.push_back(MilpVar{std::move(name), binary, 0.0, ub});
    return static_cast<int>(inst.vars.size()) - 1;
  };

  inst.r_index.assign(static_cast<std::size_t>(n_circ), {});
  inst.y_index.assign(static_cast<std::size_t>(n_circ), {});
  inst.z_index.assign(static_cast<std::size_t>(n_circ), {});
  inst.x_index.assign(static_cast<std::size_t>(n_circ), {});
  for (int m = 0; m < n_circ; ++m) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(m)];
    auto& r_row = inst.r_index[static_cast<std::size_t>(m)];
    for (int j = 0; j < n_qpu; ++j) {
      // Unavailable QPUs have their assignment variables fixed to zero.
      const double ub = p.qpus[static_cast<std::size_t>(j)].available ? 1.0 : 0.0;
      r_row.push_back(add_var(var_name("r", {c.id, p.qpus[static_cast<std::size_t>(j)].id}), true, ub));
    }
    auto& y_row = inst.y_index[static_cast<std::size_t>(m)];
    for (int k = 1; k <= c.k_max; ++k) {
      y_row.push_back(add_var(var_name("y", {c.id, k}), true, 1.0));
    }
    auto& z_row = inst.z_index[static_cast<std::size_t>(m)];
    for (const auto& [a, b] : inst.pairs) {
      z_row.push_back(add_var(
          var_name("z", {c.id, p.qpus[static_cast<std::size_t>(a)].id, p.qpus[static_cast<std::size_t>(b)].id}),
          false, 1.0));
    }
    auto& x_rows = inst.x_index[static_cast<std::size_t>(m)];
    x_rows.resize(static_cast<std::size_t>(c.k_max));
    for (int k = 1; k <= c.k_max; ++k) {
      for (const auto& [a, b] : inst.pairs) {
        x_rows[static_cast<std::size_t>(k - 1)].push_back(add_var(
            var_name("x", {c.id, k, p.qpus[static_cast<std::size_t>(a)].id, p.qpus[static_cast<std::size_t>(b)].id}),
            false, 1.0));
      }
    }
  }

  // (1) exactly zeta circuits receive a partition count.
  {
    MilpConstraint con;
    con.sense = 'E';
    con.rhs = p.zeta;
    for (int m = 0; m < n_circ; ++m) {
      for (int yv : inst.y_index[static_cast<std::size_t>(m)]) con.terms.push_back({yv, 1.0});
    }
    inst.constraints.push_back(std::move(con));
  }
  for (int m = 0; m < n_circ; ++m) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(m)];
    // (2) allocated capacity covers the circuit width when it is assigned.
    MilpConstraint cap;
    cap.sense = 'G';
    cap.rhs = 0.0;
    for (int j = 0; j < n_qpu; ++j) {
      const MilpQpu& q = p.qpus[static_cast<std::size_t>(j)];
      cap.terms.push_back({inst.r_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)],
                           static_cast<double>(q.available ? q.capacity : 0)});
    }
    for (int k = 1; k <= c.k_max; ++k) {
      cap.terms.push_back({inst.y_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)],
                           -static_cast<double>(c.width)});
    }
    inst.constraints.push_back(std::move(cap));

    // (3) the number of QPUs equals the declared partition count.
    MilpConstraint parts;
    parts.sense = 'E';
    parts.rhs = 0.0;
    for (int j = 0; j < n_qpu; ++j) {
      parts.terms.push_back({inst.r_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)], 1.0});
    }
    for (int k = 1; k <= c.k_max; ++k) {
      parts.terms.push_back({inst.y_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)],
                             -static_cast<double>(k)});
    }
    inst.constraints.push_back(std::move(parts));
  }
  // (4) a QPU hosts at most one circuit.
  for (int j = 0; j < n_qpu; ++j) {
    MilpConstraint one;
    one.sense = 'L';
    one.rhs = 1.0;
    for (int m = 0; m < n_circ; ++m) {
      one.terms.push_back({inst.r_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)], 1.0});
    }
    inst.constraints.push_back(std::move(one));
  }
  // (5) z = r * r and (6) x = z * y, linearized.
  for (int m = 0; m < n_circ; ++m) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(m)];
    for (int pi = 0; pi < n_pair; ++pi) {
      const auto [a, b] = inst.pairs[static_cast<std::size_t>(pi)];
      const int rv1 = inst.r_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(a)];
      const int rv2 = inst.r_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)];
      const int zv = inst.z_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(pi)];
      inst.constraints.push_back({{{rv1, 1.0}, {rv2, 1.0}, {zv, -1.0}}, 'L', 1.0});
      inst.constraints.push_back({{{zv, 1.0}, {rv1, -1.0}}, 'L', 0.0});
      inst.constraints.push_back({{{zv, 1.0}, {rv2, -1.0}}, 'L', 0.0});
      for (int k = 1; k <= c.k_max; ++k) {
        const int yv = inst.y_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)];
        const int xv =
            inst.x_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(pi)];
        inst.constraints.push_back({{{zv, 1.0}, {yv, 1.0}, {xv, -1.0}}, 'L', 1.0});
        inst.constraints.push_back({{{xv, 1.0}, {zv, -1.0}}, 'L', 0.0});
        inst.constraints.push_back({{{xv, 1.0}, {yv, -1.0}}, 'L', 0.0});
      }
    }
  }

  // Objective: partition cost times pair cost on the x products. k = 1 has no
  // QPU pair, so nu for one part never appears.
  for (int m = 0; m < n_circ; ++m) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(m)];
    for (int k = 2; k <= c.k_max; ++k) {
      for (int pi = 0; pi < n_pair; ++pi) {
        const auto [a, b] = inst.pairs[static_cast<std::size_t>(pi)];
        const double coef = c.nu[static_cast<std::size_t>(k - 1)] * p.pair_cost(c.width, a, b);
        inst.objective.push_back(
            {inst.x_index[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(pi)],
             coef});
      }
    }
  }
  return inst;
}

MilpInstance build_single_milp(const SingleProblem& p) {
  check_links(p.qpus.size(), p.links);
  if (p.k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (p.width < 1) throw std::invalid_argument("width must be >= 1");

  MilpInstance inst;
  inst.source = p;
  const int n_qpu = static_cast<int>(p.qpus.size());
  inst.pairs = all_pairs(n_qpu);

  auto add_var = [&inst](std::string name, bool binary, double ub) {
    inst.vars.push_back(MilpVar{std::move(name), binary, 0.0, ub});
    return static_cast<int>(inst.vars.size()) - 1;
  };

  inst.r_index.assign(1, {});
  inst.z_index.assign(1, {});
  for (int j = 0; j < n_qpu; ++j) {
    const double ub = p.qpus[static_cast<std::size_t>(j)].available ? 1.0 : 0.0;
    inst.r_index[0].push_back(
        add_var(var_name("r", {p.circuit_id, p.qpus[static_cast<std::size_t>(j)].id}), true, ub));
  }
  for (const auto& [a, b] : inst.pairs) {
    inst.z_index[0].push_back(add_var(
        var_name("z", {p.circuit_id, p.qpus[static_cast<std::size_t>(a)].id, p.qpus[static_cast<std::size_t>(b)].id}),
        false, 1.0));
  }

  // (1) capacity covers the width.
  MilpConstraint cap;
  cap.sense = 'G';
  cap.rhs = p.width;
  for (int j = 0; j < n_qpu; ++j) {
    const MilpQpu& q = p.qpus[static_cast<std::size_t>(j)];
    cap.terms.push_back({inst.r_index[0][static_cast<std::size_t>(j)],
                         static_cast<double>(q.available ? q.capacity : 0)});
  }
  inst.constraints.push_back(std::move(cap));

  // (2) at most k_max QPUs.
  MilpConstraint kcap;
  kcap.sense = 'L';
  kcap.rhs = p.k_max;
  for (int j = 0; j < n_qpu; ++j) {
    kcap.terms.push_back({inst.r_index[0][static_cast<std::size_t>(j)], 1.0});
  }
  inst.constraints.push_back(std::move(kcap));

  // (3) z = r * r linearization and objective.
  for (std::size_t pi = 0; pi < inst.pairs.size(); ++pi) {
    const auto [a, b] = inst.pairs[pi];
    const int rv1 = inst.r_index[0][static_cast<std::size_t>(a)];
    const int rv2 = inst.r_index[0][static_cast<std::size_t>(b)];
    const int zv = inst.z_index[0][pi];
    inst.constraints.push_back({{{rv1, 1.0}, {rv2, 1.0}, {zv, -1.0}}, 'L', 1.0});
    inst.constraints.push_back({{{zv, 1.0}, {rv1, -1.0}}, 'L', 0.0});
    inst.constraints.push_back({{{zv, 1.0}, {rv2, -1.0}}, 'L', 0.0});
    inst.objective.push_back({zv, p.pair_cost(a, b)});
  }
  return inst;
}

void write_lp(const MilpInstance& inst, std::ostream& out) {
  // Full double precision so external solvers see the exact instance.
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "Minimize\n obj:";
  bool first = true;
  for (const MilpTerm& t : inst.objective) {
    const double c = t.coef;
    if (first) {
      out << ' ' << num(c) << ' ' << inst.vars[static_cast<std::size_t>(t.var)].name;
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ") << num(std::abs(c)) << ' '
          << inst.vars[static_cast<std::size_t>(t.var)].name;
    }
  }
  if (first) out << " 0";
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const MilpConstraint& con = inst.constraints[i];
    out << " c" << i << ':';
    bool lead = true;
    for (const MilpTerm& t : con.terms) {
      if (lead) {
        out << ' ' << num(t.coef) << ' ' << inst.vars[static_cast<std::size_t>(t.var)].name;
        lead = false;
      } else {
        out << (t.coef < 0 ? " - " : " + ") << num(std::abs(t.coef)) << ' '
            << inst.vars[static_cast<std::size_t>(t.var)].name;
      }
    }
    out << (con.sense == 'L' ? " <= " : con.sense == 'G' ? " >= " : " = ")
        << num(con.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const MilpVar& v : inst.vars) {
    out << ' ' << num(v.lb) << " <= " << v.name << " <= " << num(v.ub) << '\n';
  }
  out << "Binaries\n";
  for (const MilpVar& v : inst.vars) {
    if (v.is_binary) out << ' ' << v.name;
  }
  out << "\nEnd\n";
}

// ---------------------------------------------------------------------------
// Built-in exact solver
// ---------------------------------------------------------------------------

namespace {

struct Choice {
  double cost = 0.0;
  std::uint64_t mask = 0;    // bit per QPU position
  long long capacity = 0;
  std::vector<int> qpu_ids;  // sorted ascending
  int k = 0;
};

// All feasible (k, QPU subset) choices for one circuit, cheapest first.
// Subsets are enumerated over QPUs sorted by descending capacity, so ties in
// cost resolve deterministically.
std::vector<Choice> enumerate_choices(int width, int k_max,
                                      const std::vector<MilpQpu>& qpus,
                                      const std::vector<int>& order,
                                      double nu_for_k(int, const void*), const void* ctx,
                                      double pair_cost(int, int, const void*)) {
  std::vector<Choice> choices;
  const int n = static_cast<int>(order.size());
  std::vector<int> idx;
  for (int k = 1; k <= k_max && k <= n; ++k) {
    idx.assign(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      long long cap = 0;
      for (int i = 0; i < k; ++i) {
        cap += qpus[static_cast<std::size_t>(order[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])])].capacity;
      }
      if (cap >= width) {
        Choice ch;
        ch.k = k;
        ch.capacity = cap;
        double pair_sum = 0.0;
        for (int i = 0; i < k; ++i) {
          const int pos_i = order[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          ch.mask |= 1ULL << pos_i;
          ch.qpu_ids.push_back(qpus[static_cast<std::size_t>(pos_i)].id);
          for (int j = i + 1; j < k; ++j) {
            const int pos_j = order[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            pair_sum += pair_cost(pos_i, pos_j, ctx);
          }
        }
        ch.cost = k >= 2 ? nu_for_k(k, ctx) * pair_sum : 0.0;
        std::sort(ch.qpu_ids.begin(), ch.qpu_ids.end());
        choices.push_back(std::move(ch));
      }
      // next combination
      int i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  std::stable_sort(choices.begin(), choices.end(), [](const Choice& a, const Choice& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.k != b.k) return a.k < b.k;
    return a.qpu_ids < b.qpu_ids;
  });
  return choices;
}

std::vector<int> capacity_order(const std::vector<MilpQpu>& qpus) {
  std::vector<int> order;
  for (std::size_t j = 0; j < qpus.size(); ++j) {
    if (qpus[j].available) order.push_back(static_cast<int>(j));
  }
  std::sort(order.begin(), order.end(), [&qpus](int a, int b) {
    const MilpQpu& qa = qpus[static_cast<std::size_t>(a)];
    const MilpQpu& qb = qpus[static_cast<std::size_t>(b)];
    if (qa.capacity != qb.capacity) return qa.capacity > qb.capacity;
    return qa.id < qb.id;
  });
  return order;
}

struct BatchSearch {
  const BatchProblem* problem = nullptr;
  std::vector<int> branch_order;                 // circuit positions, hardest first
  std::vector<std::vector<Choice>> choices;      // per branch position
  std::vector<std::vector<double>> suffix_min_cost;    // sorted ascending per depth
  std::vector<std::vector<double>> suffix_min_prefix;  // prefix sums of the above
  std::vector<std::vector<long long>> suffix_width_prefix;  // prefix sums of sorted widths
  double best_cost = kInf;
  std::vector<int> best_choice;   // per depth: index into choices, -1 = skipped
  std::vector<int> cur_choice;
  long long nodes = 0;
  bool timed_out = false;
  std::chrono::steady_clock::time_point deadline;

  double bound_cost(int depth, int need) const {
    if (need <= 0) return 0.0;
    const auto& pre = suffix_min_prefix[static_cast<std::size_t>(depth)];
    if (need > static_cast<int>(pre.size())) return kInf;
    return pre[static_cast<std::size_t>(need - 1)];
  }

  long long bound_width(int depth, int need) const {
    if (need <= 0) return 0;
    const auto& pre = suffix_width_prefix[static_cast<std::size_t>(depth)];
    if (need > static_cast<int>(pre.size())) return std::numeric_limits<long long>::max();
    return pre[static_cast<std::size_t>(need - 1)];
  }

  void dfs(int depth, std::uint64_t used, int assigned, double partial, long long free_cap) {
    if (timed_out) return;
    if ((++nodes & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    const int total = static_cast<int>(branch_order.size());
    const int need = problem->zeta - assigned;
    if (need == 0) {
      // Remaining circuits are all left out.
      if (partial < best_cost) {
        best_cost = partial;
        best_choice = cur_choice;
        for (int d = depth; d < total; ++d) best_choice[static_cast<std::size_t>(d)] = -1;
      }
      return;
    }
    if (depth == total) return;  // need > 0 but nothing left

    const auto& options = choices[static_cast<std::size_t>(depth)];
    const double rest_bound = bound_cost(depth + 1, need - 1);
    for (std::size_t ci = 0; ci < options.size(); ++ci) {
      const Choice& ch = options[ci];
      if (partial + ch.cost + rest_bound >= best_cost) break;  // cost-sorted
      if (ch.mask & used) continue;
      if (bound_width(depth + 1, need - 1) > free_cap - ch.capacity) continue;
      cur_choice[static_cast<std::size_t>(depth)] = static_cast<int>(ci);
      dfs(depth + 1, used | ch.mask, assigned + 1, partial + ch.cost, free_cap - ch.capacity);
      if (timed_out) return;
    }
    // Leave this circuit unassigned when the skip budget allows it.
    if (total - depth - 1 >= need) {
      if (partial + bound_cost(depth + 1, need) < best_cost &&
          bound_width(depth + 1, need) <= free_cap) {
        cur_choice[static_cast<std::size_t>(depth)] = -1;
        dfs(depth + 1, used, assigned, partial, free_cap);
      }
    }
    cur_choice[static_cast<std::size_t>(depth)] = -2;
  }
};

SolveResult solve_batch(const BatchProblem& p, double time_limit_s) {
  const auto started = std::chrono::steady_clock::now();
  const int n_circ = static_cast<int>(p.circuits.size());

  BatchSearch search;
  search.problem = &p;
  search.deadline = started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(time_limit_s));

  // Hardest circuits first: descending nu(k=2) * width.
  search.branch_order.resize(static_cast<std::size_t>(n_circ));
  for (int m = 0; m < n_circ; ++m) search.branch_order[static_cast<std::size_t>(m)] = m;
  auto hardness = [&p](int m) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(m)];
    const double nu2 = c.k_max >= 2 ? c.nu[1] : 0.0;
    return nu2 * c.width;
  };
  std::stable_sort(search.branch_order.begin(), search.branch_order.end(),
                   [&hardness](int a, int b) { return hardness(a) > hardness(b); });

  const std::vector<int> order = capacity_order(p.qpus);
  long long free_cap = 0;
  for (int pos : order) free_cap += p.qpus[static_cast<std::size_t>(pos)].capacity;

  struct Ctx {
    const BatchProblem* p;
    const BatchCircuit* c;
  };
  for (int d = 0; d < n_circ; ++d) {
    const BatchCircuit& c = p.circuits[static_cast<std::size_t>(search.branch_order[static_cast<std::size_t>(d)])];
    Ctx ctx{&p, &c};
    search.choices.push_back(enumerate_choices(
        c.width, c.k_max, p.qpus, order,
        [](int k, const void* v) {
          return static_cast<const Ctx*>(v)->c->nu[static_cast<std::size_t>(k - 1)];
        },
        &ctx,
        [](int a, int b, const void* v) {
          const Ctx* cx = static_cast<const Ctx*>(v);
          return cx->p->pair_cost(cx->c->width, a, b);
        }));
  }

  // Suffix bounds over the branch order: the `need` cheapest per-circuit
  // minimum costs, and the `need` smallest widths, of everything not yet
  // branched on.
  search.suffix_min_cost.assign(static_cast<std::size_t>(n_circ) + 1, {});
  search.suffix_min_prefix.assign(static_cast<std::size_t>(n_circ) + 1, {});
  search.suffix_width_prefix.assign(static_cast<std::size_t>(n_circ) + 1, {});
  for (int d = n_circ - 1; d >= 0; --d) {
    auto mins = search.suffix_min_cost[static_cast<std::size_t>(d) + 1];
    const auto& opts = search.choices[static_cast<std::size_t>(d)];
    mins.push_back(opts.empty() ? kInf : opts.front().cost);
    std::sort(mins.begin(), mins.end());
    search.suffix_min_cost[static_cast<std::size_t>(d)] = mins;
    std::vector<double> pre(mins.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mins.size(); ++i) {
      acc += mins[i];
      pre[i] = acc;
    }
    search.suffix_min_prefix[static_cast<std::size_t>(d)] = std::move(pre);

    std::vector<long long> widths;
    for (int dd = d; dd < n_circ; ++dd) {
      widths.push_back(p.circuits[static_cast<std::size_t>(search.branch_order[static_cast<std::size_t>(dd)])].width);
    }
    std::sort(widths.begin(), widths.end());
    std::vector<long long> wpre(widths.size());
    long long wacc = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      wacc += widths[i];
      wpre[i] = wacc;
    }
    search.suffix_width_prefix[static_cast<std::size_t>(d)] = std::move(wpre);
  }

  search.cur_choice.assign(static_cast<std::size_t>(n_circ), -2);
  search.best_choice.assign(static_cast<std::size_t>(n_circ), -2);
  search.dfs(0, 0, 0, 0.0, free_cap);

  SolveResult result;
  result.plan.solver = "builtin-bnb";
  result.plan.nodes = search.nodes;
  result.plan.zeta = p.zeta;
  result.plan.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  if (search.best_cost == kInf) {
    // A timeout without an incumbent proves nothing; the caller treats it as
    // infeasible at this zeta.
    result.status = SolveStatus::Infeasible;
    return result;
  }
  result.status = search.timed_out ? SolveStatus::FeasibleTimeout : SolveStatus::Optimal;
  result.plan.status = result.status;
  result.plan.objective = search.best_cost;
  result.plan.circuits.resize(static_cast<std::size_t>(n_circ));
  for (int d = 0; d < n_circ; ++d) {
    const int m = search.branch_order[static_cast<std::size_t>(d)];
    CircuitAssignment& ca = result.plan.circuits[static_cast<std::size_t>(m)];
    ca.circuit_id = p.circuits[static_cast<std::size_t>(m)].id;
    const int ci = search.best_choice[static_cast<std::size_t>(d)];
    if (ci >= 0) {
      ca.assigned = true;
      ca.qpu_ids = search.choices[static_cast<std::size_t>(d)][static_cast<std::size_t>(ci)].qpu_ids;
    }
  }
  return result;
}

SolveResult solve_single(const SingleProblem& p, double time_limit_s) {
  (void)time_limit_s;  // enumeration at this scale is immediate
  const auto started = std::chrono::steady_clock::now();
  const std::vector<int> order = capacity_order(p.qpus);

  struct Ctx {
    const SingleProblem* p;
  } ctx{&p};
  const std::vector<Choice> choices = enumerate_choices(
      p.width, p.k_max, p.qpus, order, [](int, const void*) { return 1.0; }, &ctx,
      [](int a, int b, const void* v) {
        return static_cast<const Ctx*>(v)->p->pair_cost(a, b);
      });

  SolveResult result;
  result.plan.solver = "builtin-bnb";
  result.plan.nodes = static_cast<long long>(choices.size());
  result.plan.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  if (choices.empty()) {
    result.status = SolveStatus::Infeasible;
    return result;
  }
  const Choice& best = choices.front();
  result.status = SolveStatus::Optimal;
  result.plan.status = SolveStatus::Optimal;
  result.plan.objective = best.cost;
  result.plan.zeta = 1;
  CircuitAssignment ca;
  ca.circuit_id = p.circuit_id;
  ca.assigned = true;
  ca.qpu_ids = best.qpu_ids;
  result.plan.circuits.push_back(std::move(ca));
  return result;
}

}  // namespace

SolveResult BranchAndBoundSolver::solve(const MilpInstance& inst, double time_limit_s) {
  if (std::holds_alternative<BatchProblem>(inst.source)) {
    return solve_batch(std::get<BatchProblem>(inst.source), time_limit_s);
  }
  return solve_single(std::get<SingleProblem>(inst.source), time_limit_s);
}

SolveResult solve(const MilpInstance& inst, double time_limit_s, MilpSolver* backend) {
  BranchAndBoundSolver builtin;
  MilpSolver* solver = backend ? backend : &builtin;
  SolveResult result = solver->solve(inst, time_limit_s);
  result.plan.solver = solver->name();
  return result;
}

AssignmentPlan solve_batch_with_zeta_relaxation(BatchProblem p, double time_limit_s,
                                                MilpSolver* backend) {
  const int batch_size = static_cast<int>(p.circuits.size());
  for (int zeta = batch_size; zeta >= 1; --zeta) {
    p.zeta = zeta;
    const MilpInstance inst = build_batch_milp(p);
    SolveResult result = solve(inst, time_limit_s, backend);
    if (result.status != SolveStatus::Infeasible) {
      return result.plan;
    }
  }
  AssignmentPlan empty;
  empty.solver = backend ? backend->name() : "builtin-bnb";
  empty.status = SolveStatus::Optimal;
  empty.zeta = 0;
  empty.circuits.resize(static_cast<std::size_t>(batch_size));
  for (int m = 0; m < batch_size; ++m) {
    empty.circuits[static_cast<std::size_t>(m)].circuit_id = p.circuits[static_cast<std::size_t>(m)].id;
  }
  return empty;
}

}  // namespace dqc
