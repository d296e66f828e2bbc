#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace dqc {

/// One circuit of a batch assignment problem. `nu[k-1]` is the partition
/// cost coefficient used when the circuit is split into k parts; the k=1
/// entry never contributes (a single part has no QPU pair).
struct BatchCircuit {
  int id = 0;
  int width = 0;
  int k_max = 1;
  std::vector<double> nu;  // size k_max, indexed by k-1
};

struct MilpQpu {
  int id = 0;
  int capacity = 0;
  bool available = true;
};

struct MilpLink {
  double latency = 0.0;   // in decoherence-time units
  double fidelity = 1.0;
};

/// Batch assignment problem: pick a QPU set (and thereby a partition count)
/// for `zeta` of the circuits so that capacities cover widths, no QPU serves
/// two circuits, and the decoherence/fidelity cost of all selected QPU pairs
/// is minimal.
struct BatchProblem {
  std::vector<BatchCircuit> circuits;
  std::vector<MilpQpu> qpus;
  std::vector<std::vector<MilpLink>> links;  // full symmetric matrix
  double omega0 = 1.0;  // weight of the decoherence term
  double omega1 = 1.0;  // weight of the fidelity term
  int zeta = 0;         // required number of assigned circuits

  /// Pair cost for circuit width w across (j1, j2):
  ///   omega0 * w * latency + omega1 * (1 - fidelity).
  double pair_cost(int width, int j1, int j2) const;
};

/// Single-circuit assignment: same cost structure, no partition cost
/// weighting, at most k_max QPUs.
struct SingleProblem {
  int circuit_id = 0;
  int width = 0;
  int k_max = 1;
  std::vector<MilpQpu> qpus;
  std::vector<std::vector<MilpLink>> links;
  double omega0 = 1.0;
  double omega1 = 1.0;

  double pair_cost(int j1, int j2) const;
};

// ---------------------------------------------------------------------------
// Explicit MILP form
// ---------------------------------------------------------------------------

struct MilpVar {
  std::string name;
  bool is_binary = false;
  double lb = 0.0;
  double ub = 1.0;
};

struct MilpTerm {
  int var = 0;
  double coef = 0.0;
};

struct MilpConstraint {
  std::vector<MilpTerm> terms;
  char sense = 'L';  // 'L' <=, 'G' >=, 'E' ==
  double rhs = 0.0;
};

/// The assignment problem in explicit variable/constraint form, together
/// with the structured problem it was built from. Index maps locate the
/// decision variables: r (circuit uses QPU), y (circuit has k parts) and the
/// product linearizations z = r*r and x = z*y.
struct MilpInstance {
  std::vector<MilpVar> vars;
  std::vector<MilpConstraint> constraints;
  std::vector<MilpTerm> objective;  // minimized

  // r_index[m][j]; y_index[m][k-1]; z_index[m][pair]; x_index[m][k-1][pair]
  // with pair enumerating j1 < j2 row-major.
  std::vector<std::vector<int>> r_index;
  std::vector<std::vector<int>> y_index;
  std::vector<std::vector<int>> z_index;
  std::vector<std::vector<std::vector<int>>> x_index;
  std::vector<std::pair<int, int>> pairs;

  std::variant<BatchProblem, SingleProblem> source;
};

MilpInstance build_batch_milp(const BatchProblem& p);
MilpInstance build_single_milp(const SingleProblem& p);

/// LP-format text export for cross-checking against external solvers.
void write_lp(const MilpInstance& inst, std::ostream& out);

// ---------------------------------------------------------------------------
// Solving
// ---------------------------------------------------------------------------

enum class SolveStatus { Optimal, FeasibleTimeout, Infeasible };

const char* to_string(SolveStatus status);

struct CircuitAssignment {
  int circuit_id = 0;
  bool assigned = false;
  std::vector<int> qpu_ids;  // sorted ascending

  int parts() const { return static_cast<int>(qpu_ids.size()); }
};

struct AssignmentPlan {
  std::vector<CircuitAssignment> circuits;  // in problem order
  double objective = 0.0;
  std::string solver;
  SolveStatus status = SolveStatus::Optimal;
  long long nodes = 0;
  double wall_ms = 0.0;
  int zeta = 0;  // the assignment count actually enforced
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  AssignmentPlan plan;  // meaningful unless status == Infeasible
};

/// Pluggable solver boundary. The built-in backend is an exact depth-first
/// branch-and-bound over per-circuit (partition count, QPU subset) choices:
/// all objective terms are non-negative, so partial costs plus the sum of
/// per-circuit minimum costs bound every subtree, and greedy capacity checks
/// prune infeasible remainders. Search order is deterministic.
class MilpSolver {
 public:
  virtual ~MilpSolver() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const MilpInstance& inst, double time_limit_s) = 0;
};

class BranchAndBoundSolver final : public MilpSolver {
 public:
  std::string name() const override { return "builtin-bnb"; }
  SolveResult solve(const MilpInstance& inst, double time_limit_s) override;
};

/// Solves with the given backend (built-in branch-and-bound by default).
SolveResult solve(const MilpInstance& inst, double time_limit_s = 60.0,
                  MilpSolver* backend = nullptr);

/// Tries zeta = |batch|, |batch|-1, ... until feasible; zeta = 0 yields the
/// empty plan. The returned plan records the zeta actually used.
AssignmentPlan solve_batch_with_zeta_relaxation(BatchProblem p,
                                                double time_limit_s = 60.0,
                                                MilpSolver* backend = nullptr);

}  // namespace dqc
