#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dqc/milp.hpp"
#include "dqc/rng.hpp"
#include "oracles.hpp"

using namespace dqc;

namespace {

std::vector<std::vector<MilpLink>> uniform_links(int j, double latency, double fidelity) {
  std::vector<std::vector<MilpLink>> links(static_cast<std::size_t>(j),
                                           std::vector<MilpLink>(static_cast<std::size_t>(j)));
  for (int a = 0; a < j; ++a) {
    for (int b = 0; b < j; ++b) {
      if (a != b) links[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {latency, fidelity};
    }
  }
  return links;
}

BatchProblem random_problem(Rng& rng) {
  BatchProblem p;
  const int j = rng.uniform_int(2, 6);
  for (int q = 0; q < j; ++q) {
    p.qpus.push_back({q, rng.uniform_int(2, 12), rng.uniform_int(0, 9) > 0});
  }
  p.links.assign(static_cast<std::size_t>(j), std::vector<MilpLink>(static_cast<std::size_t>(j)));
  for (int a = 0; a < j; ++a) {
    for (int b = 0; b < j; ++b) {
      if (a == b) continue;
      const double latency = 0.001 + 0.02 * rng.uniform_real();
      const double fidelity = 0.9 + 0.1 * rng.uniform_real();
      p.links[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {latency, fidelity};
    }
  }
  // Symmetrize.
  for (int a = 0; a < j; ++a) {
    for (int b = a + 1; b < j; ++b) {
      p.links[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
          p.links[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
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
  return p;
}

}  // namespace

TEST_CASE("variable layout of the batch formulation") {
  BatchProblem p;
  p.circuits.push_back({0, 5, 2, {0.0, 1.0}});
  for (int q = 0; q < 3; ++q) p.qpus.push_back({q, 4, true});
  p.links = uniform_links(3, 0.01, 0.95);
  p.zeta = 1;
  const MilpInstance inst = build_batch_milp(p);

  int r = 0, y = 0, z = 0, x = 0;
  for (const MilpVar& v : inst.vars) {
    if (v.name[0] == 'r') ++r;
    if (v.name[0] == 'y') ++y;
    if (v.name[0] == 'z') ++z;
    if (v.name[0] == 'x') ++x;
  }
  CHECK(r == 3);
  CHECK(y == 2);
  CHECK(z == 3);
  CHECK(x == 6);
  // k = 1 contributes no objective term.
  for (const MilpTerm& t : inst.objective) {
    CHECK(inst.vars[static_cast<std::size_t>(t.var)].name.substr(0, 4) == "x_0_");
    CHECK(inst.vars[static_cast<std::size_t>(t.var)].name[4] == '2');
  }
}

TEST_CASE("forced single-QPU assignment costs nothing") {
  BatchProblem p;
  p.circuits.push_back({7, 8, 2, {0.0, 3.0}});
  p.qpus.push_back({0, 8, true});
  p.qpus.push_back({1, 4, false});
  p.qpus.push_back({2, 4, false});
  p.links = uniform_links(3, 0.01, 0.95);
  p.zeta = 1;
  const SolveResult res = solve(build_batch_milp(p));
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.plan.objective == 0.0);
  REQUIRE(res.plan.circuits.size() == 1);
  CHECK(res.plan.circuits[0].assigned);
  CHECK(res.plan.circuits[0].qpu_ids == std::vector<int>{0});
  CHECK(res.plan.circuits[0].parts() == 1);
}

TEST_CASE("zero objective weights make every feasible plan optimal") {
  BatchProblem p;
  p.circuits.push_back({0, 10, 2, {0.0, 2.0}});
  p.circuits.push_back({1, 10, 2, {0.0, 2.0}});
  for (int q = 0; q < 4; ++q) p.qpus.push_back({q, 6, true});
  p.links = uniform_links(4, 0.01, 0.95);
  p.omega0 = 0.0;
  p.omega1 = 0.0;
  p.zeta = 2;
  const SolveResult res = solve(build_batch_milp(p));
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.plan.objective == 0.0);
}

TEST_CASE("infeasible when demand exceeds capacity at full zeta") {
  BatchProblem p;
  p.circuits.push_back({0, 9, 2, {0.0, 1.0}});
  p.circuits.push_back({1, 9, 2, {0.0, 1.0}});
  for (int q = 0; q < 2; ++q) p.qpus.push_back({q, 5, true});
  p.links = uniform_links(2, 0.01, 0.95);
  p.zeta = 2;
  CHECK(solve(build_batch_milp(p)).status == SolveStatus::Infeasible);
}

TEST_CASE("zeta relaxation walks down to a feasible count") {
  BatchProblem p;
  for (int m = 0; m < 3; ++m) p.circuits.push_back({m, 6, 2, {0.0, 1.0}});
  for (int q = 0; q < 4; ++q) p.qpus.push_back({q, 4, true});
  p.links = uniform_links(4, 0.01, 0.95);

  // 3 circuits of width 6 need two 4-qubit QPUs each; only 2 fit.
  const AssignmentPlan plan = solve_batch_with_zeta_relaxation(p);
  CHECK(plan.zeta == 2);
  int assigned = 0;
  for (const CircuitAssignment& c : plan.circuits) assigned += c.assigned ? 1 : 0;
  CHECK(assigned == 2);

  BatchProblem fits = p;
  fits.circuits.pop_back();
  CHECK(solve_batch_with_zeta_relaxation(fits).zeta == 2);

  BatchProblem nothing = p;
  for (MilpQpu& q : nothing.qpus) q.available = false;
  const AssignmentPlan empty = solve_batch_with_zeta_relaxation(nothing);
  CHECK(empty.zeta == 0);
  for (const CircuitAssignment& c : empty.circuits) CHECK_FALSE(c.assigned);
}

TEST_CASE("a relaxed zeta drops the costliest circuit") {
  // Three circuits that each need a QPU pair, capacity for two: the one with
  // the heaviest partition cost stays out.
  BatchProblem p;
  p.circuits.push_back({0, 6, 2, {0.0, 1.0}});
  p.circuits.push_back({1, 6, 2, {0.0, 9.0}});  // expensive to split
  p.circuits.push_back({2, 6, 2, {0.0, 1.5}});
  for (int q = 0; q < 4; ++q) p.qpus.push_back({q, 4, true});
  p.links = uniform_links(4, 0.01, 0.95);

  const AssignmentPlan plan = solve_batch_with_zeta_relaxation(p);
  CHECK(plan.zeta == 2);
  CHECK(plan.circuits[0].assigned);
  CHECK_FALSE(plan.circuits[1].assigned);
  CHECK(plan.circuits[2].assigned);

  BatchProblem fixed = p;
  fixed.zeta = 2;
  const oracle::OracleResult want = oracle::batch_oracle(fixed);
  REQUIRE(want.feasible);
  CHECK(std::abs(plan.objective - want.objective) <= 1e-9);
}

TEST_CASE("single assignment picks the cheapest feasible subset") {
  SingleProblem p;
  p.circuit_id = 3;
  p.width = 6;
  p.k_max = 2;
  for (int q = 0; q < 4; ++q) p.qpus.push_back({q, 4, true});
  p.links = uniform_links(4, 0.01, 0.95);
  // Make the (1, 2) pair clearly the cheapest.
  p.links[1][2] = p.links[2][1] = {0.001, 0.99};

  const SolveResult res = solve(build_single_milp(p));
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.plan.circuits[0].qpu_ids == std::vector<int>{1, 2});
  const double expect = 1.0 * 6 * 0.001 + 1.0 * (1.0 - 0.99);
  CHECK(res.plan.objective == doctest::Approx(expect).epsilon(1e-12));

  SingleProblem fits_one = p;
  fits_one.width = 4;
  const SolveResult one = solve(build_single_milp(fits_one));
  CHECK(one.plan.objective == 0.0);
  CHECK(one.plan.circuits[0].parts() == 1);

  SingleProblem stuck = p;
  stuck.k_max = 1;
  CHECK(solve(build_single_milp(stuck)).status == SolveStatus::Infeasible);
}

TEST_CASE("the cheaper pair goes to the circuit with more at stake") {
  // Two circuits both must split across a pair; one link is much better.
  // Minimizing the summed cost hands the good pair to the circuit with the
  // larger nu * width product.
  BatchProblem p;
  p.circuits.push_back({0, 8, 2, {0.0, 2.0}});  // heavier partition cost
  p.circuits.push_back({1, 8, 2, {0.0, 1.0}});
  for (int q = 0; q < 4; ++q) p.qpus.push_back({q, 5, true});
  p.links = uniform_links(4, 0.05, 0.92);
  p.links[0][1] = p.links[1][0] = {0.005, 0.98};  // the near pair
  p.zeta = 2;

  const MilpInstance inst = build_batch_milp(p);
  const SolveResult res = solve(inst);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.plan.circuits[0].qpu_ids == std::vector<int>{0, 1});
  CHECK(res.plan.circuits[1].qpu_ids == std::vector<int>{2, 3});
  const oracle::OracleResult want = oracle::batch_oracle(p);
  CHECK(std::abs(res.plan.objective - want.objective) <= 1e-9);
}

TEST_CASE("branch-and-bound equals the exhaustive oracle on random instances") {
  Rng rng(2024);
  int feasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const BatchProblem p = random_problem(rng);
    const MilpInstance inst = build_batch_milp(p);
    const SolveResult got = solve(inst);
    const oracle::OracleResult want = oracle::batch_oracle(p);
    if (want.feasible) {
      ++feasible_seen;
      REQUIRE_MESSAGE(got.status == SolveStatus::Optimal, "trial ", trial);
      CHECK_MESSAGE(std::abs(got.plan.objective - want.objective) <= 1e-9, "trial ",
                    trial, " got ", got.plan.objective, " want ", want.objective);
    } else {
      CHECK_MESSAGE(got.status == SolveStatus::Infeasible, "trial ", trial);
    }
  }
  CHECK(feasible_seen > 10);
}

TEST_CASE("returned plans satisfy the explicit formulation") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const BatchProblem p = random_problem(rng);
    const MilpInstance inst = build_batch_milp(p);
    const SolveResult got = solve(inst);
    if (got.status != SolveStatus::Optimal) continue;

    std::vector<std::vector<int>> sets(p.circuits.size());
    for (std::size_t m = 0; m < p.circuits.size(); ++m) {
      if (got.plan.circuits[m].assigned) sets[m] = got.plan.circuits[m].qpu_ids;
    }
    const auto point = oracle::instance_point(inst, sets);
    REQUIRE(point.has_value());
    CHECK(oracle::satisfies(inst, *point));
    CHECK(std::abs(oracle::instance_objective(inst, *point) - got.plan.objective) <= 1e-9);

    // Disjointness across circuits.
    std::set<int> used;
    for (const CircuitAssignment& c : got.plan.circuits) {
      for (int j : c.qpu_ids) CHECK(used.insert(j).second);
    }
  }
}

TEST_CASE("an extra available QPU never hurts") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    BatchProblem p = random_problem(rng);
    for (MilpQpu& q : p.qpus) q.available = true;
    const SolveResult before = solve(build_batch_milp(p));

    BatchProblem bigger = p;
    const int j = static_cast<int>(bigger.qpus.size());
    bigger.qpus.push_back({j, 10, true});
    for (std::size_t a = 0; a < bigger.links.size(); ++a) {
      bigger.links[a].push_back({0.01, 0.95});
    }
    bigger.links.emplace_back(static_cast<std::size_t>(j) + 1, MilpLink{0.01, 0.95});
    bigger.links.back()[static_cast<std::size_t>(j)] = {0.0, 1.0};

    const SolveResult after = solve(build_batch_milp(bigger));
    if (before.status == SolveStatus::Optimal) {
      REQUIRE(after.status == SolveStatus::Optimal);
      CHECK(after.plan.objective <= before.plan.objective + 1e-9);
    }
  }
}

TEST_CASE("solves are deterministic") {
  Rng rng(55);
  const BatchProblem p = random_problem(rng);
  const SolveResult a = solve(build_batch_milp(p));
  const SolveResult b = solve(build_batch_milp(p));
  REQUIRE(a.status == b.status);
  if (a.status == SolveStatus::Optimal) {
    CHECK(a.plan.objective == b.plan.objective);
    for (std::size_t m = 0; m < a.plan.circuits.size(); ++m) {
      CHECK(a.plan.circuits[m].qpu_ids == b.plan.circuits[m].qpu_ids);
    }
  }
}

TEST_CASE("lp export carries the formulation") {
  BatchProblem p;
  p.circuits.push_back({0, 5, 2, {0.0, 1.5}});
  for (int q = 0; q < 3; ++q) p.qpus.push_back({q, 4, true});
  p.links = uniform_links(3, 0.01, 0.95);
  p.zeta = 1;
  std::ostringstream out;
  write_lp(build_batch_milp(p), out);
  const std::string text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("r_0_0") != std::string::npos);
  CHECK(text.find("x_0_2_0_1") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
