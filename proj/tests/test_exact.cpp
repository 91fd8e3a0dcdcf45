#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pcsf/cut_lp.hpp"
#include "pcsf/error.hpp"
#include "pcsf/exact_solver.hpp"

using namespace pcsf;

namespace {

PcsfInstance triangle_half() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 1}};
  inst.penalties = {Penalty(Rational(1, 2))};
  return inst;
}

PcsfInstance c4_infinite() {
  Graph g(4);
  for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 2}, {1, 3}};
  inst.penalties = {Penalty::infinite(), Penalty::infinite()};
  return inst;
}

void check_solution_consistent(const PcsfInstance& inst, const IntegralSolution& sol) {
  CHECK(is_forest(inst.graph, sol.forest));
  auto again = evaluate_edges(inst, sol.forest);
  CHECK(again.cost == sol.cost);
  CHECK(again.penalty == sol.penalty);
  CHECK(again.disconnected == sol.disconnected);
}

}  // namespace

TEST_CASE("solve_ip examples") {
  auto t = triangle_half();
  CHECK(oracle::brute_ip(t) == Rational(1, 2));
  CHECK(solve_ip(t).objective() == Rational(1, 2));

  auto c4 = c4_infinite();
  CHECK(oracle::brute_ip(c4) == 3);
  auto s = solve_ip(c4);
  CHECK(s.objective() == 3);
  CHECK(s.forest.size() == 3);
  check_solution_consistent(c4, s);

  Graph p(3);
  p.add_edge(0, 1);
  p.add_edge(1, 2);
  auto path = make_instance(std::move(p));
  path.pairs = {{0, 2}};
  path.penalties = {Penalty(Rational(3))};
  CHECK(solve_ip(path).objective() == 2);
}

TEST_CASE("solve_ip errors") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 3}};
  inst.penalties = {Penalty::infinite()};
  CHECK_THROWS_AS(solve_ip(inst), InfeasibleError);

  auto big = oracle::random_instance(5, {12, 30, 3, false});
  IpOptions opts;
  opts.max_edges = 20;
  CHECK_THROWS_AS(solve_ip(big, opts), ScaleCapError);
  CHECK_THROWS_AS(enumerate_ip(big, 20), ScaleCapError);
}

TEST_CASE("enumerate_ip examples") {
  auto empty = make_instance(Graph(2));
  empty.pairs = {{0, 1}};
  empty.penalties = {Penalty(Rational(5))};
  CHECK(enumerate_ip(empty).value == 5);

  Graph one(2);
  one.add_edge(0, 1);
  auto single = make_instance(std::move(one));
  single.pairs = {{0, 1}};
  single.penalties = {Penalty(Rational(2))};
  auto r = enumerate_ip(single);
  CHECK(r.value == 1);
  CHECK(r.forests == 2);
  REQUIRE(r.optimal.size() == 1);
  CHECK(r.optimal[0].forest == EdgeSet{0});

  auto c4 = enumerate_ip(c4_infinite());
  CHECK(c4.value == 3);
  CHECK(c4.optimal.size() == 4);
  CHECK(c4.forests == 15);
}

TEST_CASE("solve_ip, enumerate_ip and brute force agree on random instances") {
  for (std::uint32_t seed = 100; seed < 200; ++seed) {
    oracle::RandomSpec spec;
    spec.nodes = 3 + static_cast<int>(seed % 6);
    spec.edges = std::min(14, spec.nodes - 1 + static_cast<int>(seed % 7));
    spec.pairs = 1 + static_cast<int>(seed % 5);
    spec.allow_infinite = seed % 4 == 0;
    auto inst = oracle::random_instance(seed, spec);
    CAPTURE(seed);
    const Rational brute = oracle::brute_ip(inst);
    auto sol = solve_ip(inst);
    auto en = enumerate_ip(inst);
    IpOptions bnb;
    bnb.use_chains = false;
    CHECK(sol.objective() == brute);
    CHECK(solve_ip(inst, bnb).objective() == brute);
    CHECK(en.value == brute);
    check_solution_consistent(inst, sol);
    for (const auto& opt : en.optimal) CHECK(opt.objective() == brute);

    if (seed % 5 == 0) {
      IpOptions dfs;
      dfs.use_lp_bound = false;
      dfs.use_chains = false;
      CHECK(solve_ip(inst, dfs).objective() == brute);
    }
    CHECK(solve_lp(inst).value <= sol.objective());
  }
}

TEST_CASE("solve_priced honours cutoff and masks") {
  auto inst = c4_infinite();
  inst.penalties = {Penalty(Rational(5)), Penalty(Rational(5))};
  auto p = PricedProblem::from(inst);
  auto best = solve_priced(p, std::nullopt);
  REQUIRE(best.has_value());
  CHECK(best->objective() == 3);
  CHECK_FALSE(solve_priced(p, Rational(3)).has_value());
  CHECK(solve_priced(p, Rational(301, 100)).has_value());

  p.allowed = {1, 1, 0, 0};  // edges 0-1, 1-2 only
  auto masked = solve_priced(p, std::nullopt);
  REQUIRE(masked.has_value());
  CHECK(masked->objective() == 2 + 5);
  for (EdgeId e : masked->forest) CHECK(p.edge_allowed(e));
}

TEST_CASE("local_search and prune_forest never worsen the start") {
  for (std::uint32_t seed = 1; seed <= 30; ++seed) {
    auto inst = oracle::random_instance(seed, {7, 12, 4, false});
    auto p = PricedProblem::from(inst);
    EdgeSet all;
    for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) all.push_back(e);
    auto start = evaluate_edges(p, all);
    auto pruned = prune_forest(p, all);
    CHECK(is_forest(inst.graph, pruned.forest));
    CHECK(pruned.objective() <= start.objective());
    auto improved = local_search(p, {});
    CHECK(is_forest(inst.graph, improved.forest));
    CHECK(improved.objective() <= evaluate_edges(p, {}).objective());
    CHECK(improved.objective() >= oracle::brute_ip(inst));
  }
}

TEST_CASE("for_each_forest counts") {
  Graph k4(4);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  }
  long count = 0;
  long trees = 0;
  for_each_forest(k4, {}, [&](const EdgeSet& f) {
    ++count;
    if (f.size() == 3) ++trees;
  });
  // Forests of K4 by size: 1 + 6 + 15 + 16.
  CHECK(count == 38);
  CHECK(trees == 16);
}

TEST_CASE("gap") {
  auto g = gap(c4_infinite());
  CHECK(g.lp == 2);
  CHECK(g.ip == 3);
  CHECK(g.ratio == Rational(3, 2));

  auto t = gap(triangle_half());
  CHECK(t.ratio == 1);

  auto z = make_instance(Graph(2));
  auto gz = gap(z);
  CHECK(gz.lp == 0);
  CHECK(gz.ip == 0);
  CHECK(gz.ratio == 1);

  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    auto inst = oracle::random_instance(seed, {6, 9, 3, true});
    CHECK(gap(inst).ratio >= 1);
  }
}

namespace {

// Random base graph with every edge subdivided 0-3 times; pairs drawn from
// all nodes, so some join interiors of two different chains.
PcsfInstance subdivided_instance(std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto base = oracle::random_instance(seed, {4, 5 + static_cast<int>(seed % 2), 0, false});
  Graph g(base.graph.node_count());
  int total = 0;
  for (EdgeId e = 0; e < base.graph.edge_count() && total < 14; ++e) {
    const int extra = std::min(uni(0, 3), 13 - total);
    NodeId prev = base.graph.edge(e).u;
    for (int i = 0; i < extra; ++i) {
      const NodeId mid = g.add_node();
      g.add_edge(prev, mid);
      prev = mid;
    }
    g.add_edge(prev, base.graph.edge(e).v);
    total += extra + 1;
  }
  auto inst = make_instance(std::move(g));
  for (auto& c : inst.costs) c = frac(uni(0, 6), uni(1, 2));
  const int n = inst.graph.node_count();
  for (int k = 0; k < 1 + static_cast<int>(seed % 4); ++k) {
    const NodeId s = uni(0, n - 1);
    const NodeId t = uni(0, n - 1);
    if (s == t) continue;
    inst.pairs.push_back({s, t});
    if (uni(0, 5) == 0) {
      inst.penalties.push_back(Penalty::infinite());
    } else {
      inst.penalties.emplace_back(frac(uni(0, 12), uni(1, 3)));
    }
  }
  return inst;
}

}  // namespace

TEST_CASE("solve_by_chains matches brute force on subdivided graphs") {
  int applied = 0;
  int declined = 0;
  for (std::uint32_t seed = 1; seed <= 120; ++seed) {
    auto inst = subdivided_instance(seed);
    if (inst.graph.edge_count() > 14) continue;
    CAPTURE(seed);
    auto p = PricedProblem::from(inst);
    auto chains = solve_by_chains(p, std::nullopt);
    const auto brute = oracle::brute_ip_if_feasible(inst);
    if (!chains) {
      ++declined;
      continue;
    }
    ++applied;
    if (!brute) {
      CHECK_FALSE(chains->has_value());
      continue;
    }
    REQUIRE(chains->has_value());
    CHECK((*chains)->objective() == *brute);
    CHECK(is_forest(inst.graph, (*chains)->forest));
    // Cutoff at the optimum excludes it.
    CHECK_FALSE(solve_by_chains(p, *brute)->has_value());
  }
  CHECK(applied >= 40);
  CHECK(declined >= 1);
}

TEST_CASE("solve_by_chains handles masks and plain cycles") {
  Graph c(5);
  for (int i = 0; i < 5; ++i) c.add_edge(i, (i + 1) % 5);
  auto inst = make_instance(std::move(c));
  inst.pairs = {{0, 2}, {1, 3}};
  inst.penalties = {Penalty(Rational(10)), Penalty(Rational(10))};
  auto p = PricedProblem::from(inst);
  auto r = solve_by_chains(p, std::nullopt);
  REQUIRE(r.has_value());
  REQUIRE(r->has_value());
  CHECK((*r)->objective() == oracle::brute_ip(inst));
  CHECK((*r)->objective() == 3);

  p.allowed = {1, 1, 0, 1, 1};
  r = solve_by_chains(p, std::nullopt);
  REQUIRE(r.has_value());
  REQUIRE(r->has_value());
  CHECK((*r)->objective() == 4);
  CHECK(std::find((*r)->forest.begin(), (*r)->forest.end(), 2) == (*r)->forest.end());
}
