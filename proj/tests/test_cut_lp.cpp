#include "doctest.h"

#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pcsf/cut_lp.hpp"
#include "pcsf/error.hpp"
#include "pcsf/generators.hpp"

using namespace pcsf;

namespace {

PcsfInstance path3(Rational pen) {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 2}};
  inst.penalties = {Penalty(std::move(pen))};
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

FracSolution zero_point(const PcsfInstance& inst) {
  return {std::vector<Rational>(static_cast<std::size_t>(inst.graph.edge_count())),
          std::vector<Rational>(static_cast<std::size_t>(inst.pair_count()))};
}

std::vector<CutConstraint> without(const GadgetFamily& fam, std::initializer_list<GadgetRowFamily> drop) {
  std::vector<CutConstraint> out;
  for (std::size_t i = 0; i < fam.constraints.size(); ++i) {
    bool keep = true;
    for (auto d : drop) keep = keep && fam.family[i] != d;
    if (keep) out.push_back(fam.constraints[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("separate") {
  auto inst = path3(Rational(5));
  auto cut = separate(inst, zero_point(inst));
  REQUIRE(cut.has_value());
  CHECK(cut->pair == 0);
  CHECK(cut->side == NodeSet{0});
  CHECK(cut->rhs() - cut->lhs(inst, zero_point(inst)) == 1);

  auto lc = build_layered(make_base(BaseKind::K4), 4, 0);
  CHECK_FALSE(separate(layered_instance(lc), canonical_point(lc, PointMode::Gap)).has_value());

  auto gadget = pcst_gadget_instance(6);
  CHECK_FALSE(separate(gadget.instance, gadget.point).has_value());
}

TEST_CASE("separate in tolerance mode ignores tiny violations") {
  auto inst = path3(Rational(5));
  FracSolution p{{Rational(1), Rational(1) - Rational(1, 1000000000000UL)}, {Rational(0)}};
  CHECK(separate(inst, p).has_value());
  SeparationOptions tol;
  tol.exact = false;
  CHECK_FALSE(separate(inst, p, tol).has_value());
}

TEST_CASE("solve_lp examples") {
  Graph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  auto t = make_instance(std::move(tri));
  t.pairs = {{0, 1}};
  t.penalties = {Penalty(Rational(1, 2))};
  auto rt = solve_lp(t);
  CHECK(rt.value == oracle::brute_cut_lp(t));
  CHECK(rt.value == Rational(1, 2));
  CHECK(rt.solution.z[0] == 1);
  for (const auto& x : rt.solution.x) CHECK(x == 0);

  auto rp = solve_lp(path3(Rational(3)));
  CHECK(rp.value == 2);

  auto c4 = c4_infinite();
  auto rc = solve_lp(c4);
  CHECK(rc.value == oracle::brute_cut_lp(c4));
  CHECK(rc.value == 2);
  for (const auto& x : rc.solution.x) CHECK(x == Rational(1, 2));
  CHECK(check_feasible(c4, rc.solution).feasible);
}

TEST_CASE("solve_lp reports infeasible infinite-penalty pairs") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 3}};
  inst.penalties = {Penalty::infinite()};
  CHECK_THROWS_AS(solve_lp(inst), InfeasibleError);
}

TEST_CASE("solve_lp matches the explicit cut LP on random instances") {
  for (std::uint32_t seed = 1; seed <= 60; ++seed) {
    oracle::RandomSpec spec{3 + static_cast<int>(seed % 5), 0, 1 + static_cast<int>(seed % 4), seed % 3 == 0};
    spec.edges = spec.nodes - 1 + static_cast<int>(seed % 5);
    auto inst = oracle::random_instance(seed, spec);
    CAPTURE(seed);
    auto res = solve_lp(inst);
    CHECK(res.value == oracle::brute_cut_lp(inst));
    CHECK(res.value == lp_objective(inst, res.solution));
    CHECK(check_feasible(inst, res.solution).feasible);
    for (const auto& c : res.active_cuts) CHECK(c.lhs(inst, res.solution) == 1);
    if (inst.graph.edge_count() <= 12) CHECK(res.value <= oracle::brute_ip(inst));
  }
}

TEST_CASE("check_feasible") {
  auto lc = build_layered(make_base(BaseKind::K4), 4, 1);
  CHECK(check_feasible(layered_instance(lc), canonical_point(lc, PointMode::Gap)).feasible);

  auto gadget = pcst_gadget_instance(6);
  auto lowered = gadget.point;
  lowered.x[static_cast<std::size_t>(gadget.wavy.front())] = Rational(1, 6);
  auto res = check_feasible(gadget.instance, lowered);
  CHECK_FALSE(res.feasible);
  REQUIRE(res.violated.has_value());
  CHECK(res.violated->lhs(gadget.instance, lowered) < res.violated->rhs());

  auto inst = path3(Rational(2));
  CHECK_FALSE(check_feasible(inst, zero_point(inst)).feasible);

  auto neg = zero_point(inst);
  neg.x = {Rational(2), Rational(-1)};
  neg.z = {Rational(1)};
  auto rn = check_feasible(inst, neg);
  CHECK_FALSE(rn.feasible);
  REQUIRE(rn.violated.has_value());
  CHECK(rn.violated->kind == CutConstraint::Kind::NonnegX);
}

TEST_CASE("verify_vertex on the gadget instance") {
  auto gadget = pcst_gadget_instance(6);
  auto fam = gadget_tight_family(gadget);
  auto rep = verify_vertex(gadget.instance, gadget.point, fam.constraints);
  CHECK(rep.is_feasible);
  CHECK(rep.all_tight);
  CHECK(rep.unique);
  CHECK(rep.dimension == 96 + 61);
  CHECK(rep.rank == 157);
  CHECK(rep.max_coordinate == Rational(1, 3));
  CHECK(rep.all_x_positive);

  auto no14 = verify_vertex(gadget.instance, gadget.point, without(fam, {GadgetRowFamily::SourceZero}));
  CHECK_FALSE(no14.unique);
  CHECK(no14.all_tight);
  auto no13 = verify_vertex(gadget.instance, gadget.point,
                            without(fam, {GadgetRowFamily::RootCut, GadgetRowFamily::SourceZero}));
  CHECK_FALSE(no13.unique);

  auto bumped = gadget.point;
  EdgeId straight = 0;
  while (std::find(gadget.wavy.begin(), gadget.wavy.end(), straight) != gadget.wavy.end()) ++straight;
  bumped.x[static_cast<std::size_t>(straight)] += Rational(1, 100);
  auto rb = verify_vertex(gadget.instance, bumped, fam.constraints);
  CHECK_FALSE(rb.all_tight);
  CHECK_FALSE(rb.slack_members.empty());
}

TEST_CASE("gadget certificate ranks per dropped family") {
  auto gadget = pcst_gadget_instance(6);
  auto fam = gadget_tight_family(gadget);
  const int full = constraint_rank(gadget.instance, fam.constraints);
  CHECK(full == 157);
  for (auto f : {GadgetRowFamily::NodeCut, GadgetRowFamily::GadgetCut, GadgetRowFamily::WavyPairCut,
                 GadgetRowFamily::LeftBlock, GadgetRowFamily::RightBlock, GadgetRowFamily::RootCut,
                 GadgetRowFamily::SourceZero}) {
    CAPTURE(to_string(f));
    CHECK(constraint_rank(gadget.instance, without(fam, {f})) <= full);
  }
}

TEST_CASE("a certified vertex is the unique optimum of a positive combination of its rows") {
  // Objective = sum_j w_j * row_j with w_j > 0: every feasible point scores at
  // least sum_j w_j * rhs_j, with equality only on the tight face, which the
  // certificate collapses to the single point.
  auto gadget = pcst_gadget_instance(6);
  auto fam = gadget_tight_family(gadget);
  auto inst = gadget.instance;
  std::mt19937 rng(3);
  for (auto& c : inst.costs) c = 0;
  std::vector<Rational> zcost(static_cast<std::size_t>(inst.pair_count()), Rational(0));
  Rational floor(0);
  for (const auto& c : fam.constraints) {
    const Rational w = frac(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3));
    floor += w * c.rhs();
    switch (c.kind) {
      case CutConstraint::Kind::Cut: {
        std::vector<char> in(static_cast<std::size_t>(inst.graph.node_count()), 0);
        for (NodeId v : c.side) in[static_cast<std::size_t>(v)] = 1;
        for (EdgeId e : cut_edges(inst.graph, in)) inst.costs[static_cast<std::size_t>(e)] += w;
        zcost[static_cast<std::size_t>(c.pair)] += w;
        break;
      }
      case CutConstraint::Kind::NonnegX: inst.costs[static_cast<std::size_t>(c.edge)] += w; break;
      case CutConstraint::Kind::NonnegZ: zcost[static_cast<std::size_t>(c.pair)] += w; break;
    }
  }
  for (std::size_t i = 0; i < zcost.size(); ++i) inst.penalties[i] = Penalty(zcost[i]);
  auto res = solve_lp(inst);
  CHECK(res.value == floor);
  CHECK(res.solution.x == gadget.point.x);
  CHECK(res.solution.z == gadget.point.z);
}

TEST_CASE("constraint family files round-trip through node names") {
  auto g = pcst_gadget_instance(4);
  auto fam = gadget_tight_family(g);
  std::stringstream text;
  write_constraint_family(g.instance, fam.constraints, text);
  auto back = parse_constraint_family(text, g.instance);
  REQUIRE(back.size() == fam.constraints.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].kind == fam.constraints[i].kind);
    CHECK(back[i].pair == fam.constraints[i].pair);
    CHECK(back[i].edge == fam.constraints[i].edge);
    CHECK(back[i].side == fam.constraints[i].side);
  }
  CHECK(verify_vertex(g.instance, g.point, back).unique);

  auto inst = path3(Rational(1));
  auto parse = [&](const std::string& s) {
    std::istringstream in(s);
    return parse_constraint_family(in, inst);
  };
  // A side holding t is stored as its complement, which holds s.
  auto flipped = parse("cut 0 v2 # complement\nx 1\nz 0\n");
  REQUIRE(flipped.size() == 3);
  CHECK(flipped[0].side == NodeSet{0, 1});
  CHECK_THROWS_AS(parse("cut 0 v0 v2\n"), ValidationError);
  CHECK_THROWS_AS(parse("cut 0 9\n"), ValidationError);
  CHECK_THROWS_AS(parse("x 2\n"), ValidationError);
  CHECK_THROWS_AS(parse("z -1\n"), ValidationError);
  CHECK_THROWS_AS(parse("y 0\n"), ValidationError);
}
