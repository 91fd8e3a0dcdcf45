// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcsf/cut_lp.hpp"
#include "pcsf/decomposition.hpp"
#include "pcsf/exact_solver.hpp"
#include "pcsf/generators.hpp"
#include "pcsf/rounding.hpp"

using namespace pcsf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failed;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failed.push_back(what);
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

FracSolution lift(const PcsfInstance& inst, std::vector<Rational> x) {
  FracSolution p{std::move(x), {}};
  for (const auto& pr : inst.pairs) {
    Rational c = oracle::brute_min_cut(inst.graph, p.x, pr.s, pr.t);
    p.z.push_back(c >= 1 ? Rational(0) : Rational(1) - c);
  }
  return p;
}

PcsfInstance triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  auto inst = make_instance(std::move(g));
  inst.pairs.push_back({0, 1});
  inst.penalties.emplace_back(Rational(1));
  return inst;
}

// C4 with both diagonals as infinite-penalty pairs: LP 2, IP 3.
PcsfInstance c4_double_pair() {
  Graph g(4);
  for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4);
  auto inst = make_instance(std::move(g));
  inst.pairs = {{0, 2}, {1, 3}};
  inst.penalties = {Penalty::infinite(), Penalty::infinite()};
  return inst;
}

LayeredConstruction k4(int m, int k) { return build_layered(make_base(BaseKind::K4), m, k); }

void criterion_1(Outcome& o) {
  const auto start = Clock::now();
  auto g = pcst_gadget_instance(6);
  auto fam = gadget_tight_family(g);
  auto rep = verify_vertex(g.instance, g.point, fam.constraints);
  const int dim = g.instance.graph.edge_count() + g.instance.pair_count();
  o.expect(rep.is_feasible, "feasible");
  o.expect(rep.all_tight, "family tight");
  o.expect(rep.rank == dim && rep.unique, "rank = |E| + |pairs|");
  o.expect(rep.all_x_positive, "x > 0");
  o.expect(rep.max_coordinate == Rational(1, 3), "max coordinate 1/3");
  const double t = seconds_since(start);
  o.expect(t < 60, "under 1 minute");
  o.detail << "rank " << rep.rank << "/" << dim << ", max " << to_string(rep.max_coordinate) << ", " << t << " s";
}

void criterion_2(Outcome& o) {
  const auto start = Clock::now();
  for (int k : {0, 1}) {
    auto lc = k4(4, k);
    o.expect(check_feasible(layered_instance(lc), canonical_point(lc, PointMode::Gap)).feasible,
             "K4 m=4 k=" + std::to_string(k));
  }
  auto k5 = build_layered(make_base("complete:5"), 2, 0);
  o.expect(check_feasible(layered_instance(k5), canonical_point(k5, PointMode::Lmp)).feasible, "K5 l=4 m=2 k=0 lmp");
  const double t = seconds_since(start);
  o.expect(t < 120, "under 2 minutes");
  o.detail << "3 points feasible, " << t << " s";
}

void criterion_3(Outcome& o) {
  const auto start = Clock::now();
  auto lc = k4(4, 1);
  auto inst = layered_instance(lc);
  auto point = canonical_point(lc, PointMode::Gap);
  auto dist = explicit_gap_distribution(lc, Rational(9, 4));
  auto rep = verify_distribution(inst, point, dist, Rational(9, 4), DominanceMode::Gap);
  o.expect(rep.passes, "verify_distribution");
  o.expect(dist.support.size() == 17, "17 forests");
  o.expect(dist.total_weight() == 1, "weights sum to 1");
  o.expect(rep.max_marginal <= Rational(3, 4), "edge marginals <= 3/4");
  auto classes = layered_pair_classes(lc);
  Rational branch_min(1);
  Rational root_min(1);
  for (PairId i : classes.branch) branch_min = std::min(branch_min, rep.pair_probs[static_cast<std::size_t>(i)]);
  for (PairId i : classes.root) root_min = std::min(root_min, rep.pair_probs[static_cast<std::size_t>(i)]);
  o.expect(branch_min == 1, "branch pairs connected");
  o.expect(root_min >= Rational(1, 4), "root pairs >= 1/4");
  const double t = seconds_since(start);
  o.expect(t < 300, "under 5 minutes");
  o.detail << "support " << dist.support.size() << ", max marginal " << to_string(rep.max_marginal)
           << ", branch min " << to_string(branch_min) << ", root min " << to_string(root_min) << ", " << t << " s";
}

void criterion_4(Outcome& o) {
  auto a = mu_bound(Rational(1, 3));
  o.expect(a.mu == Rational(9, 4) && a.p_star == Rational(3, 4), "mu_bound(1/3) = (9/4, 3/4)");
  auto b = mu_bound(Rational(1, 4));
  o.expect(b.mu == Rational(16, 7), "mu_bound(1/4) = 16/7");
  // Grid over p of the explicit max, refined by ternary search in each cell.
  double worst = 0;
  for (int i = 1; i <= 49; ++i) {
    const double gamma = i / 100.0;
    auto f = [&](double p) { return std::max((2 - 2 * p * gamma) / (1 - gamma), p / gamma); };
    double best_p = 0;
    for (int j = 0; j <= 1000; ++j) {
      if (f(j / 1000.0) < f(best_p)) best_p = j / 1000.0;
    }
    double lo = std::max(0.0, best_p - 1e-3);
    double hi = std::min(1.0, best_p + 1e-3);
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3;
      const double m2 = hi - (hi - lo) / 3;
      if (f(m1) < f(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    worst = std::max(worst, std::abs(f((lo + hi) / 2) - to_double(mu_bound(frac(i, 100)).mu)));
  }
  o.expect(worst < 1e-9, "grid cross-check within 1e-9");
  o.detail << "mu(1/3) = " << to_string(a.mu) << " at p = " << to_string(a.p_star) << ", mu(1/4) = " << to_string(b.mu)
           << ", grid error " << worst;
}

void criterion_5(Outcome& o) {
  o.expect(bound_alpha(4, 1) == Rational(5, 8), "bound_alpha(4, 1) = 5/8");
  const double dist = std::abs(to_double(bound_alpha(1'000'000, 100) - Rational(9, 4)));
  o.expect(dist <= 1e-6, "bound_alpha(10^6, 100) within 1e-6 of 9/4");
  bool monotone = true;
  for (long n = 4; n <= 13; ++n) {
    for (int k = 0; k <= 9; ++k) {
      if (n > 4 && bound_alpha(n, k) < bound_alpha(n - 1, k)) monotone = false;
      if (k > 0 && bound_alpha(n, k) < bound_alpha(n, k - 1)) monotone = false;
    }
  }
  o.expect(monotone, "monotone on the n x k grid");
  bool asymptote = true;
  for (int l = 3; l <= 12; ++l) {
    // Limit of 2 + (2 - l t)/s with s -> l/(l-2), t -> 0.
    const Rational limit = 2 + frac(2 * (l - 2), l);
    asymptote = asymptote && bound_beta_asymptote(l) == 4 - frac(4, l) && bound_beta_asymptote(l) == limit;
    const double gap = to_double(limit - bound_beta(l, 1'000'000'000, 200));
    asymptote = asymptote && gap >= 0 && gap < 1e-6;
  }
  o.expect(asymptote, "bound_beta asymptote 4 - 4/l");
  o.detail << "|bound_alpha(10^6, 100) - 9/4| = " << dist;
}

void criterion_6(Outcome& o) {
  const auto start = Clock::now();
  std::mt19937 rng(4242);
  const Rational vals[] = {Rational(0), frac(1, 3), frac(1, 2), frac(2, 3), Rational(1)};
  int checked = 0;
  int mismatched = 0;
  for (std::uint32_t seed = 300; checked < 50; ++seed) {
    RandomSpec spec;
    spec.nodes = 4 + static_cast<int>(seed % 3);
    spec.edges = std::min(12, spec.nodes + 2 + static_cast<int>(seed % 5));
    spec.pairs = 1 + static_cast<int>(seed % 3);
    spec.allow_infinite = seed % 2 == 0;
    auto inst = random_instance(seed, spec);
    std::vector<Rational> x;
    for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) x.push_back(vals[std::uniform_int_distribution<int>(0, 4)(rng)]);
    auto p = lift(inst, std::move(x));
    if (!check_feasible(inst, p).feasible) continue;
    if (min_alpha(inst, p).value != min_alpha_enumerated(inst, p).value) ++mismatched;
    ++checked;
  }
  o.expect(mismatched == 0, std::to_string(mismatched) + " column-generation mismatches");

  auto lc = build_layered(make_base("complete:5"), 2, 0);
  auto inst = layered_instance(lc);
  auto point = canonical_point(lc, PointMode::Lmp);
  auto beta = min_beta(inst, point);
  auto at = feasibility_at_beta(inst, point, beta.value);
  auto below = feasibility_at_beta(inst, point, beta.value - Rational(1, 100));
  o.expect(at.value == 1 && at.feasible, "feasibility_at_beta(beta*) = 1");
  o.expect(below.value < 1 && !below.feasible, "feasibility_at_beta(beta* - 1/100) < 1");
  o.detail << checked << " instances agree, beta* = " << to_string(beta.value) << ", value below = "
           << to_string(below.value) << ", " << seconds_since(start) << " s";
}

void criterion_7(Outcome& o) {
  auto round_trip = [&](const std::string& name, const PcsfInstance& inst, const FracSolution& p) {
    auto r = min_alpha(inst, p);
    auto w = witness_costs_from_dual(inst, p, r.witness, DominanceMode::Gap);
    const Rational lp = solve_lp(w).value;
    const Rational ip = solve_ip(w).objective();
    o.expect(lp <= 1, name + ": LP <= 1");
    o.expect(ip == r.value, name + ": IP = alpha*");
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << name << " alpha* " << to_string(r.value) << " LP " << to_string(lp)
             << " IP " << to_string(ip);
  };
  round_trip("triangle", triangle(), FracSolution{{frac(1, 3), frac(1, 3), frac(1, 3)}, {frac(1, 3)}});
  auto lc = k4(4, 0);
  round_trip("K4 m=4 k=0", layered_instance(lc), canonical_point(lc, PointMode::Gap));
}

void criterion_8(Outcome& o) {
  struct Case {
    PcsfInstance inst;
    FracSolution point;
  };
  std::vector<Case> suite;
  std::mt19937 rng(17);
  for (std::uint32_t seed = 1; seed <= 60; ++seed) {
    auto inst = random_instance(seed, {6, 9, 4, seed % 3 == 0});
    std::vector<Rational> x;
    for (int e = 0; e < inst.graph.edge_count(); ++e) x.push_back(frac(static_cast<long>(rng() % 4), 3));
    auto lifted = lift(inst, x);
    if (check_feasible(inst, lifted).feasible) suite.push_back({inst, lifted});
    suite.push_back({inst, solve_lp(inst).solution});
    // x = 2/3 puts every z in {0, 1/3}.
    suite.push_back({inst, lift(inst, std::vector<Rational>(x.size(), Rational(2, 3)))});
  }
  for (int k : {0, 1}) {
    auto lc = k4(4, k);
    suite.push_back({layered_instance(lc), canonical_point(lc, PointMode::Gap)});
  }
  auto gadget = pcst_gadget_instance(6);
  suite.push_back({gadget.instance, gadget.point});

  int threshold_runs = 0;
  int two_value_runs = 0;
  for (const auto& c : suite) {
    if (!check_feasible(c.inst, c.point).feasible) continue;
    const Rational lp = lp_objective(c.inst, c.point);
    ++threshold_runs;
    o.expect(threshold_round(c.inst, c.point, Rational(1, 3)).solution.objective() <= 3 * lp, "threshold <= 3 LP");
    auto gamma = two_value_gamma(c.point);
    if (gamma && *gamma == Rational(1, 3)) {
      ++two_value_runs;
      o.expect(two_value_round(c.inst, c.point, Rational(3, 4)).solution.objective() <= Rational(9, 4) * lp,
               "two-value <= 9/4 LP");
    }
  }
  o.expect(two_value_runs >= 10, "two-value exercised");

  int gw_runs = 0;
  for (std::uint32_t seed = 1; seed <= 100; ++seed) {
    const int nodes = 3 + static_cast<int>(seed % 5);
    auto inst = random_instance(seed, {nodes, std::min(12, nodes + 3), std::min(1 + static_cast<int>(seed % 4), nodes * (nodes - 1) / 2), false});
    for (auto& p : inst.penalties) p = Penalty::infinite();
    std::vector<PairId> req;
    for (PairId i = 0; i < inst.pair_count(); ++i) req.push_back(i);
    auto f = gw_steiner_forest(inst, req);
    auto sol = evaluate_edges(inst, f.forest);
    o.expect(sol.disconnected.empty() && sol.cost <= 2 * solve_lp(inst).value, "GW <= 2 LP, seed " + std::to_string(seed));
    ++gw_runs;
  }
  o.detail << threshold_runs << " threshold runs, " << two_value_runs << " two-value runs, " << gw_runs << " GW runs";
}

void criterion_9(Outcome& o) {
  int checked = 0;
  for (std::uint32_t seed = 100; seed < 200; ++seed) {
    RandomSpec spec;
    spec.nodes = 3 + static_cast<int>(seed % 6);
    spec.edges = std::min(14, spec.nodes - 1 + static_cast<int>(seed % 7));
    spec.pairs = std::min(1 + static_cast<int>(seed % 5), spec.nodes * (spec.nodes - 1) / 2);
    spec.allow_infinite = seed % 4 == 0;
    auto inst = random_instance(seed, spec);
    o.expect(solve_ip(inst).objective() == enumerate_ip(inst).value, "solve_ip = enumerate_ip, seed " + std::to_string(seed));
    ++checked;
  }
  auto g = gap(c4_double_pair());
  o.expect(g.lp == 2 && g.ip == 3 && g.ratio == Rational(3, 2), "C4 double pair (2, 3, 3/2)");
  o.detail << checked << " instances agree, C4 (" << to_string(g.lp) << ", " << to_string(g.ip) << ", "
           << to_string(g.ratio) << ")";
}

void criterion_10(Outcome& o, const std::vector<bool>& substitutes) {
  auto lc = k4(4, 1);
  auto tr = chain_trace(lc, explicit_gap_distribution(lc, Rational(9, 4)), Rational(9, 4));
  o.expect(tr.all_hold && !tr.truncated, "chain_trace inequalities");
  const char* names[] = {"3", "5", "6", "7"};
  for (std::size_t i = 0; i < substitutes.size(); ++i) o.expect(substitutes[i], std::string("criterion ") + names[i]);
  o.detail << "chain of " << tr.steps.size() << " steps, final probability " << to_string(tr.final_probability);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"gadget extreme point", criterion_1},
      {"canonical points feasible", criterion_2},
      {"explicit 9/4 distribution", criterion_3},
      {"mu bound", criterion_4},
      {"closed-form bounds", criterion_5},
      {"column generation and beta feasibility", criterion_6},
      {"gap witness round trip", criterion_7},
      {"rounding guarantees", criterion_8},
      {"exact baseline", criterion_9},
  };
  std::vector<bool> passed;
  int failed = 0;
  auto report = [&](int id, const char* name, Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail.str();
    // The first few failed checks; the rest are counted.
    for (std::size_t i = 0; i < o.failed.size() && i < 4; ++i) std::cout << (i == 0 ? " | failed: " : "; ") << o.failed[i];
    if (o.failed.size() > 4) std::cout << " (+" << o.failed.size() - 4 << " more)";
    std::cout << std::endl;
    passed.push_back(o.pass);
    if (!o.pass) ++failed;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    report(static_cast<int>(i) + 1, criteria[i].first, o);
  }
  Outcome last;
  try {
    criterion_10(last, {passed[2], passed[4], passed[5], passed[6]});
  } catch (const std::exception& e) {
    last.expect(false, std::string("exception: ") + e.what());
  }
  report(10, "asymptotic bounds through substitutes", last);
  std::cout << (10 - failed) << "/10 criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
