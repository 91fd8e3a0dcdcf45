// pcsf: command-line front end. Commands share a work directory (--dir) that
// holds the current instance, fractional point, construction record and
// forest distribution, so runs chain:
//
//   pcsf gen layered --base k4 --m 4 --k 1
//   pcsf decompose explicit --alpha 9/4
//   pcsf decompose verify
//
// Every command prints one JSON object on stdout. Rationals appear as exact
// "a/b" strings; `<key>_decimal` fields are annotations. Errors print
// {"error": {...}} and exit with 2 (validation), 3 (scale cap), 4 (infeasible).

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcsf/cut_lp.hpp"
#include "pcsf/decomposition.hpp"
#include "pcsf/error.hpp"
#include "pcsf/exact_solver.hpp"
#include "pcsf/generators.hpp"
#include "pcsf/rounding.hpp"
#include "plot_data.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pcsf::cli {
namespace {

constexpr const char* kInstanceFile = "instance.txt";
constexpr const char* kPointFile = "point.txt";
constexpr const char* kConstructionFile = "construction.json";
constexpr const char* kFamilyFile = "family.txt";
constexpr const char* kDistributionFile = "distribution.txt";
constexpr const char* kDistributionMeta = "distribution.json";
constexpr const char* kWitnessFile = "witness.txt";
constexpr const char* kLpSolutionFile = "lp_solution.txt";

struct Context {
  std::string dir = ".";
  std::string instance;  // overrides <dir>/instance.txt
  std::string point;     // overrides <dir>/point.txt
  std::uint32_t seed = 1;
  int threads = 1;
  std::string output;
};

// ---- JSON helpers ---------------------------------------------------------

void put(json& j, const std::string& key, const Rational& q) {
  j[key] = to_string(q);
  j[key + "_decimal"] = to_double(q);
}

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

template <class T>
json ints(const std::vector<T>& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

json solution_json(const IntegralSolution& s) {
  json j;
  put(j, "objective", s.objective());
  put(j, "cost", s.cost);
  put(j, "penalty", s.penalty);
  j["forest"] = ints(s.forest);
  j["disconnected"] = ints(s.disconnected);
  return j;
}

// ---- argument parsing -----------------------------------------------------

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("--") + name + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

// ---- work directory -------------------------------------------------------

fs::path in_dir(const Context& ctx, const char* name) { return fs::path(ctx.dir) / name; }

fs::path instance_path(const Context& ctx) {
  return ctx.instance.empty() ? in_dir(ctx, kInstanceFile) : fs::path(ctx.instance);
}

fs::path point_path(const Context& ctx) { return ctx.point.empty() ? in_dir(ctx, kPointFile) : fs::path(ctx.point); }

void require_file(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw ValidationError("missing " + p.string() + " (" + hint + ")");
}

PcsfInstance load_instance(const Context& ctx) {
  auto p = instance_path(ctx);
  require_file(p, "run `pcsf gen ...` or pass --instance");
  return read_instance(p);
}

FracSolution load_point(const Context& ctx, const PcsfInstance& inst) {
  auto p = point_path(ctx);
  require_file(p, "run `pcsf gen layered|gadget` or pass --point");
  return read_solution(p, inst.graph.edge_count(), inst.pair_count());
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

json load_construction(const Context& ctx) {
  auto p = in_dir(ctx, kConstructionFile);
  require_file(p, "run `pcsf gen layered|gadget` first");
  return read_json(p);
}

LayeredConstruction rebuild_layered(const json& c) {
  if (c.value("kind", "") != "layered") throw ValidationError("work directory does not hold a layered construction");
  return build_layered(make_base(c.at("base").get<std::string>()), c.at("m").get<int>(), c.at("k").get<int>());
}

PointMode point_mode(const std::string& mode) {
  require(mode == "gap" || mode == "lmp", "--mode must be gap or lmp");
  return mode == "gap" ? PointMode::Gap : PointMode::Lmp;
}

DominanceMode dominance_mode(const std::string& mode) {
  require(mode == "gap" || mode == "lmp", "--mode must be gap or lmp");
  return mode == "gap" ? DominanceMode::Gap : DominanceMode::Lmp;
}

// Starts a fresh work directory: artifacts of the previous instance go away.
void reset_workspace(const Context& ctx) {
  fs::create_directories(ctx.dir);
  for (const char* name : {kInstanceFile, kPointFile, kConstructionFile, kFamilyFile, kDistributionFile,
                           kDistributionMeta, kWitnessFile, kLpSolutionFile}) {
    fs::remove(in_dir(ctx, name));
  }
}

void save_distribution(const Context& ctx, const ForestDistribution& dist, const Rational& scale,
                       DominanceMode mode) {
  write_distribution(dist, in_dir(ctx, kDistributionFile));
  json meta;
  meta["scale"] = to_string(scale);
  meta["mode"] = to_string(mode);
  write_json(in_dir(ctx, kDistributionMeta), meta);
}

// Text files number nodes by first appearance, so compare through names.
bool same_by_name(const PcsfInstance& a, const PcsfInstance& b) {
  if (a.graph.edge_count() != b.graph.edge_count() || a.pair_count() != b.pair_count() || a.costs != b.costs) {
    return false;
  }
  for (EdgeId e = 0; e < a.graph.edge_count(); ++e) {
    const auto& ea = a.graph.edge(e);
    const auto& eb = b.graph.edge(e);
    if (a.name(ea.u) != b.name(eb.u) || a.name(ea.v) != b.name(eb.v)) return false;
  }
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.name(a.pairs[i].s) != b.name(b.pairs[i].s) || a.name(a.pairs[i].t) != b.name(b.pairs[i].t)) return false;
    if (!(a.penalties[i] == b.penalties[i])) return false;
  }
  return true;
}

json instance_summary(const PcsfInstance& inst) {
  json j;
  j["nodes"] = inst.graph.node_count();
  j["edges"] = inst.graph.edge_count();
  j["pairs"] = inst.pair_count();
  return j;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string base = "k4";
  int m = 4;
  int k = 0;
  std::string mode = "gap";
  int nodes = 6;
  int edges = 9;
  int pairs = 3;
  bool infinite = false;
};

json gen_layered(const Context& ctx, const GenArgs& a) {
  const PointMode mode = point_mode(a.mode);
  require(a.m >= 1, "--m must be at least 1");
  require(a.k >= 0, "--k must be nonnegative");
  auto lc = build_layered(make_base(a.base), a.m, a.k);
  auto inst = layered_instance(lc);
  auto point = canonical_point(lc, mode);
  reset_workspace(ctx);
  write_instance(inst, in_dir(ctx, kInstanceFile));
  write_solution(point, in_dir(ctx, kPointFile));
  write_json(in_dir(ctx, kConstructionFile),
             json{{"kind", "layered"}, {"base", a.base}, {"m", a.m}, {"k", a.k}, {"mode", a.mode}});
  json out = instance_summary(inst);
  out["copies"] = lc.copies.size();
  out["base_degree"] = lc.base_degree;
  put(out, "point_value", lp_objective(inst, point));
  return out;
}

json gen_gadget(const Context& ctx, const GenArgs& a) {
  require(a.k >= 2 && a.k % 2 == 0, "--k must be an even integer >= 2");
  auto g = pcst_gadget_instance(a.k);
  auto fam = gadget_tight_family(g);
  reset_workspace(ctx);
  write_instance(g.instance, in_dir(ctx, kInstanceFile));
  write_solution(g.point, in_dir(ctx, kPointFile));
  {
    std::ofstream out(in_dir(ctx, kFamilyFile));
    write_constraint_family(g.instance, fam.constraints, out);
  }
  write_json(in_dir(ctx, kConstructionFile), json{{"kind", "gadget"}, {"k", a.k}});
  json out = instance_summary(g.instance);
  out["family_size"] = fam.constraints.size();
  out["wavy_edges"] = g.wavy.size();
  out["wiring"] = g.wiring;
  put(out, "point_value", lp_objective(g.instance, g.point));
  return out;
}

json gen_base(const Context& ctx, const GenArgs& a) {
  auto base = make_base(a.base);
  auto inst = make_instance(base.graph);
  reset_workspace(ctx);
  write_instance(inst, in_dir(ctx, kInstanceFile));
  write_json(in_dir(ctx, kConstructionFile), json{{"kind", "base"}, {"base", a.base}});
  json out = instance_summary(inst);
  out["label"] = base.label;
  out["degree"] = base.degree;
  return out;
}

json gen_random(const Context& ctx, const GenArgs& a) {
  auto inst = random_instance(ctx.seed, RandomSpec{a.nodes, a.edges, a.pairs, a.infinite});
  reset_workspace(ctx);
  write_instance(inst, in_dir(ctx, kInstanceFile));
  write_json(in_dir(ctx, kConstructionFile), json{{"kind", "random"},
                                                  {"seed", ctx.seed},
                                                  {"nodes", a.nodes},
                                                  {"edges", a.edges},
                                                  {"pairs", a.pairs},
                                                  {"infinite", a.infinite}});
  return instance_summary(inst);
}

// ---- lp -------------------------------------------------------------------

struct LpArgs {
  bool tol = false;
  bool as_point = false;
  std::string family = "gadget";
};

SeparationOptions separation(const LpArgs& a) {
  SeparationOptions opts;
  opts.exact = !a.tol;
  return opts;
}

json lp_solve(const Context& ctx, const LpArgs& a) {
  auto inst = load_instance(ctx);
  auto res = solve_lp(inst, separation(a));
  write_solution(res.solution, a.as_point ? point_path(ctx) : in_dir(ctx, kLpSolutionFile));
  json out;
  put(out, "value", res.value);
  out["iterations"] = res.iterations;
  out["cuts_generated"] = res.cuts_generated;
  json cuts = json::array();
  for (const auto& c : res.active_cuts) cuts.push_back(c.describe(inst));
  out["active_cuts"] = cuts;
  out["x"] = rationals(res.solution.x);
  out["z"] = rationals(res.solution.z);
  return out;
}

json lp_check(const Context& ctx, const LpArgs& a) {
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  auto res = check_feasible(inst, point, separation(a));
  json out;
  out["feasible"] = res.feasible;
  out["violated"] = res.violated ? json(res.violated->describe(inst)) : json(nullptr);
  put(out, "objective", lp_objective(inst, point));
  return out;
}

json lp_verify_vertex(const Context& ctx, const LpArgs& a) {
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  std::vector<CutConstraint> family;
  if (a.family == "gadget") {
    auto c = load_construction(ctx);
    if (c.value("kind", "") != "gadget") throw ValidationError("--family gadget needs a work directory from `gen gadget`");
    auto g = pcst_gadget_instance(c.at("k").get<int>());
    if (!same_by_name(g.instance, inst)) throw ValidationError("instance does not match the recorded gadget");
    // Edge and pair ids agree; node ids follow the generator.
    family = gadget_tight_family(g).constraints;
    inst = std::move(g.instance);
  } else {
    family = read_constraint_family(a.family, inst);
  }
  auto rep = verify_vertex(inst, point, family);
  std::vector<char> slack(family.size(), 0);
  for (int i : rep.slack_members) slack[static_cast<std::size_t>(i)] = 1;
  json tight = json::array();
  json loose = json::array();
  for (std::size_t i = 0; i < family.size(); ++i) (slack[i] ? loose : tight).push_back(family[i].describe(inst));
  json out;
  out["feasible"] = rep.is_feasible;
  out["violated"] = rep.violated ? json(rep.violated->describe(inst)) : json(nullptr);
  out["all_tight"] = rep.all_tight;
  out["unique"] = rep.unique;
  out["rank"] = rep.rank;
  out["dimension"] = rep.dimension;
  out["all_x_positive"] = rep.all_x_positive;
  put(out, "max_coord", rep.max_coordinate);
  out["tight"] = tight;
  out["slack"] = loose;
  return out;
}

// ---- ip -------------------------------------------------------------------

struct IpArgs {
  bool enumerate = false;
  int max_edges = 0;  // 0: default cap
};

IpOptions ip_options(const IpArgs& a) {
  IpOptions opts;
  if (a.max_edges > 0) opts.max_edges = a.max_edges;
  return opts;
}

json ip_solve(const Context& ctx, const IpArgs& a) {
  auto inst = load_instance(ctx);
  if (a.enumerate) {
    auto res = enumerate_ip(inst, a.max_edges > 0 ? a.max_edges : 20);
    if (res.optimal.empty()) throw InfeasibleError("no forest connects every infinite-penalty pair");
    json out = solution_json(res.optimal.front());
    put(out, "ip", res.value);
    out["optimal_forests"] = res.optimal.size();
    out["forests_scanned"] = res.forests;
    return out;
  }
  IpStats stats;
  auto sol = solve_ip(inst, ip_options(a), &stats);
  json out = solution_json(sol);
  put(out, "ip", sol.objective());
  out["nodes"] = stats.nodes;
  out["lp_solves"] = stats.lp_solves;
  return out;
}

// ---- round ----------------------------------------------------------------

struct RoundArgs {
  std::string method = "threshold";
  std::string theta = "1/3";
  std::string gamma;
  std::string p = "3/4";
};

json round_point(const Context& ctx, const RoundArgs& a) {
  require(a.method == "threshold" || a.method == "best" || a.method == "two-value",
          "--method must be threshold, best or two-value");
  const Rational theta = rational_arg(a.theta, "theta");
  const Rational p = rational_arg(a.p, "p");
  require(sgn(theta) > 0 && theta <= 1, "--theta must lie in (0, 1]");
  require(sgn(p) > 0 && p <= 1, "--p must lie in (0, 1]");
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  RoundingResult res;
  json out;
  out["method"] = a.method;
  if (a.method == "threshold") {
    res = threshold_round(inst, point, theta);
  } else if (a.method == "best") {
    res = best_threshold_round(inst, point);
  } else {
    auto gamma = two_value_gamma(point);
    if (!gamma) throw ValidationError("two-value rounding needs every z in {0, gamma}");
    if (!a.gamma.empty() && rational_arg(a.gamma, "gamma") != *gamma) {
      throw ValidationError("--gamma " + a.gamma + " does not match the point's value " + to_string(*gamma));
    }
    res = two_value_round(inst, point, p);
    put(out, "gamma", *gamma);
    put(out, "p", p);
    out["connect_all"] = res.connect_all;
  }
  out["solution"] = solution_json(res.solution);
  put(out, "objective", res.solution.objective());
  put(out, "lp_value", res.lp_value);
  put(out, "ratio_bound", res.factor);
  if (a.method != "two-value") put(out, "theta", res.theta);
  if (sgn(res.lp_value) > 0) {
    put(out, "observed_ratio", res.solution.objective() / res.lp_value);
  } else {
    out["observed_ratio"] = nullptr;
  }
  out["within_bound"] = res.solution.objective() <= res.factor * res.lp_value;
  return out;
}

// ---- decompose ------------------------------------------------------------

struct DecomposeArgs {
  bool enumerate = false;
  bool exact_pricing = false;
  std::string at;  // min-beta: feasibility at this beta
  std::string alpha = "9/4";
  std::string scale;
  std::string mode;
};

DecompositionOptions decomposition_options(const DecomposeArgs& a) {
  DecompositionOptions opts;
  opts.heuristic_pricing = !a.exact_pricing;
  return opts;
}

json decompose_min_alpha(const Context& ctx, const DecomposeArgs& a) {
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  auto res = a.enumerate ? min_alpha_enumerated(inst, point) : min_alpha(inst, point, decomposition_options(a));
  save_distribution(ctx, res.dist, res.value, DominanceMode::Gap);
  write_instance(witness_costs_from_dual(inst, point, res.witness, DominanceMode::Gap), in_dir(ctx, kWitnessFile));
  json out;
  put(out, "alpha_star", res.value);
  out["witness_written"] = true;
  out["support"] = res.dist.support.size();
  out["iterations"] = res.iterations;
  out["columns"] = res.columns;
  out["exact_pricing_calls"] = res.exact_pricing_calls;
  return out;
}

json decompose_min_beta(const Context& ctx, const DecomposeArgs& a) {
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  json out;
  if (!a.at.empty()) {
    const Rational beta = rational_arg(a.at, "at");
    require(beta >= 1, "--at must be at least 1");
    auto res = feasibility_at_beta(inst, point, beta, decomposition_options(a));
    put(out, "beta", beta);
    put(out, "value", res.value);
    out["feasible"] = res.feasible;
    out["iterations"] = res.iterations;
    if (res.feasible) save_distribution(ctx, res.dist, beta, DominanceMode::Lmp);
    out["distribution_written"] = res.feasible;
    return out;
  }
  auto res = min_beta(inst, point, decomposition_options(a));
  save_distribution(ctx, res.dist, res.value, DominanceMode::Lmp);
  write_instance(witness_costs_from_dual(inst, point, res.witness, DominanceMode::Lmp, res.value),
                 in_dir(ctx, kWitnessFile));
  put(out, "beta_star", res.value);
  out["witness_written"] = true;
  out["support"] = res.dist.support.size();
  out["iterations"] = res.iterations;
  out["columns"] = res.columns;
  out["exact_pricing_calls"] = res.exact_pricing_calls;
  return out;
}

json decompose_explicit(const Context& ctx, const DecomposeArgs& a) {
  const Rational alpha = rational_arg(a.alpha, "alpha");
  require(alpha >= 2 && alpha <= 3, "--alpha must lie in [2, 3]");
  auto c = load_construction(ctx);
  if (c.value("mode", "gap") != "gap") throw ValidationError("explicit distribution needs a gap-mode construction");
  auto lc = rebuild_layered(c);
  auto dist = explicit_gap_distribution(lc, alpha);
  save_distribution(ctx, dist, alpha, DominanceMode::Gap);
  json out;
  put(out, "alpha", alpha);
  out["support"] = dist.support.size();
  return out;
}

struct Scaled {
  Rational scale;
  DominanceMode mode;
};

// Flags win over the metadata written next to the distribution.
Scaled scale_and_mode(const Context& ctx, const DecomposeArgs& a) {
  json meta;
  if (fs::exists(in_dir(ctx, kDistributionMeta))) meta = read_json(in_dir(ctx, kDistributionMeta));
  std::string scale = a.scale.empty() ? meta.value("scale", "") : a.scale;
  std::string mode = a.mode.empty() ? meta.value("mode", "gap") : a.mode;
  require(!scale.empty(), "no scale recorded; pass --scale");
  Scaled s{rational_arg(scale, "scale"), dominance_mode(mode)};
  require(sgn(s.scale) > 0, "--scale must be positive");
  return s;
}

ForestDistribution load_distribution(const Context& ctx) {
  auto p = in_dir(ctx, kDistributionFile);
  require_file(p, "run `pcsf decompose min-alpha|min-beta|explicit` first");
  return read_distribution(p);
}

json decompose_verify(const Context& ctx, const DecomposeArgs& a) {
  auto inst = load_instance(ctx);
  auto point = load_point(ctx, inst);
  auto dist = load_distribution(ctx);
  auto [scale, mode] = scale_and_mode(ctx, a);
  auto rep = verify_distribution(inst, point, dist, scale, mode);
  json out;
  out["passes"] = rep.passes;
  put(out, "scale", scale);
  out["mode"] = to_string(mode);
  out["support"] = dist.support.size();
  out["edges_ok"] = rep.edge_violations.empty();
  out["pairs_ok"] = rep.pair_violations.empty();
  out["edge_violations"] = ints(rep.edge_violations);
  out["pair_violations"] = ints(rep.pair_violations);
  put(out, "max_marginal", rep.max_marginal);
  put(out, "min_pair_prob", rep.min_pair_prob);
  auto c = fs::exists(in_dir(ctx, kConstructionFile)) ? read_json(in_dir(ctx, kConstructionFile)) : json::object();
  if (c.value("kind", "") == "layered") {
    auto lc = rebuild_layered(c);
    if (!same_by_name(layered_instance(lc), inst)) throw ValidationError("instance does not match the recorded construction");
    auto classes = layered_pair_classes(lc);
    auto min_over = [&](const std::vector<PairId>& ids) -> json {
      if (ids.empty()) return nullptr;
      Rational m = rep.pair_probs[static_cast<std::size_t>(ids.front())];
      for (PairId i : ids) m = std::min(m, rep.pair_probs[static_cast<std::size_t>(i)]);
      return to_string(m);
    };
    out["branch_pairs_min"] = min_over(classes.branch);
    out["root_pairs_min"] = min_over(classes.root);
  }
  return out;
}

json decompose_trace(const Context& ctx, const DecomposeArgs& a) {
  auto lc = rebuild_layered(load_construction(ctx));
  auto inst = layered_instance(lc);
  if (!same_by_name(inst, load_instance(ctx))) throw ValidationError("instance does not match the recorded construction");
  auto dist = load_distribution(ctx);
  auto [scale, mode] = scale_and_mode(ctx, a);
  auto tr = chain_trace(lc, dist, scale);
  json steps = json::array();
  for (const auto& s : tr.steps) {
    json j;
    j["j"] = s.j;
    j["root"] = inst.name(s.root);
    j["copy"] = s.copy;
    j["next"] = s.next >= 0 ? json(inst.name(s.next)) : json(nullptr);
    j["p_root"] = to_string(s.p_root);
    j["p_next"] = to_string(s.p_next);
    j["step_bound"] = to_string(s.step_bound);
    j["step_ok"] = s.step_ok;
    j["path_and_cut"] = to_string(s.path_and_cut);
    j["path_and_cut_bound"] = to_string(s.path_and_cut_bound);
    j["path_and_cut_ok"] = s.path_and_cut_ok;
    j["recursion_bound"] = to_string(s.recursion_bound);
    j["recursion_ok"] = s.recursion_ok;
    j["leaf_ok"] = s.witness.leaf_ok;
    j["path_ok"] = s.witness.path_ok;
    steps.push_back(j);
  }
  json out;
  out["all_hold"] = tr.all_hold;
  out["truncated"] = tr.truncated;
  out["note"] = tr.note;
  put(out, "final_probability", tr.final_probability);
  put(out, "closed_form", tr.closed_form);
  out["steps"] = steps;
  return out;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  long n = 100;
  int k = 0;
  int k_max = -1;
  int l = 3;
  std::string csv;
};

json bounds_alpha(const Context&, const BoundsArgs& a) {
  const int k_max = a.k_max < 0 ? a.k : a.k_max;
  require(k_max >= a.k, "--k-max must be at least --k");
  std::vector<PlotRow> rows;
  json list = json::array();
  bool monotone = true;
  std::optional<Rational> prev;
  for (int k = a.k; k <= k_max; ++k) {
    Rational b = bound_alpha(a.n, k);
    if (prev && b < *prev) monotone = false;
    prev = b;
    rows.push_back(PlotRow{a.n, k, 3, b, {}, {}, {}});
    json r{{"n", a.n}, {"k", k}};
    put(r, "bound", b);
    list.push_back(r);
  }
  if (!a.csv.empty()) export_plot_data(rows, a.csv);
  if (list.size() == 1) {
    json out = list.front();
    put(out, "limit", Rational(9, 4));
    put(out, "distance_to_limit", abs(Rational(9, 4) - *prev));
    return out;
  }
  return json{{"rows", list}, {"monotone_in_k", monotone}};
}

json bounds_beta(const Context&, const BoundsArgs& a) {
  const int k_max = a.k_max < 0 ? a.k : a.k_max;
  require(k_max >= a.k, "--k-max must be at least --k");
  std::vector<PlotRow> rows;
  json list = json::array();
  for (int k = a.k; k <= k_max; ++k) {
    Rational b = bound_beta(a.l, a.n, k);
    rows.push_back(PlotRow{a.n, k, a.l, b, {}, {}, {}});
    json r{{"n", a.n}, {"k", k}, {"l", a.l}};
    put(r, "bound", b);
    list.push_back(r);
  }
  if (!a.csv.empty()) export_plot_data(rows, a.csv);
  json out = list.size() == 1 ? list.front() : json{{"rows", list}};
  put(out, "asymptote", bound_beta_asymptote(a.l));
  return out;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  int sweep = 0;
  int nodes = 6;
  int edges = 9;
  int pairs = 3;
  std::string csv;
  int max_edges = 0;
};

json gap_json(const GapResult& g) {
  json j;
  put(j, "lp", g.lp);
  put(j, "ip", g.ip);
  put(j, "ratio", g.ratio);
  return j;
}

json report_gap(const Context& ctx, const ReportArgs& a) {
  IpOptions opts;
  if (a.max_edges > 0) opts.max_edges = a.max_edges;
  if (a.sweep <= 0) {
    auto inst = load_instance(ctx);
    auto g = gap(inst, opts);
    if (!a.csv.empty()) export_plot_data({PlotRow{{}, {}, {}, {}, {}, {}, g.ratio}}, a.csv);
    return gap_json(g);
  }
  std::vector<PlotRow> rows;
  json list = json::array();
  std::optional<Rational> worst;
  for (int i = 0; i < a.sweep; ++i) {
    const std::uint32_t seed = ctx.seed + static_cast<std::uint32_t>(i);
    auto inst = random_instance(seed, RandomSpec{a.nodes, a.edges, a.pairs, false});
    auto g = gap(inst, opts);
    if (!worst || g.ratio > *worst) worst = g.ratio;
    rows.push_back(PlotRow{inst.graph.node_count(), {}, {}, {}, {}, {}, g.ratio});
    json r = gap_json(g);
    r["seed"] = seed;
    list.push_back(r);
  }
  if (!a.csv.empty()) export_plot_data(rows, a.csv);
  json out{{"rows", list}};
  put(out, "max_ratio", *worst);
  return out;
}

// ---- driver ---------------------------------------------------------------

json error_json(const char* kind, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}};
}

int run(int argc, char** argv) {
  CLI::App app{"Prize-collecting Steiner forest LP experiments"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  Context ctx;
  app.add_option("--dir", ctx.dir, "Work directory")->capture_default_str();
  app.add_option("--instance", ctx.instance, "Instance file (default <dir>/instance.txt)");
  app.add_option("--point", ctx.point, "Fractional point file (default <dir>/point.txt)");
  app.add_option("--seed", ctx.seed, "Seed for random generation")->capture_default_str();
  app.add_option("--threads", ctx.threads, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output", ctx.output, "Also write the JSON result to this file");

  std::function<json()> action;
  auto bind = [&](CLI::App* cmd, auto fn) { cmd->callback([&action, fn] { action = fn; }); };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance into the work directory");
  gen_cmd->require_subcommand(1);
  auto* gen_layered_cmd = gen_cmd->add_subcommand("layered", "Layered construction with its canonical point");
  gen_layered_cmd->add_option("--base", gen.base, "k4, complete:<q>, prism or file:<path>")->capture_default_str();
  gen_layered_cmd->add_option("--m", gen.m, "Subdivision nodes per base edge")->capture_default_str();
  gen_layered_cmd->add_option("--k", gen.k, "Recursion depth")->capture_default_str();
  gen_layered_cmd->add_option("--mode", gen.mode, "gap or lmp canonical point")->capture_default_str();
  bind(gen_layered_cmd, [&] { return gen_layered(ctx, gen); });
  auto* gen_gadget_cmd = gen_cmd->add_subcommand("gadget", "Tree gadget instance with its extreme point");
  gen_gadget_cmd->add_option("--k", gen.k, "Number of gadgets (even)")->required();
  bind(gen_gadget_cmd, [&] { return gen_gadget(ctx, gen); });
  auto* gen_base_cmd = gen_cmd->add_subcommand("base", "Base graph with unit costs and no pairs");
  gen_base_cmd->add_option("--base", gen.base, "k4, complete:<q>, prism or file:<path>")->capture_default_str();
  bind(gen_base_cmd, [&] { return gen_base(ctx, gen); });
  auto* gen_random_cmd = gen_cmd->add_subcommand("random", "Random connected instance from --seed");
  gen_random_cmd->add_option("--nodes", gen.nodes)->capture_default_str();
  gen_random_cmd->add_option("--edges", gen.edges)->capture_default_str();
  gen_random_cmd->add_option("--pairs", gen.pairs)->capture_default_str();
  gen_random_cmd->add_flag("--infinite", gen.infinite, "Allow infinite penalties");
  bind(gen_random_cmd, [&] { return gen_random(ctx, gen); });

  LpArgs lp;
  auto* lp_cmd = app.add_subcommand("lp", "Cut LP");
  lp_cmd->require_subcommand(1);
  lp_cmd->add_flag("--tol", lp.tol, "Separate with tolerance 1e-9 instead of exactly");
  auto* lp_solve_cmd = lp_cmd->add_subcommand("solve", "Solve the cut LP of the instance");
  lp_solve_cmd->add_flag("--as-point", lp.as_point, "Store the optimum as the work directory point");
  bind(lp_solve_cmd, [&] { return lp_solve(ctx, lp); });
  bind(lp_cmd->add_subcommand("check", "Check feasibility of the point"), [&] { return lp_check(ctx, lp); });
  auto* lp_vertex_cmd = lp_cmd->add_subcommand("verify-vertex", "Certify the point as an extreme point");
  lp_vertex_cmd->add_option("--family", lp.family, "gadget or a constraint family file")->capture_default_str();
  bind(lp_vertex_cmd, [&] { return lp_verify_vertex(ctx, lp); });

  IpArgs ip;
  auto* ip_cmd = app.add_subcommand("ip", "Exact integral optimum");
  ip_cmd->require_subcommand(1);
  auto* ip_solve_cmd = ip_cmd->add_subcommand("solve", "Branch and bound (or full enumeration)");
  ip_solve_cmd->add_flag("--enumerate", ip.enumerate, "Enumerate every forest");
  ip_solve_cmd->add_option("--max-edges", ip.max_edges, "Edge cap (default PCSF_IP_MAX_EDGES or 40)");
  bind(ip_solve_cmd, [&] { return ip_solve(ctx, ip); });

  RoundArgs rnd;
  auto* round_cmd = app.add_subcommand("round", "Round the point to a forest");
  round_cmd->add_option("--method", rnd.method, "threshold, best or two-value")->capture_default_str();
  round_cmd->add_option("--theta", rnd.theta, "Threshold for --method threshold")->capture_default_str();
  round_cmd->add_option("--gamma", rnd.gamma, "Expected nonzero z value for two-value");
  round_cmd->add_option("--p", rnd.p, "Connect-all probability for two-value")->capture_default_str();
  bind(round_cmd, [&] { return round_point(ctx, rnd); });

  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Dominating convex decompositions");
  dec_cmd->require_subcommand(1);
  auto* dec_alpha = dec_cmd->add_subcommand("min-alpha", "Smallest alpha admitting a decomposition");
  dec_alpha->add_flag("--enumerate", dec.enumerate, "Use every forest as a column");
  dec_alpha->add_flag("--exact-pricing", dec.exact_pricing, "Skip heuristic pricing");
  bind(dec_alpha, [&] { return decompose_min_alpha(ctx, dec); });
  auto* dec_beta = dec_cmd->add_subcommand("min-beta", "Smallest LMP beta, or feasibility at --at");
  dec_beta->add_option("--at", dec.at, "Test feasibility at this beta");
  dec_beta->add_flag("--exact-pricing", dec.exact_pricing, "Skip heuristic pricing");
  bind(dec_beta, [&] { return decompose_min_beta(ctx, dec); });
  auto* dec_explicit = dec_cmd->add_subcommand("explicit", "Explicit distribution on a layered construction");
  dec_explicit->add_option("--alpha", dec.alpha, "Scale in [2, 3]")->capture_default_str();
  bind(dec_explicit, [&] { return decompose_explicit(ctx, dec); });
  auto* dec_verify = dec_cmd->add_subcommand("verify", "Check the stored distribution against the point");
  dec_verify->add_option("--scale", dec.scale, "Override the recorded scale");
  dec_verify->add_option("--mode", dec.mode, "Override the recorded mode (gap or lmp)");
  bind(dec_verify, [&] { return decompose_verify(ctx, dec); });
  auto* dec_trace = dec_cmd->add_subcommand("trace", "Connection-probability chain on a layered construction");
  dec_trace->add_option("--scale", dec.scale, "Override the recorded scale");
  bind(dec_trace, [&] { return decompose_trace(ctx, dec); });

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form lower bounds");
  bounds_cmd->require_subcommand(1);
  auto* bounds_alpha_cmd = bounds_cmd->add_subcommand("alpha", "Gap bound for the 3-regular construction");
  auto* bounds_beta_cmd = bounds_cmd->add_subcommand("beta", "LMP bound for an l-regular base");
  for (auto* c : {bounds_alpha_cmd, bounds_beta_cmd}) {
    c->add_option("--n", bnd.n, "Subdivision parameter")->capture_default_str();
    c->add_option("--k", bnd.k, "Depth (first depth with --k-max)")->capture_default_str();
    c->add_option("--k-max", bnd.k_max, "Last depth of a sweep");
    c->add_option("--csv", bnd.csv, "Write plot data");
  }
  bounds_beta_cmd->add_option("--l", bnd.l, "Base degree")->capture_default_str();
  bind(bounds_alpha_cmd, [&] { return bounds_alpha(ctx, bnd); });
  bind(bounds_beta_cmd, [&] { return bounds_beta(ctx, bnd); });

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Summaries");
  report_cmd->require_subcommand(1);
  auto* report_gap_cmd = report_cmd->add_subcommand("gap", "LP value, IP value and their ratio");
  report_gap_cmd->add_option("--sweep", rep.sweep, "Random instances from --seed on (0: the work directory)");
  report_gap_cmd->add_option("--nodes", rep.nodes)->capture_default_str();
  report_gap_cmd->add_option("--edges", rep.edges)->capture_default_str();
  report_gap_cmd->add_option("--pairs", rep.pairs)->capture_default_str();
  report_gap_cmd->add_option("--max-edges", rep.max_edges, "Edge cap for the exact solver");
  report_gap_cmd->add_option("--csv", rep.csv, "Write plot data");
  bind(report_gap_cmd, [&] { return report_gap(ctx, rep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json("usage", e.what()).dump(2) << '\n';
    return 2;
  }

  json result;
  try {
    result = action();
  } catch (const Error& e) {
    std::cout << error_json(e.kind(), e.what()).dump(2) << '\n';
    return e.exit_code();
  } catch (const json::exception& e) {
    std::cout << error_json("validation", e.what()).dump(2) << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cout << error_json("io", e.what()).dump(2) << '\n';
    return 1;
  }
  const std::string text = result.dump(2) + "\n";
  std::cout << text;
  if (!ctx.output.empty()) {
    std::ofstream out(ctx.output);
    if (!out || !(out << text)) {
      std::cerr << "cannot write " << ctx.output << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace
}  // namespace pcsf::cli

int main(int argc, char** argv) { return pcsf::cli::run(argc, argv); }
