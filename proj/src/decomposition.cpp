#include "pcsf/decomposition.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pcsf/cut_lp.hpp"
#include "pcsf/error.hpp"
#include "pcsf/rounding.hpp"
#include "pcsf/simplex.hpp"

namespace pcsf {

// ---------------------------------------------------------------------------
// Distributions

Rational ForestDistribution::total_weight() const {
  Rational total(0);
  for (const auto& wf : support) total += wf.weight;
  return total;
}

void ForestDistribution::validate(const Graph& g) const {
  for (std::size_t q = 0; q < support.size(); ++q) {
    const auto& wf = support[q];
    if (wf.weight < 0) throw ValidationError("forest " + std::to_string(q) + " has negative weight");
    for (EdgeId e : wf.forest) {
      if (e < 0 || e >= g.edge_count()) {
        throw ValidationError("forest " + std::to_string(q) + " references unknown edge " + std::to_string(e));
      }
    }
    if (!is_forest(g, wf.forest)) throw ValidationError("support set " + std::to_string(q) + " contains a cycle");
  }
  if (total_weight() != 1) throw ValidationError("weights sum to " + to_string(total_weight()) + ", not 1");
}

ForestDistribution parse_distribution(std::istream& in) {
  ForestDistribution dist;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    std::string extra;
    if (!(ls >> value) || (ls >> extra)) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected '<keyword> <value>'");
    }
    try {
      if (key == "forest") {
        dist.support.push_back({{}, parse_rational(value)});
      } else if (key == "e") {
        if (dist.support.empty()) throw ValidationError("edge listed before any forest");
        std::size_t used = 0;
        const int id = std::stoi(value, &used);
        if (used != value.size() || id < 0) throw ValidationError("bad edge id '" + value + "'");
        dist.support.back().forest.push_back(id);
      } else {
        throw ValidationError("unknown keyword '" + key + "'");
      }
    } catch (const ValidationError& err) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + err.what());
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(line_no) + ": bad edge id '" + value + "'");
    }
  }
  for (auto& wf : dist.support) wf.forest = make_edge_set(std::move(wf.forest));
  return dist;
}

void write_distribution(const ForestDistribution& dist, std::ostream& out) {
  for (const auto& wf : dist.support) {
    out << "forest " << to_string(wf.weight) << '\n';
    for (EdgeId e : wf.forest) out << "e " << e << '\n';
  }
}

ForestDistribution read_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_distribution(in);
}

void write_distribution(const ForestDistribution& dist, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_distribution(dist, out);
}

const char* to_string(DominanceMode mode) { return mode == DominanceMode::Gap ? "gap" : "lmp"; }

DistributionReport verify_distribution(const PcsfInstance& inst, const FracSolution& point,
                                       const ForestDistribution& dist, const Rational& scale, DominanceMode mode) {
  check_dimensions(inst, point);
  dist.validate(inst.graph);
  DistributionReport rep;
  rep.marginals.assign(static_cast<std::size_t>(inst.graph.edge_count()), Rational(0));
  rep.pair_probs.assign(static_cast<std::size_t>(inst.pair_count()), Rational(0));
  for (const auto& wf : dist.support) {
    for (EdgeId e : wf.forest) rep.marginals[static_cast<std::size_t>(e)] += wf.weight;
    auto label = component_labels(inst.graph, wf.forest);
    for (PairId i = 0; i < inst.pair_count(); ++i) {
      const auto& pr = inst.pairs[static_cast<std::size_t>(i)];
      if (label[static_cast<std::size_t>(pr.s)] == label[static_cast<std::size_t>(pr.t)]) {
        rep.pair_probs[static_cast<std::size_t>(i)] += wf.weight;
      }
    }
  }
  rep.max_marginal = 0;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    const auto& mgl = rep.marginals[static_cast<std::size_t>(e)];
    if (mgl > rep.max_marginal) rep.max_marginal = mgl;
    if (mgl > scale * point.x[static_cast<std::size_t>(e)]) rep.edge_violations.push_back(e);
  }
  rep.min_pair_prob = 1;
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    const auto& prob = rep.pair_probs[static_cast<std::size_t>(i)];
    if (prob < rep.min_pair_prob) rep.min_pair_prob = prob;
    const auto& z = point.z[static_cast<std::size_t>(i)];
    const Rational floor = mode == DominanceMode::Gap ? Rational(1 - scale * z) : Rational(1 - z);
    if (prob < floor) rep.pair_violations.push_back(i);
  }
  rep.passes = rep.edge_violations.empty() && rep.pair_violations.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Column generation over integral solutions

namespace {

struct Column {
  EdgeSet forest;
  std::vector<char> disc;  // per pair
};

enum class MasterKind { MinScale, MaxWeight };

struct Master {
  MasterKind kind = MasterKind::MinScale;
  bool scale_x = true;
  bool scale_z = true;
  Rational beta{1};  // MaxWeight: x bound is beta * x*
  std::vector<Rational> x_target;
  std::vector<Rational> z_target;
  std::vector<char> allowed;    // edges with x* > 0
  std::vector<PairId> z_rows;   // pairs with z* > 0
};

struct MasterSolution {
  Rational value;
  std::vector<Rational> lambda;
  DualWitness dual;
  Rational threshold;  // a column helps iff d.x + rho.z < threshold
  std::vector<int> basis;
};

Master make_master(const PcsfInstance& inst, const FracSolution& target, MasterKind kind) {
  Master m;
  m.kind = kind;
  m.x_target = target.x;
  m.z_target = target.z;
  m.allowed.assign(target.x.size(), 0);
  for (std::size_t e = 0; e < target.x.size(); ++e) m.allowed[e] = target.x[e] > 0 ? 1 : 0;
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    if (target.z[static_cast<std::size_t>(i)] > 0) m.z_rows.push_back(i);
  }
  return m;
}

// Columns are only ever appended, so a previous basis stays primal feasible
// once its indices are shifted past the new column slots.
MasterSolution solve_master(const Master& m, const std::vector<Column>& cols, const std::vector<int>& warm = {},
                            std::size_t warm_cols = 0) {
  lp::Problem prob;
  const bool min_scale = m.kind == MasterKind::MinScale;
  const int s = min_scale ? prob.add_variable(Rational(1)) : -1;
  std::vector<int> lam;
  for (std::size_t q = 0; q < cols.size(); ++q) lam.push_back(prob.add_variable(min_scale ? Rational(0) : Rational(-1)));

  std::vector<EdgeId> edge_rows;
  for (std::size_t e = 0; e < m.allowed.size(); ++e) {
    if (!m.allowed[e]) continue;
    lp::Row row;
    row.sense = lp::Sense::GreaterEqual;
    const Rational& xt = m.x_target[e];
    if (min_scale && m.scale_x) {
      row.coeffs.emplace_back(s, xt);
      row.rhs = 0;
    } else {
      row.rhs = -(min_scale ? xt : Rational(m.beta * xt));
    }
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (std::binary_search(cols[q].forest.begin(), cols[q].forest.end(), static_cast<EdgeId>(e))) {
        row.coeffs.emplace_back(lam[q], Rational(-1));
      }
    }
    prob.add_row(std::move(row));
    edge_rows.push_back(static_cast<EdgeId>(e));
  }
  for (PairId i : m.z_rows) {
    lp::Row row;
    row.sense = lp::Sense::GreaterEqual;
    const Rational& zt = m.z_target[static_cast<std::size_t>(i)];
    if (min_scale && m.scale_z) {
      row.coeffs.emplace_back(s, zt);
      row.rhs = 0;
    } else {
      row.rhs = -zt;
    }
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (cols[q].disc[static_cast<std::size_t>(i)]) row.coeffs.emplace_back(lam[q], Rational(-1));
    }
    prob.add_row(std::move(row));
  }
  lp::Row convex;
  for (std::size_t q = 0; q < cols.size(); ++q) convex.coeffs.emplace_back(lam[q], min_scale ? Rational(1) : Rational(-1));
  convex.sense = min_scale ? lp::Sense::Equal : lp::Sense::GreaterEqual;
  convex.rhs = min_scale ? Rational(1) : Rational(-1);
  prob.add_row(std::move(convex));

  const int fixed = min_scale ? 1 : 0;
  const int old_vars = fixed + static_cast<int>(warm_cols);
  const int shift = static_cast<int>(cols.size() - warm_cols);
  for (int b : warm) prob.warm_basis.push_back(b < old_vars ? b : b + shift);
  auto sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) throw Error("dominance master LP did not reach an optimum");

  MasterSolution out;
  out.value = min_scale ? sol.objective : Rational(-sol.objective);
  for (int v : lam) out.lambda.push_back(sol.x[static_cast<std::size_t>(v)]);
  out.dual.d.assign(m.allowed.size(), Rational(0));
  out.dual.rho.assign(m.z_target.size(), Rational(0));
  std::size_t r = 0;
  for (EdgeId e : edge_rows) out.dual.d[static_cast<std::size_t>(e)] = sol.duals[r++];
  for (PairId i : m.z_rows) out.dual.rho[static_cast<std::size_t>(i)] = sol.duals[r++];
  out.dual.gamma = sol.duals[r];
  out.threshold = min_scale ? out.dual.gamma : Rational(1 - out.dual.gamma);
  out.basis = std::move(sol.basis);
  return out;
}

Column make_column(const PcsfInstance& inst, EdgeSet forest) {
  Column c;
  c.disc = disconnection_vector(inst.graph, inst.pairs, forest);
  c.forest = std::move(forest);
  return c;
}

EdgeSet support_forest(const PcsfInstance& inst, const std::vector<char>& allowed) {
  UnionFind uf(inst.graph.node_count());
  EdgeSet out;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    if (allowed[static_cast<std::size_t>(e)] && uf.unite(inst.graph.edge(e).u, inst.graph.edge(e).v)) out.push_back(e);
  }
  return out;
}

// Minimum spanning forest of the allowed edges under `weight`.
EdgeSet support_forest_by(const PcsfInstance& inst, const std::vector<char>& allowed, const Capacities& weight) {
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    if (allowed[static_cast<std::size_t>(e)]) order.push_back(e);
  }
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return weight[static_cast<std::size_t>(a)] < weight[static_cast<std::size_t>(b)];
  });
  UnionFind uf(inst.graph.node_count());
  EdgeSet out;
  for (EdgeId e : order) {
    if (uf.unite(inst.graph.edge(e).u, inst.graph.edge(e).v)) out.push_back(e);
  }
  return make_edge_set(std::move(out));
}

PricedProblem pricing_problem(const PcsfInstance& inst, const Master& m, const DualWitness& dual) {
  PricedProblem p;
  p.graph = &inst.graph;
  p.pairs = &inst.pairs;
  p.costs = dual.d;
  p.allowed = m.allowed;
  p.penalties.reserve(inst.pairs.size());
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    if (m.z_target[static_cast<std::size_t>(i)] == 0) {
      p.penalties.push_back(Penalty::infinite());
    } else {
      p.penalties.emplace_back(dual.rho[static_cast<std::size_t>(i)]);
    }
  }
  return p;
}

struct CgRun {
  MasterSolution master;
  std::vector<Column> cols;
  int iterations = 0;
  long exact_calls = 0;
};

CgRun column_generation(const PcsfInstance& inst, const Master& m, const DecompositionOptions& opts) {
  CgRun run;
  std::set<EdgeSet> seen;
  auto add = [&](EdgeSet f) {
    if (!seen.insert(f).second) throw Error("column generation priced an existing column");
    run.cols.push_back(make_column(inst, std::move(f)));
  };
  add(support_forest(inst, m.allowed));

  constexpr std::size_t kColumnsPerRound = 8;
  std::vector<int> warm;
  std::size_t warm_cols = 0;
  for (;;) {
    if (++run.iterations > opts.max_iterations) throw Error("column generation exceeded its iteration limit");
    run.master = solve_master(m, run.cols, warm, warm_cols);
    warm = run.master.basis;
    warm_cols = run.cols.size();
    const auto p = pricing_problem(inst, m, run.master.dual);

    std::vector<EdgeSet> basis;
    for (std::size_t q = 0; q < run.cols.size(); ++q) {
      if (run.master.lambda[q] > 0) basis.push_back(run.cols[q].forest);
    }

    std::vector<IntegralSolution> found;
    std::set<EdgeSet> fresh;
    auto consider = [&](IntegralSolution cand) {
      if (!cand.feasible || cand.objective() >= run.master.threshold) return;
      if (seen.count(cand.forest) || !fresh.insert(cand.forest).second) return;
      found.push_back(std::move(cand));
    };
    if (opts.heuristic_pricing) {
      consider(local_search(p, {}));
      consider(local_search(p, support_forest_by(inst, m.allowed, run.master.dual.d)));
      for (const auto& b : basis) {
        if (found.size() >= kColumnsPerRound) break;
        consider(local_search(p, b));
      }
    }
    if (found.empty()) {
      ++run.exact_calls;
      if (auto best = solve_priced(p, run.master.threshold, basis, opts.ip)) consider(std::move(*best));
    }
    if (found.empty()) break;
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.objective() < b.objective(); });
    if (found.size() > kColumnsPerRound) found.resize(kColumnsPerRound);
    for (auto& f : found) add(std::move(f.forest));
  }
  return run;
}

ForestDistribution to_distribution(const std::vector<Column>& cols, const std::vector<Rational>& lambda) {
  ForestDistribution dist;
  for (std::size_t q = 0; q < cols.size(); ++q) {
    if (lambda[q] > 0) dist.support.push_back({cols[q].forest, lambda[q]});
  }
  return dist;
}

void require_feasible_point(const PcsfInstance& inst, const FracSolution& point) {
  check_dimensions(inst, point);
  auto res = check_feasible(inst, point);
  if (!res.feasible) {
    throw ValidationError("point is not feasible for the cut relaxation: " + res.violated->describe(inst));
  }
}

DecompositionResult finish(CgRun&& run) {
  DecompositionResult out;
  out.value = run.master.value;
  out.dist = to_distribution(run.cols, run.master.lambda);
  out.witness = std::move(run.master.dual);
  out.iterations = run.iterations;
  out.columns = static_cast<int>(run.cols.size());
  out.exact_pricing_calls = run.exact_calls;
  return out;
}

}  // namespace

DecompositionResult min_alpha(const PcsfInstance& inst, const FracSolution& point, const DecompositionOptions& opts) {
  if (inst.pair_count() == 0) throw ValidationError("min_alpha needs at least one terminal pair");
  require_feasible_point(inst, point);
  return finish(column_generation(inst, make_master(inst, point, MasterKind::MinScale), opts));
}

DecompositionResult min_alpha_enumerated(const PcsfInstance& inst, const FracSolution& point, int max_edges) {
  if (inst.pair_count() == 0) throw ValidationError("min_alpha needs at least one terminal pair");
  require_feasible_point(inst, point);
  auto m = make_master(inst, point, MasterKind::MinScale);
  const int usable = static_cast<int>(std::count(m.allowed.begin(), m.allowed.end(), 1));
  if (usable > max_edges) {
    throw ScaleCapError("support has " + std::to_string(usable) + " edges; enumeration cap is " + std::to_string(max_edges));
  }
  CgRun run;
  for_each_forest(inst.graph, m.allowed, [&](const EdgeSet& f) {
    auto col = make_column(inst, f);
    for (PairId i = 0; i < inst.pair_count(); ++i) {
      if (col.disc[static_cast<std::size_t>(i)] && point.z[static_cast<std::size_t>(i)] == 0) return;
    }
    run.cols.push_back(std::move(col));
  });
  run.master = solve_master(m, run.cols);
  run.iterations = 1;
  return finish(std::move(run));
}

DecompositionResult min_beta(const PcsfInstance& inst, const FracSolution& point, const DecompositionOptions& opts) {
  require_feasible_point(inst, point);
  auto m = make_master(inst, point, MasterKind::MinScale);
  m.scale_z = false;
  return finish(column_generation(inst, m, opts));
}

BetaFeasibility feasibility_at_beta(const PcsfInstance& inst, const FracSolution& point, const Rational& beta,
                                    const DecompositionOptions& opts) {
  if (beta < 1) throw ValidationError("beta must be at least 1");
  require_feasible_point(inst, point);
  auto m = make_master(inst, point, MasterKind::MaxWeight);
  m.beta = beta;
  auto run = column_generation(inst, m, opts);
  BetaFeasibility out;
  out.value = run.master.value;
  out.feasible = out.value == 1;
  if (out.feasible) out.dist = to_distribution(run.cols, run.master.lambda);
  out.certificate = std::move(run.master.dual);
  out.iterations = run.iterations;
  return out;
}

PcsfInstance witness_costs_from_dual(const PcsfInstance& inst, const FracSolution& point, const DualWitness& w,
                                     DominanceMode mode, const Rational& beta) {
  check_dimensions(inst, point);
  if (w.d.size() != inst.costs.size() || w.rho.size() != inst.penalties.size()) {
    throw ValidationError("dual witness dimensions do not match the instance");
  }
  const bool zero = std::all_of(w.d.begin(), w.d.end(), [](const Rational& v) { return v == 0; }) &&
                    std::all_of(w.rho.begin(), w.rho.end(), [](const Rational& v) { return v == 0; });
  if (zero) throw ValidationError("dual witness is zero: every cost and penalty would vanish");
  if (mode == DominanceMode::Lmp && beta <= 0) throw ValidationError("beta must be positive");

  PcsfInstance out = inst;
  for (std::size_t e = 0; e < out.costs.size(); ++e) out.costs[e] = point.x[e] > 0 ? w.d[e] : w.gamma;
  for (std::size_t i = 0; i < out.penalties.size(); ++i) {
    if (inst.penalties[i].is_infinite()) continue;
    Rational pen = point.z[i] > 0 ? w.rho[i] : w.gamma;
    if (mode == DominanceMode::Lmp) pen /= beta;
    out.penalties[i] = Penalty(pen);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spanning trees of the base graph and the explicit distribution

TreeDecomposition spanning_tree_decomposition(const Graph& p) {
  if (!is_connected(p)) throw InfeasibleError("base graph is disconnected");
  TreeDecomposition out;
  const int m = p.edge_count();
  out.target = frac(p.node_count() - 1, m);

  auto marginals = [&](const ForestDistribution& d) {
    std::vector<Rational> mg(static_cast<std::size_t>(m), Rational(0));
    for (const auto& wf : d.support) {
      for (EdgeId e : wf.forest) mg[static_cast<std::size_t>(e)] += wf.weight;
    }
    return *std::max_element(mg.begin(), mg.end());
  };

  if (m <= 20) {
    auto trees = enumerate_spanning_trees(p, 20);
    ForestDistribution uniform;
    const Rational w = frac(1, static_cast<long>(trees.size()));
    for (auto& t : trees) uniform.support.push_back({std::move(t), w});
    const Rational mx = marginals(uniform);
    if (mx <= out.target) {
      out.dist = std::move(uniform);
      out.max_marginal = mx;
      out.enumerated = true;
      return out;
    }
  }

  // min t  s.t.  t - sum_T lambda_T [e in T] >= 0,  sum lambda = 1.
  std::vector<EdgeSet> cols{minimum_spanning_tree(p, Capacities(static_cast<std::size_t>(m), Rational(1)))};
  std::set<EdgeSet> seen(cols.begin(), cols.end());
  for (;;) {
    lp::Problem prob;
    const int t = prob.add_variable(Rational(1));
    std::vector<int> lam;
    for (std::size_t q = 0; q < cols.size(); ++q) lam.push_back(prob.add_variable(Rational(0)));
    for (EdgeId e = 0; e < m; ++e) {
      lp::Row row;
      row.sense = lp::Sense::GreaterEqual;
      row.rhs = 0;
      row.coeffs.emplace_back(t, Rational(1));
      for (std::size_t q = 0; q < cols.size(); ++q) {
        if (std::binary_search(cols[q].begin(), cols[q].end(), e)) row.coeffs.emplace_back(lam[q], Rational(-1));
      }
      prob.add_row(std::move(row));
    }
    lp::Row convex;
    convex.sense = lp::Sense::Equal;
    convex.rhs = 1;
    for (int v : lam) convex.coeffs.emplace_back(v, Rational(1));
    prob.add_row(std::move(convex));
    auto sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal) throw Error("tree covering LP did not reach an optimum");

    Capacities price(sol.duals.begin(), sol.duals.begin() + m);
    const Rational& w = sol.duals[static_cast<std::size_t>(m)];
    auto tree = minimum_spanning_tree(p, price);
    Rational weight(0);
    for (EdgeId e : tree) weight += price[static_cast<std::size_t>(e)];
    if (weight >= w) {
      out.dist.support.clear();
      for (std::size_t q = 0; q < cols.size(); ++q) {
        const auto& l = sol.x[static_cast<std::size_t>(lam[q])];
        if (l > 0) out.dist.support.push_back({cols[q], l});
      }
      out.max_marginal = sol.objective;
      return out;
    }
    if (!seen.insert(tree).second) throw Error("tree pricing returned an existing column");
    cols.push_back(std::move(tree));
  }
}

ForestDistribution explicit_gap_distribution(const LayeredConstruction& lc, const Rational& alpha) {
  if (alpha < 2 || alpha > 3) throw ValidationError("alpha must lie in [2, 3]");
  if (lc.base_degree != 3) throw ValidationError("the explicit distribution needs a 3-regular base graph");
  ForestDistribution dist;
  const Rational tree_mass = Rational(3) - alpha;
  if (tree_mass > 0) {
    auto trees = spanning_tree_decomposition(lc.base);
    for (const auto& wf : trees.dist.support) {
      EdgeSet forest;
      for (int c = 0; c < static_cast<int>(lc.copies.size()); ++c) {
        for (EdgeId g : wf.forest) {
          auto path = lc.path_edges(c, g);
          forest.insert(forest.end(), path.begin(), path.end());
        }
      }
      dist.support.push_back({make_edge_set(std::move(forest)), tree_mass * wf.weight});
    }
  }
  const Rational span_mass = alpha - 2;
  if (span_mass > 0) {
    Capacities unit(static_cast<std::size_t>(lc.graph.edge_count()), Rational(1));
    dist.support.push_back({minimum_spanning_tree(lc.graph, unit), span_mass});
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Per-copy structure of support forests

namespace {

// Local view of one copy: maps global node ids to local indices on demand.
class CopyView {
 public:
  CopyView(const LayeredConstruction& lc, int copy) : lc_(lc), copy_(lc.copies[static_cast<std::size_t>(copy)]) {
    for (std::size_t i = 0; i < copy_.nodes.size(); ++i) local_[copy_.nodes[i]] = static_cast<int>(i);
  }

  int local(NodeId v) const { return local_.at(v); }
  std::size_t size() const { return copy_.nodes.size(); }
  bool is_branch(int local_id) const { return local_id < lc_.base_nodes(); }

  /// Edges of `forest` inside the copy.
  std::vector<EdgeId> inside(const EdgeSet& forest) const {
    std::vector<EdgeId> out;
    for (EdgeId e : copy_.edges) {
      if (std::binary_search(forest.begin(), forest.end(), e)) out.push_back(e);
    }
    return out;
  }

 private:
  const LayeredConstruction& lc_;
  const LayeredCopy& copy_;
  std::map<NodeId, int> local_;
};

}  // namespace

ForestDistribution trim_supports(const LayeredConstruction& lc, const ForestDistribution& dist) {
  std::vector<CopyView> views;
  for (int c = 0; c < static_cast<int>(lc.copies.size()); ++c) views.emplace_back(lc, c);
  ForestDistribution out;
  for (const auto& wf : dist.support) {
    EdgeSet kept;
    for (const auto& view : views) {
      const auto edges = view.inside(wf.forest);
      UnionFind uf(static_cast<int>(view.size()));
      for (EdgeId e : edges) uf.unite(view.local(lc.graph.edge(e).u), view.local(lc.graph.edge(e).v));
      std::vector<char> anchored(view.size(), 0);
      for (int b = 0; b < lc.base_nodes(); ++b) anchored[static_cast<std::size_t>(uf.find(b))] = 1;
      for (EdgeId e : edges) {
        if (anchored[static_cast<std::size_t>(uf.find(view.local(lc.graph.edge(e).u)))]) kept.push_back(e);
      }
    }
    out.support.push_back({make_edge_set(std::move(kept)), wf.weight});
  }
  return out;
}

WitnessNode find_witness_node(const LayeredConstruction& lc, const ForestDistribution& dist, int copy,
                              const ForestEvent& event) {
  if (copy < 0 || copy >= static_cast<int>(lc.copies.size())) throw ValidationError("unknown copy " + std::to_string(copy));
  CopyView view(lc, copy);
  const int groups = lc.base.edge_count();
  WitnessNode out;
  out.leaf_bound = frac(2, lc.subdivisions);
  out.path_bound = frac(lc.base.node_count() - 1, groups);

  std::vector<Rational> contained(static_cast<std::size_t>(groups), Rational(0));
  out.pr_event = 0;
  for (std::size_t q = 0; q < dist.support.size(); ++q) {
    const auto& wf = dist.support[q];
    const auto edges = view.inside(wf.forest);
    UnionFind uf(static_cast<int>(view.size()));
    bool tree = true;
    for (EdgeId e : edges) tree = tree && uf.unite(view.local(lc.graph.edge(e).u), view.local(lc.graph.edge(e).v));
    for (int b = 1; b < lc.base_nodes() && tree; ++b) tree = uf.find(b) == uf.find(0);
    for (EdgeId e : edges) tree = tree && uf.find(view.local(lc.graph.edge(e).u)) == uf.find(0);
    if (!tree) {
      throw ValidationError("support forest " + std::to_string(q) + " is not a tree through the branch nodes of copy " +
                            std::to_string(copy) + "; trim supports first");
    }
    if (!event(q, wf.forest)) continue;
    out.pr_event += wf.weight;
    for (int g = 0; g < groups; ++g) {
      const auto path = lc.path_edges(copy, g);
      const bool all = std::all_of(path.begin(), path.end(), [&](EdgeId e) {
        return std::binary_search(wf.forest.begin(), wf.forest.end(), e);
      });
      if (all) contained[static_cast<std::size_t>(g)] += wf.weight;
    }
  }
  if (out.pr_event == 0) throw ValidationError("conditioning event has probability 0");

  out.group = static_cast<int>(std::max_element(contained.begin(), contained.end()) - contained.begin());
  out.pr_path_given_event = contained[static_cast<std::size_t>(out.group)] / out.pr_event;

  std::optional<Rational> best;
  for (NodeId v : lc.path_nodes(copy, out.group)) {
    Rational leaf(0);
    for (const auto& wf : dist.support) {
      int deg = 0;
      for (const auto& inc : lc.graph.incident(v)) {
        if (lc.edge_info[static_cast<std::size_t>(inc.edge)].copy == copy &&
            std::binary_search(wf.forest.begin(), wf.forest.end(), inc.edge)) {
          ++deg;
        }
      }
      if (deg == 1) leaf += wf.weight;
    }
    if (!best || leaf < *best) {
      best = leaf;
      out.node = v;
    }
  }
  out.pr_leaf = *best;
  out.leaf_ok = out.pr_leaf <= out.leaf_bound;
  out.path_ok = out.pr_path_given_event >= out.path_bound;
  return out;
}

ChainTrace chain_trace(const LayeredConstruction& lc, const ForestDistribution& dist, const Rational& scale) {
  const auto trimmed = trim_supports(lc, dist);
  std::vector<std::vector<NodeId>> labels;
  for (const auto& wf : trimmed.support) labels.push_back(component_labels(lc.graph, wf.forest));
  auto joined = [&](std::size_t q, NodeId a, NodeId b) {
    return labels[q][static_cast<std::size_t>(a)] == labels[q][static_cast<std::size_t>(b)];
  };
  auto prob = [&](auto&& pred) {
    Rational p(0);
    for (std::size_t q = 0; q < trimmed.support.size(); ++q) {
      if (pred(q)) p += trimmed.support[q].weight;
    }
    return p;
  };

  const Rational step_bound = scale / lc.base_degree + frac(2, lc.subdivisions);
  const Rational c_p = frac(lc.base.node_count() - 1, lc.base.edge_count());
  const NodeId r0 = lc.root;

  ChainTrace out;
  NodeId root = r0;
  int copy = 0;
  ForestEvent event = [](std::size_t, const EdgeSet&) { return true; };
  for (int j = 0;; ++j) {
    ChainStep st;
    st.j = j;
    st.root = root;
    st.copy = copy;
    st.witness = find_witness_node(lc, trimmed, copy, event);
    st.next = st.witness.node;
    st.p_root = j == 0 ? Rational(1) : prob([&](std::size_t q) { return joined(q, root, r0); });
    st.p_next = prob([&](std::size_t q) { return joined(q, st.next, r0); });
    st.p_next_to_root = prob([&](std::size_t q) { return joined(q, st.next, root); });
    st.step_bound = step_bound;
    st.step_ok = st.p_next_to_root <= step_bound;
    if (j >= 1) {
      const auto path = lc.path_edges(copy, st.witness.group);
      st.path_and_cut = prob([&](std::size_t q) {
        const auto& f = trimmed.support[q].forest;
        const bool in = std::all_of(path.begin(), path.end(),
                                    [&](EdgeId e) { return std::binary_search(f.begin(), f.end(), e); });
        return in && !joined(q, root, r0);
      });
      st.path_and_cut_bound = c_p * (1 - st.p_root);
      st.path_and_cut_ok = st.path_and_cut >= st.path_and_cut_bound;
    }
    st.recursion_bound = step_bound - c_p * (1 - st.p_root);
    st.recursion_ok = st.p_next <= st.recursion_bound;
    out.all_hold = out.all_hold && st.step_ok && st.path_and_cut_ok && st.recursion_ok && st.witness.leaf_ok &&
                   (j == 0 || st.witness.path_ok);
    out.final_probability = st.p_next;
    const NodeId next = st.next;
    out.steps.push_back(std::move(st));

    const int child = lc.copy_rooted_at(next);
    if (child < 0) break;
    if (prob([&](std::size_t q) { return !joined(q, next, r0); }) == 0) {
      out.truncated = true;
      out.note = "node " + std::to_string(next) + " is connected to the root in every support forest";
      break;
    }
    root = next;
    copy = child;
    event = [&, next](std::size_t q, const EdgeSet&) { return !joined(q, next, r0); };
  }

  // p_{j+1} <= (A - c_P) + c_P p_j with p_0 = 1, expanded over the chain.
  Rational bound(1);
  for (std::size_t i = 0; i < out.steps.size(); ++i) bound = step_bound - c_p + c_p * bound;
  out.closed_form = bound;
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

namespace {

// s = sum_{i=0}^{k} r^i and t = r^{k+1}.
std::pair<Rational, Rational> geometric(const Rational& r, int k) {
  Rational s(0);
  Rational t(1);
  for (int i = 0; i <= k; ++i) {
    s += t;
    t *= r;
  }
  return {s, t};
}

}  // namespace

Rational bound_alpha(long n, int k) {
  if (n < 1 || k < 0) throw ValidationError("bound_alpha needs n >= 1 and k >= 0");
  auto [s, t] = geometric(Rational(2, 3), k);
  return (3 - 3 * t + 2 * s - 8 * s / Rational(n)) / (s + 1);
}

// With ratio 2/l and per-step edge usage beta/l, the recursion
//   p_{j+1} <= beta/l + 2/n - 2/l + (2/l) p_j + 2/(l n),  p_0 = 1,
// expands to p_{k+1} <= (beta/l - 2/l + 2/n + 2/(l n)) s + t. Requiring
// p_{k+1} >= 2/l gives the bound below.
Rational bound_beta(int l, long n, int k) {
  if (l < 3 || n < 1 || k < 0) throw ValidationError("bound_beta needs l >= 3, n >= 1 and k >= 0");
  auto [s, t] = geometric(frac(2, l), k);
  return 2 + (2 - l * t) / s - Rational(2 * l + 2) / Rational(n);
}

Rational bound_beta_asymptote(int l) {
  if (l < 3) throw ValidationError("bound_beta needs l >= 3");
  return 4 - frac(4, l);
}

// ---------------------------------------------------------------------------

TwoValueLmp two_value_lmp_distribution(const PcsfInstance& inst, const FracSolution& point,
                                       const DecompositionOptions& opts) {
  check_dimensions(inst, point);
  auto gamma = two_value_gamma(point);
  if (!gamma || *gamma >= 1) throw ValidationError("z must take exactly the values 0 and one gamma in (0, 1)");
  require_feasible_point(inst, point);

  FracSolution connect;
  for (const auto& x : point.x) connect.x.push_back(x / (1 - *gamma));
  connect.z.assign(point.z.size(), Rational(0));
  FracSolution pay{point.x, {}};
  for (const auto& z : point.z) pay.z.push_back(z == 0 ? Rational(0) : Rational(1));

  auto a = min_beta(inst, connect, opts);
  auto b = min_beta(inst, pay, opts);

  TwoValueLmp out;
  out.gamma = *gamma;
  out.beta = 2 + 2 * *gamma;
  out.connect_scale = a.value;
  out.pay_scale = b.value;
  out.achieved = a.value + *gamma * b.value;
  for (auto& wf : a.dist.support) out.dist.support.push_back({wf.forest, (1 - *gamma) * wf.weight});
  for (auto& wf : b.dist.support) out.dist.support.push_back({wf.forest, *gamma * wf.weight});
  return out;
}

}  // namespace pcsf
