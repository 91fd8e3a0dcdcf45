#include "pcsf/cut_lp.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "pcsf/error.hpp"
#include "pcsf/simplex.hpp"

namespace pcsf {

namespace {

// Required connectivity for pair i at the point: 1 - z_i (z_i = 0 for infinite).
Rational demand(const std::vector<Penalty>& penalties, const FracSolution& point, PairId i) {
  if (penalties[static_cast<std::size_t>(i)].is_infinite()) return Rational(1);
  return Rational(1) - point.z[static_cast<std::size_t>(i)];
}

bool is_violated(const Rational& flow, const Rational& need, const SeparationOptions& opts) {
  if (opts.exact) return flow < need;
  return flow < need - opts.epsilon;
}

// Scans pairs in index order; stops after the first violation when `first_only`.
std::vector<CutPoolEntry> scan(const Graph& g, const std::vector<TerminalPair>& pairs,
                               const std::vector<Penalty>& penalties, const FracSolution& point,
                               const SeparationOptions& opts, bool first_only) {
  std::vector<CutPoolEntry> out;
  for (PairId i = 0; i < static_cast<int>(pairs.size()); ++i) {
    const Rational need = demand(penalties, point, i);
    if (sgn(need) <= 0) continue;
    const auto& [s, t] = pairs[static_cast<std::size_t>(i)];
    const Rational flow = max_flow_up_to(g, point.x, s, t, need);
    if (!is_violated(flow, need, opts)) continue;
    auto cut = min_cut(g, point.x, s, t);
    CutPoolEntry entry{i, std::vector<char>(static_cast<std::size_t>(g.node_count()), 0)};
    for (NodeId v : cut.side) entry.in_side[static_cast<std::size_t>(v)] = 1;
    out.push_back(std::move(entry));
    if (first_only) break;
  }
  return out;
}

CutConstraint to_constraint(const PcsfInstance& inst, const CutPoolEntry& entry) {
  NodeSet side;
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
    if (entry.in_side[static_cast<std::size_t>(v)]) side.push_back(v);
  }
  return CutConstraint::cut(inst, entry.pair, std::move(side));
}

std::string pool_key(const CutPoolEntry& e) {
  std::string key = std::to_string(e.pair) + ":";
  key.append(e.in_side.begin(), e.in_side.end());
  return key;
}

}  // namespace

std::optional<CutConstraint> separate(const PcsfInstance& inst, const FracSolution& point,
                                      const SeparationOptions& opts) {
  check_dimensions(inst, point);
  auto found = scan(inst.graph, inst.pairs, inst.penalties, point, opts, true);
  if (found.empty()) return std::nullopt;
  return to_constraint(inst, found.front());
}

std::vector<CutConstraint> separate_all(const PcsfInstance& inst, const FracSolution& point,
                                        const SeparationOptions& opts) {
  check_dimensions(inst, point);
  std::vector<CutConstraint> out;
  for (const auto& e : scan(inst.graph, inst.pairs, inst.penalties, point, opts, false)) {
    out.push_back(to_constraint(inst, e));
  }
  return out;
}

FeasibilityResult check_feasible(const PcsfInstance& inst, const FracSolution& point,
                                 const SeparationOptions& opts) {
  check_dimensions(inst, point);
  FeasibilityResult out;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    if (sgn(point.x[static_cast<std::size_t>(e)]) < 0) {
      out.feasible = false;
      out.violated = CutConstraint::nonneg_x(e);
      return out;
    }
  }
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    const auto& z = point.z[static_cast<std::size_t>(i)];
    if (sgn(z) < 0 || (inst.penalties[static_cast<std::size_t>(i)].is_infinite() && sgn(z) != 0)) {
      out.feasible = false;
      out.violated = CutConstraint::nonneg_z(i);
      return out;
    }
  }
  out.violated = separate(inst, point, opts);
  out.feasible = !out.violated.has_value();
  return out;
}

CutLpOutcome solve_cut_lp(const CutLpModel& model, std::vector<CutPoolEntry>& pool,
                          const std::optional<Rational>& cutoff, const SeparationOptions& opts) {
  const Graph& g = *model.graph;
  const auto& pairs = *model.pairs;
  const int m = g.edge_count();
  const int k = static_cast<int>(pairs.size());

  std::vector<int> x_col(static_cast<std::size_t>(m), -1);
  std::vector<int> z_col(static_cast<std::size_t>(k), -1);
  int vars = 0;
  Rational fixed_cost(0);
  for (EdgeId e = 0; e < m; ++e) {
    const auto st = model.edge_state[static_cast<std::size_t>(e)];
    if (st == 0) x_col[static_cast<std::size_t>(e)] = vars++;
    if (st == 1) fixed_cost += model.costs[static_cast<std::size_t>(e)];
  }
  for (PairId i = 0; i < k; ++i) {
    if (!model.penalties[static_cast<std::size_t>(i)].is_infinite()) z_col[static_cast<std::size_t>(i)] = vars++;
  }

  std::set<std::string> known;
  for (const auto& e : pool) known.insert(pool_key(e));
  auto add_to_pool = [&](CutPoolEntry e) {
    if (known.insert(pool_key(e)).second) pool.push_back(std::move(e));
  };
  if (pool.empty()) {
    for (PairId i = 0; i < k; ++i) {
      const auto& [s, t] = pairs[static_cast<std::size_t>(i)];
      CutPoolEntry a{i, std::vector<char>(static_cast<std::size_t>(g.node_count()), 0)};
      a.in_side[static_cast<std::size_t>(s)] = 1;
      add_to_pool(std::move(a));
      CutPoolEntry b{i, std::vector<char>(static_cast<std::size_t>(g.node_count()), 1)};
      b.in_side[static_cast<std::size_t>(t)] = 0;
      add_to_pool(std::move(b));
    }
  }

  CutLpOutcome out;
  for (;;) {
    ++out.iterations;
    // Dual of the restricted relaxation: max sum rhs_r y_r, A^T y <= c, y >= 0.
    // Rows are the primal variables, columns the cuts.
    lp::Problem dual;
    dual.rows.resize(static_cast<std::size_t>(vars));
    for (EdgeId e = 0; e < m; ++e) {
      const int c = x_col[static_cast<std::size_t>(e)];
      if (c < 0) continue;
      dual.rows[static_cast<std::size_t>(c)].sense = lp::Sense::LessEqual;
      dual.rows[static_cast<std::size_t>(c)].rhs = model.costs[static_cast<std::size_t>(e)];
    }
    for (PairId i = 0; i < k; ++i) {
      const int c = z_col[static_cast<std::size_t>(i)];
      if (c < 0) continue;
      dual.rows[static_cast<std::size_t>(c)].sense = lp::Sense::LessEqual;
      dual.rows[static_cast<std::size_t>(c)].rhs = model.penalties[static_cast<std::size_t>(i)].value();
    }
    for (const auto& cut : pool) {
      int forced = 0;
      std::vector<int> cols;
      for (EdgeId e = 0; e < m; ++e) {
        const auto& [u, v] = g.edge(e);
        if (cut.in_side[static_cast<std::size_t>(u)] == cut.in_side[static_cast<std::size_t>(v)]) continue;
        const auto st = model.edge_state[static_cast<std::size_t>(e)];
        if (st == 1) ++forced;
        if (st == 0) cols.push_back(x_col[static_cast<std::size_t>(e)]);
      }
      const Rational rhs = Rational(1 - forced);
      if (sgn(rhs) <= 0) continue;
      const int y = dual.add_variable(Rational(-rhs));
      for (int c : cols) dual.rows[static_cast<std::size_t>(c)].coeffs.emplace_back(y, Rational(1));
      const int zc = z_col[static_cast<std::size_t>(cut.pair)];
      if (zc >= 0) dual.rows[static_cast<std::size_t>(zc)].coeffs.emplace_back(y, Rational(1));
    }
    const auto sol = lp::solve(dual);
    if (sol.status == lp::Status::Unbounded) {
      out.feasible = false;
      return out;
    }
    if (sol.status != lp::Status::Optimal) throw Error("cut LP: dual reported infeasible");

    out.solution.x.assign(static_cast<std::size_t>(m), Rational(0));
    out.solution.z.assign(static_cast<std::size_t>(k), Rational(0));
    for (EdgeId e = 0; e < m; ++e) {
      const int c = x_col[static_cast<std::size_t>(e)];
      if (c >= 0) {
        out.solution.x[static_cast<std::size_t>(e)] = -sol.duals[static_cast<std::size_t>(c)];
      } else if (model.edge_state[static_cast<std::size_t>(e)] == 1) {
        out.solution.x[static_cast<std::size_t>(e)] = 1;
      }
    }
    for (PairId i = 0; i < k; ++i) {
      const int c = z_col[static_cast<std::size_t>(i)];
      if (c >= 0) out.solution.z[static_cast<std::size_t>(i)] = -sol.duals[static_cast<std::size_t>(c)];
    }
    out.value = fixed_cost - sol.objective;
    out.feasible = true;
    if (cutoff && out.value >= *cutoff) return out;

    auto fresh = scan(g, pairs, model.penalties, out.solution, opts, false);
    if (fresh.empty()) return out;
    const std::size_t before = pool.size();
    for (auto& e : fresh) add_to_pool(std::move(e));
    if (pool.size() == before) throw Error("cut LP: separation returned only known cuts");
  }
}

LpResult solve_lp(const PcsfInstance& inst, const SeparationOptions& opts) {
  inst.validate();
  {
    auto labels = component_labels(inst.graph, [&] {
      std::vector<EdgeId> all(static_cast<std::size_t>(inst.graph.edge_count()));
      for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) all[static_cast<std::size_t>(e)] = e;
      return all;
    }());
    for (PairId i = 0; i < inst.pair_count(); ++i) {
      const auto& [s, t] = inst.pairs[static_cast<std::size_t>(i)];
      if (inst.penalties[static_cast<std::size_t>(i)].is_infinite() &&
          labels[static_cast<std::size_t>(s)] != labels[static_cast<std::size_t>(t)]) {
        throw InfeasibleError("pair " + std::to_string(i) + " has infinite penalty but its endpoints are disconnected");
      }
    }
  }
  CutLpModel model{&inst.graph, &inst.pairs, inst.costs, inst.penalties,
                   std::vector<signed char>(static_cast<std::size_t>(inst.graph.edge_count()), 0)};
  std::vector<CutPoolEntry> pool;
  auto outcome = solve_cut_lp(model, pool, std::nullopt, opts);
  if (!outcome.feasible) throw InfeasibleError("cut relaxation is infeasible");
  LpResult out;
  out.solution = std::move(outcome.solution);
  out.value = outcome.value;
  out.iterations = outcome.iterations;
  out.cuts_generated = static_cast<int>(pool.size());
  for (const auto& entry : pool) {
    auto c = to_constraint(inst, entry);
    if (c.lhs(inst, out.solution) == 1) out.active_cuts.push_back(std::move(c));
  }
  return out;
}

namespace {

void check_family(const PcsfInstance& inst, const std::vector<CutConstraint>& family) {
  for (const auto& c : family) {
    if (c.kind == CutConstraint::Kind::NonnegX) {
      if (c.edge < 0 || c.edge >= inst.graph.edge_count()) throw ValidationError("family references unknown edge");
      continue;
    }
    if (c.pair < 0 || c.pair >= inst.pair_count()) throw ValidationError("family references unknown pair");
    if (c.kind == CutConstraint::Kind::Cut) {
      for (NodeId v : c.side) {
        if (!inst.graph.valid_node(v)) throw ValidationError("family references unknown node");
      }
    }
  }
}

}  // namespace

int constraint_rank(const PcsfInstance& inst, const std::vector<CutConstraint>& family) {
  check_family(inst, family);
  const int m = inst.graph.edge_count();
  std::vector<int> z_col(static_cast<std::size_t>(inst.pair_count()), -1);
  int cols = m;
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    if (!inst.penalties[static_cast<std::size_t>(i)].is_infinite()) z_col[static_cast<std::size_t>(i)] = cols++;
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& c : family) {
    std::vector<Rational> row(static_cast<std::size_t>(cols), Rational(0));
    if (c.kind == CutConstraint::Kind::NonnegX) {
      row[static_cast<std::size_t>(c.edge)] = 1;
    } else {
      const int zc = z_col[static_cast<std::size_t>(c.pair)];
      if (zc >= 0) row[static_cast<std::size_t>(zc)] = 1;
      if (c.kind == CutConstraint::Kind::Cut) {
        std::vector<char> in(static_cast<std::size_t>(inst.graph.node_count()), 0);
        for (NodeId v : c.side) in[static_cast<std::size_t>(v)] = 1;
        for (EdgeId e : cut_edges(inst.graph, in)) row[static_cast<std::size_t>(e)] = 1;
      }
    }
    rows.push_back(std::move(row));
  }
  // Gaussian elimination over the rationals.
  int rank = 0;
  for (int col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (sgn(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
    const auto& prow = rows[static_cast<std::size_t>(rank)];
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      auto& row = rows[static_cast<std::size_t>(r)];
      if (sgn(row[static_cast<std::size_t>(col)]) == 0) continue;
      const Rational f = row[static_cast<std::size_t>(col)] / prow[static_cast<std::size_t>(col)];
      for (int j = col; j < cols; ++j) {
        if (sgn(prow[static_cast<std::size_t>(j)]) != 0) row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      }
    }
    ++rank;
  }
  return rank;
}

VertexReport verify_vertex(const PcsfInstance& inst, const FracSolution& point,
                           const std::vector<CutConstraint>& family) {
  check_dimensions(inst, point);
  check_family(inst, family);
  VertexReport rep;
  auto feas = check_feasible(inst, point);
  rep.is_feasible = feas.feasible;
  rep.violated = feas.violated;
  rep.all_tight = true;
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (family[j].lhs(inst, point) != family[j].rhs()) {
      rep.all_tight = false;
      rep.slack_members.push_back(static_cast<int>(j));
    }
  }
  rep.dimension = inst.graph.edge_count();
  for (const auto& p : inst.penalties) {
    if (!p.is_infinite()) ++rep.dimension;
  }
  rep.rank = constraint_rank(inst, family);
  rep.unique = rep.all_tight && rep.rank == rep.dimension;
  rep.max_coordinate = 0;
  rep.all_x_positive = true;
  for (const auto& v : point.x) {
    if (v > rep.max_coordinate) rep.max_coordinate = v;
    if (sgn(v) <= 0) rep.all_x_positive = false;
  }
  for (const auto& v : point.z) {
    if (v > rep.max_coordinate) rep.max_coordinate = v;
  }
  return rep;
}

}  // namespace pcsf
