#include "pcsf/rounding.hpp"

#include <algorithm>
#include <set>

#include "pcsf/cut_lp.hpp"
#include "pcsf/error.hpp"

namespace pcsf {

namespace {

bool connects_all(const Graph& g, const std::vector<TerminalPair>& pairs, const std::vector<PairId>& required,
                  std::span<const EdgeId> forest) {
  auto label = component_labels(g, forest);
  for (PairId i : required) {
    const auto& pr = pairs[static_cast<std::size_t>(i)];
    if (label[static_cast<std::size_t>(pr.s)] != label[static_cast<std::size_t>(pr.t)]) return false;
  }
  return true;
}

void require_feasible(const PcsfInstance& inst, const FracSolution& point) {
  check_dimensions(inst, point);
  auto res = check_feasible(inst, point);
  if (!res.feasible) {
    throw ValidationError("point is not feasible for the cut relaxation: " + res.violated->describe(inst));
  }
}

RoundingResult round_pairs(const PcsfInstance& inst, const std::vector<PairId>& required) {
  RoundingResult out;
  out.solution = evaluate_edges(inst, gw_steiner_forest(inst, required).forest);
  return out;
}

RoundingResult threshold_unchecked(const PcsfInstance& inst, const FracSolution& point, const Rational& theta) {
  std::vector<PairId> required;
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    if (point.z[static_cast<std::size_t>(i)] < theta) required.push_back(i);
  }
  auto out = round_pairs(inst, required);
  out.lp_value = lp_objective(inst, point);
  out.theta = theta;
  const Rational connect = Rational(2) / (Rational(1) - theta);
  const Rational pay = Rational(1) / theta;
  out.factor = connect > pay ? connect : pay;
  return out;
}

}  // namespace

SteinerForestResult gw_steiner_forest(const PcsfInstance& inst, const std::vector<PairId>& required) {
  const Graph& g = inst.graph;
  const auto m = static_cast<std::size_t>(g.edge_count());
  SteinerForestResult out;
  out.dual_value = 0;
  if (required.empty()) return out;

  UnionFind uf(g.node_count());
  std::vector<Rational> load(m, Rational(0));
  std::vector<EdgeId> added;

  for (;;) {
    std::vector<char> active(static_cast<std::size_t>(g.node_count()), 0);
    int active_count = 0;
    for (PairId i : required) {
      const auto& pr = inst.pairs[static_cast<std::size_t>(i)];
      const NodeId a = uf.find(pr.s);
      const NodeId b = uf.find(pr.t);
      if (a == b) continue;
      for (NodeId c : {a, b}) {
        if (!active[static_cast<std::size_t>(c)]) {
          active[static_cast<std::size_t>(c)] = 1;
          ++active_count;
        }
      }
    }
    if (active_count == 0) break;

    std::optional<Rational> step;
    EdgeId hit = -1;
    std::vector<int> rate(m, 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const NodeId a = uf.find(g.edge(e).u);
      const NodeId b = uf.find(g.edge(e).v);
      if (a == b) continue;
      const int r = active[static_cast<std::size_t>(a)] + active[static_cast<std::size_t>(b)];
      rate[static_cast<std::size_t>(e)] = r;
      if (r == 0) continue;
      Rational t = (inst.costs[static_cast<std::size_t>(e)] - load[static_cast<std::size_t>(e)]) / r;
      if (!step || t < *step) {
        step = t;
        hit = e;
      }
    }
    if (!step) throw InfeasibleError("required pair cannot be connected in the graph");

    out.dual_value += *step * active_count;
    for (std::size_t e = 0; e < m; ++e) {
      if (rate[e] > 0) load[e] += *step * rate[e];
    }
    uf.unite(g.edge(hit).u, g.edge(hit).v);
    added.push_back(hit);
  }

  // Reverse deletion keeps only edges some required pair depends on.
  std::vector<char> keep(m, 0);
  for (EdgeId e : added) keep[static_cast<std::size_t>(e)] = 1;
  for (auto it = added.rbegin(); it != added.rend(); ++it) {
    keep[static_cast<std::size_t>(*it)] = 0;
    EdgeSet trial;
    for (EdgeId e : added) {
      if (keep[static_cast<std::size_t>(e)]) trial.push_back(e);
    }
    if (!connects_all(g, inst.pairs, required, trial)) keep[static_cast<std::size_t>(*it)] = 1;
  }
  for (EdgeId e : added) {
    if (keep[static_cast<std::size_t>(e)]) out.forest.push_back(e);
  }
  out.forest = make_edge_set(std::move(out.forest));
  return out;
}

RoundingResult threshold_round(const PcsfInstance& inst, const FracSolution& point, const Rational& theta) {
  if (theta <= 0 || theta >= 1) throw ValidationError("threshold must lie strictly between 0 and 1");
  require_feasible(inst, point);
  return threshold_unchecked(inst, point, theta);
}

RoundingResult best_threshold_round(const PcsfInstance& inst, const FracSolution& point) {
  require_feasible(inst, point);
  std::set<Rational> candidates{Rational(1, 3)};
  for (const auto& z : point.z) {
    if (z > 0 && z < 1) candidates.insert(z);
  }
  std::optional<RoundingResult> best;
  Rational factor;
  for (const auto& theta : candidates) {
    auto cur = threshold_unchecked(inst, point, theta);
    if (!best || cur.factor < factor) factor = cur.factor;
    if (!best || cur.solution.objective() < best->solution.objective()) best = std::move(cur);
  }
  best->factor = factor;
  return std::move(*best);
}

std::optional<Rational> two_value_gamma(const FracSolution& point) {
  std::optional<Rational> gamma;
  for (const auto& z : point.z) {
    if (z == 0) continue;
    if (gamma && *gamma != z) return std::nullopt;
    gamma = z;
  }
  return gamma;
}

Rational two_value_factor(const Rational& gamma, const Rational& p) {
  const Rational connect = (Rational(2) - 2 * p * gamma) / (Rational(1) - gamma);
  const Rational pay = p / gamma;
  return connect > pay ? connect : pay;
}

RoundingResult two_value_round(const PcsfInstance& inst, const FracSolution& point, const Rational& p) {
  if (p < 0 || p > 1) throw ValidationError("p must lie in [0, 1]");
  check_dimensions(inst, point);
  auto gamma = two_value_gamma(point);
  if (!gamma) throw ValidationError("z must take exactly the values 0 and one gamma > 0");
  if (*gamma >= Rational(1, 2)) throw ValidationError("gamma must be below 1/2");
  require_feasible(inst, point);

  std::vector<PairId> zero_pairs;
  std::vector<PairId> all_pairs;
  for (PairId i = 0; i < inst.pair_count(); ++i) {
    all_pairs.push_back(i);
    if (point.z[static_cast<std::size_t>(i)] == 0) zero_pairs.push_back(i);
  }
  auto pay = round_pairs(inst, zero_pairs);
  auto connect = round_pairs(inst, all_pairs);
  connect.connect_all = true;
  RoundingResult out = connect.solution.objective() < pay.solution.objective() ? std::move(connect) : std::move(pay);
  out.lp_value = lp_objective(inst, point);
  out.theta = *gamma;
  out.factor = two_value_factor(*gamma, p);
  return out;
}

MuBound mu_bound(const Rational& gamma) {
  if (gamma <= 0 || gamma >= Rational(1, 2)) throw ValidationError("gamma must lie strictly between 0 and 1/2");
  const Rational denom = 2 * gamma * gamma - gamma + 1;
  return {Rational(2) / denom, 2 * gamma / denom};
}

Evaluation evaluate(const PcsfInstance& inst, const EdgeSet& forest, const Rational& beta) {
  auto sol = evaluate_edges(inst, forest);
  return {sol.cost, sol.penalty, sol.objective(), sol.cost + beta * sol.penalty, sol.feasible};
}

}  // namespace pcsf
