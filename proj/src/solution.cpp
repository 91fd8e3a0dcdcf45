#include "pcsf/solution.hpp"

#include "pcsf/error.hpp"

namespace pcsf {

PricedProblem PricedProblem::from(const PcsfInstance& inst) {
  PricedProblem p;
  p.graph = &inst.graph;
  p.pairs = &inst.pairs;
  p.costs = inst.costs;
  p.penalties = inst.penalties;
  return p;
}

std::vector<char> disconnection_vector(const Graph& g, const std::vector<TerminalPair>& pairs,
                                       std::span<const EdgeId> forest) {
  auto label = component_labels(g, forest);
  std::vector<char> out(pairs.size(), 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[i] = label[static_cast<std::size_t>(pairs[i].s)] != label[static_cast<std::size_t>(pairs[i].t)];
  }
  return out;
}

IntegralSolution evaluate_edges(const PricedProblem& p, EdgeSet edges) {
  IntegralSolution out;
  out.forest = make_edge_set(std::move(edges));
  out.cost = 0;
  for (EdgeId e : out.forest) {
    if (e < 0 || e >= p.graph->edge_count()) throw ValidationError("edge id out of range");
    out.cost += p.costs[static_cast<std::size_t>(e)];
  }
  out.penalty = 0;
  auto gone = disconnection_vector(*p.graph, *p.pairs, out.forest);
  for (std::size_t i = 0; i < gone.size(); ++i) {
    if (!gone[i]) continue;
    out.disconnected.push_back(static_cast<PairId>(i));
    if (p.penalties[i].is_infinite()) {
      out.feasible = false;
    } else {
      out.penalty += p.penalties[i].value();
    }
  }
  return out;
}

IntegralSolution evaluate_edges(const PcsfInstance& inst, EdgeSet edges) {
  return evaluate_edges(PricedProblem::from(inst), std::move(edges));
}

}  // namespace pcsf
