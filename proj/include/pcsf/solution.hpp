#pragma once

#include <vector>

#include "pcsf/graph.hpp"
#include "pcsf/instance.hpp"

namespace pcsf {

/// A forest together with the pairs it leaves disconnected and its cost split.
struct IntegralSolution {
  EdgeSet forest;
  std::vector<PairId> disconnected;
  Rational cost;
  Rational penalty;
  /// False when an infinite-penalty pair is disconnected.
  bool feasible = true;

  Rational objective() const { return cost + penalty; }
};

/// Objective data over a fixed graph and pair list: costs and penalties can be
/// replaced (pricing) and edges masked out.
struct PricedProblem {
  const Graph* graph = nullptr;
  const std::vector<TerminalPair>* pairs = nullptr;
  Capacities costs;
  std::vector<Penalty> penalties;
  std::vector<char> allowed;  // per edge; empty means every edge

  static PricedProblem from(const PcsfInstance& inst);
  bool edge_allowed(EdgeId e) const {
    return allowed.empty() || allowed[static_cast<std::size_t>(e)] != 0;
  }
};

/// Cost, penalty and disconnected pairs of an edge set (need not be minimal).
IntegralSolution evaluate_edges(const PricedProblem& p, EdgeSet edges);
IntegralSolution evaluate_edges(const PcsfInstance& inst, EdgeSet edges);

/// Per-pair indicator: 1 if disconnected by `forest`.
std::vector<char> disconnection_vector(const Graph& g, const std::vector<TerminalPair>& pairs,
                                       std::span<const EdgeId> forest);

}  // namespace pcsf
