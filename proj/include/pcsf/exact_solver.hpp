#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pcsf/instance.hpp"
#include "pcsf/solution.hpp"

namespace pcsf {

/// Edge cap for solve_ip; defaults to $PCSF_IP_MAX_EDGES or 40.
int default_ip_edge_cap();

struct IpOptions {
  int max_edges = default_ip_edge_cap();
  bool use_lp_bound = true;  // false: plain depth-first enumeration
  long node_limit = 20'000'000;
  bool use_chains = true;  // try solve_by_chains before branch and bound
};

struct IpStats {
  long nodes = 0;
  long lp_solves = 0;
};

/// Exact optimum by branch and bound with cut-relaxation bounds.
IntegralSolution solve_ip(const PcsfInstance& inst, const IpOptions& opts = {}, IpStats* stats = nullptr);

/// Best solution with objective strictly below `cutoff`, or nullopt when none
/// exists. Used as the pricing oracle; costs/penalties come from `p`.
std::optional<IntegralSolution> solve_priced(const PricedProblem& p, const std::optional<Rational>& cutoff,
                                             const std::vector<EdgeSet>& seeds = {}, const IpOptions& opts = {},
                                             IpStats* stats = nullptr);

/// Exact optimum by enumerating which maximal chains of allowed-degree-2
/// nodes are used in full; every other chain takes its cheapest broken
/// pattern given the hub components. Returns std::nullopt when the method
/// does not apply: too many chains, a chain longer than `max_chain_edges`, or
/// a pair joining the interiors of two different chains. Costs must be
/// nonnegative. The inner optional is empty when nothing beats `cutoff`.
std::optional<std::optional<IntegralSolution>> solve_by_chains(const PricedProblem& p,
                                                               const std::optional<Rational>& cutoff,
                                                               int max_chains = 20, int max_chain_edges = 10);

/// Cheap improvement heuristic: drop edges, connect pairs along cheapest
/// paths, and prune, until no move lowers the objective.
IntegralSolution local_search(const PricedProblem& p, EdgeSet start);

/// Removes edges (most expensive first) while the objective does not grow.
IntegralSolution prune_forest(const PricedProblem& p, EdgeSet edges);

/// Calls `visit` once for every acyclic subset of the allowed edges.
void for_each_forest(const Graph& g, const std::vector<char>& allowed,
                     const std::function<void(const EdgeSet&)>& visit);

struct EnumerationResult {
  Rational value;
  std::vector<IntegralSolution> optimal;  // every optimal forest
  long forests = 0;
};

/// Exhaustive optimum over all forests; |E| <= max_edges.
EnumerationResult enumerate_ip(const PcsfInstance& inst, int max_edges = 20);

struct GapResult {
  Rational lp;
  Rational ip;
  Rational ratio;
};

GapResult gap(const PcsfInstance& inst, const IpOptions& opts = {});

}  // namespace pcsf
