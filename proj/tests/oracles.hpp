#pragma once

// Brute-force reference computations for the tests. Everything here works by
// exhaustive enumeration and shares no code path with the solvers it checks
// (the cut LP oracle does reuse the plain simplex, but no separation).

#include <algorithm>
#include <optional>
#include <cstdint>
#include <random>
#include <vector>

#include "pcsf/generators.hpp"
#include "pcsf/graph.hpp"
#include "pcsf/instance.hpp"
#include "pcsf/simplex.hpp"

namespace pcsf::oracle {

/// min over S (s in S, t not in S) of cap(delta(S)); |V| <= 16.
inline Rational brute_min_cut(const Graph& g, const Capacities& cap, NodeId s, NodeId t) {
  const int n = g.node_count();
  Rational best;
  bool first = true;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> s & 1u) || (mask >> t & 1u)) continue;
    Rational v(0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (((mask >> g.edge(e).u) & 1u) != ((mask >> g.edge(e).v) & 1u)) v += cap[static_cast<std::size_t>(e)];
    }
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

/// Cut relaxation with every cut written out explicitly; |V| <= 12.
inline Rational brute_cut_lp(const PcsfInstance& inst) {
  const int n = inst.graph.node_count();
  const int m = inst.graph.edge_count();
  lp::Problem prob;
  for (EdgeId e = 0; e < m; ++e) prob.add_variable(inst.costs[static_cast<std::size_t>(e)]);
  std::vector<int> zcol(inst.pairs.size(), -1);
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    if (!inst.penalties[i].is_infinite()) zcol[i] = prob.add_variable(inst.penalties[i].value());
  }
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
      const bool hs = (mask >> inst.pairs[i].s) & 1u;
      const bool ht = (mask >> inst.pairs[i].t) & 1u;
      if (hs == ht || !hs) continue;  // each cut once, from the s side
      lp::Row row;
      row.sense = lp::Sense::GreaterEqual;
      row.rhs = 1;
      for (EdgeId e = 0; e < m; ++e) {
        if (((mask >> inst.graph.edge(e).u) & 1u) != ((mask >> inst.graph.edge(e).v) & 1u)) {
          row.coeffs.emplace_back(e, Rational(1));
        }
      }
      if (zcol[i] >= 0) row.coeffs.emplace_back(zcol[i], Rational(1));
      prob.add_row(std::move(row));
    }
  }
  auto sol = lp::solve(prob);
  return sol.objective;
}

/// Objective of an arbitrary edge subset, computed by DFS reachability.
inline bool brute_objective(const PcsfInstance& inst, std::uint32_t mask, Rational& out) {
  const int n = inst.graph.node_count();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  out = 0;
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    if (!((mask >> e) & 1u)) continue;
    out += inst.costs[static_cast<std::size_t>(e)];
    adj[static_cast<std::size_t>(inst.graph.edge(e).u)].push_back(inst.graph.edge(e).v);
    adj[static_cast<std::size_t>(inst.graph.edge(e).v)].push_back(inst.graph.edge(e).u);
  }
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{inst.pairs[i].s};
    seen[static_cast<std::size_t>(inst.pairs[i].s)] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    if (seen[static_cast<std::size_t>(inst.pairs[i].t)]) continue;
    if (inst.penalties[i].is_infinite()) return false;
    out += inst.penalties[i].value();
  }
  return true;
}

/// Minimum over all 2^|E| edge subsets, or nullopt when every subset leaves
/// an infinite-penalty pair disconnected; |E| <= 20.
inline std::optional<Rational> brute_ip_if_feasible(const PcsfInstance& inst) {
  std::optional<Rational> best;
  for (std::uint32_t mask = 0; mask < (1u << inst.graph.edge_count()); ++mask) {
    Rational v;
    if (!brute_objective(inst, mask, v)) continue;
    if (!best || v < *best) best = v;
  }
  return best;
}

/// Minimum over all 2^|E| edge subsets; |E| <= 20.
inline Rational brute_ip(const PcsfInstance& inst) {
  Rational best;
  bool any = false;
  for (std::uint32_t mask = 0; mask < (1u << inst.graph.edge_count()); ++mask) {
    Rational v;
    if (!brute_objective(inst, mask, v)) continue;
    if (!any || v < best) best = v;
    any = true;
  }
  return best;
}

using pcsf::RandomSpec;

/// pcsf::random_instance with the pair count capped at the number of
/// distinct node pairs.
inline PcsfInstance random_instance(std::uint32_t seed, RandomSpec spec) {
  spec.pairs = std::min(spec.pairs, spec.nodes * (spec.nodes - 1) / 2);
  return pcsf::random_instance(seed, spec);
}

}  // namespace pcsf::oracle
