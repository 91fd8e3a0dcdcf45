#include "pcsf/exact_solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <string>

#include "pcsf/cut_lp.hpp"
#include "pcsf/error.hpp"

namespace pcsf {

int default_ip_edge_cap() {
  if (const char* env = std::getenv("PCSF_IP_MAX_EDGES")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw ValidationError("PCSF_IP_MAX_EDGES is not an integer");
    }
  }
  return 40;
}

namespace {

// Feasible beats infeasible; then lower objective.
bool better(const IntegralSolution& a, const IntegralSolution& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return a.objective() < b.objective();
}

EdgeSet spanning_forest_of(const PricedProblem& p, EdgeSet edges) {
  std::stable_sort(edges.begin(), edges.end(), [&](EdgeId a, EdgeId b) {
    return p.costs[static_cast<std::size_t>(a)] < p.costs[static_cast<std::size_t>(b)];
  });
  UnionFind uf(p.graph->node_count());
  EdgeSet out;
  for (EdgeId e : edges) {
    if (uf.unite(p.graph->edge(e).u, p.graph->edge(e).v)) out.push_back(e);
  }
  return make_edge_set(std::move(out));
}

// Cheapest s-t path where edges already in `forest` are free.
std::optional<EdgeSet> cheapest_path(const PricedProblem& p, const std::vector<char>& in_forest, NodeId s, NodeId t) {
  const Graph& g = *p.graph;
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<Rational> dist(n);
  std::vector<char> reached(n, 0);
  std::vector<char> done(n, 0);
  std::vector<EdgeId> pred(n, -1);
  using Item = std::pair<Rational, NodeId>;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  dist[static_cast<std::size_t>(s)] = 0;
  reached[static_cast<std::size_t>(s)] = 1;
  heap.emplace(Rational(0), s);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(v)]) continue;
    done[static_cast<std::size_t>(v)] = 1;
    if (v == t) break;
    for (const auto& inc : g.incident(v)) {
      if (!p.edge_allowed(inc.edge)) continue;
      const auto w = static_cast<std::size_t>(inc.other);
      Rational nd = d;
      if (!in_forest[static_cast<std::size_t>(inc.edge)]) nd += p.costs[static_cast<std::size_t>(inc.edge)];
      if (!reached[w] || nd < dist[w]) {
        reached[w] = 1;
        dist[w] = nd;
        pred[w] = inc.edge;
        heap.emplace(nd, inc.other);
      }
    }
  }
  if (!done[static_cast<std::size_t>(t)]) return std::nullopt;
  EdgeSet path;
  for (NodeId v = t; v != s;) {
    const EdgeId e = pred[static_cast<std::size_t>(v)];
    path.push_back(e);
    v = g.edge(e).u == v ? g.edge(e).v : g.edge(e).u;
  }
  return path;
}

}  // namespace

IntegralSolution prune_forest(const PricedProblem& p, EdgeSet edges) {
  EdgeSet forest = spanning_forest_of(p, std::move(edges));
  IntegralSolution cur = evaluate_edges(p, forest);
  std::vector<EdgeId> order = cur.forest;
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    const auto& ca = p.costs[static_cast<std::size_t>(a)];
    const auto& cb = p.costs[static_cast<std::size_t>(b)];
    return ca > cb || (ca == cb && a > b);
  });
  for (EdgeId e : order) {
    EdgeSet trial;
    for (EdgeId f : cur.forest) {
      if (f != e) trial.push_back(f);
    }
    auto cand = evaluate_edges(p, std::move(trial));
    if (cand.feasible >= cur.feasible && cand.objective() <= cur.objective()) cur = std::move(cand);
  }
  return cur;
}

IntegralSolution local_search(const PricedProblem& p, EdgeSet start) {
  IntegralSolution cur = prune_forest(p, std::move(start));
  const int pair_count = static_cast<int>(p.pairs->size());
  for (bool improved = true; improved;) {
    improved = false;
    for (PairId i = 0; i < pair_count; ++i) {
      if (!std::binary_search(cur.disconnected.begin(), cur.disconnected.end(), i)) continue;
      std::vector<char> in_forest(static_cast<std::size_t>(p.graph->edge_count()), 0);
      for (EdgeId e : cur.forest) in_forest[static_cast<std::size_t>(e)] = 1;
      const auto& pr = (*p.pairs)[static_cast<std::size_t>(i)];
      auto path = cheapest_path(p, in_forest, pr.s, pr.t);
      if (!path) continue;
      EdgeSet merged = cur.forest;
      merged.insert(merged.end(), path->begin(), path->end());
      auto cand = prune_forest(p, make_edge_set(std::move(merged)));
      if (better(cand, cur)) {
        cur = std::move(cand);
        improved = true;
      }
    }
    for (std::size_t j = 0; j < cur.forest.size(); ++j) {
      EdgeSet trial = cur.forest;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(j));
      auto cand = prune_forest(p, std::move(trial));
      if (better(cand, cur)) {
        cur = std::move(cand);
        improved = true;
        break;
      }
    }
  }
  return cur;
}

namespace {

class BranchAndBound {
public:
  BranchAndBound(const PricedProblem& p, const IpOptions& opts, std::optional<Rational> cutoff)
      : p_(p), opts_(opts), limit_(std::move(cutoff)) {}

  void offer(IntegralSolution s) {
    if (!s.feasible) return;
    if (limit_ && !(s.objective() < *limit_)) return;
    limit_ = s.objective();
    best_ = std::move(s);
  }

  void run() {
    const int m = p_.graph->edge_count();
    std::vector<signed char> root(static_cast<std::size_t>(m), 0);
    // Costs are nonnegative, so a zero-cost edge joining two components never
    // hurts: fix a spanning forest of them in and the rest out.
    UnionFind free_edges(p_.graph->node_count());
    for (EdgeId e = 0; e < m; ++e) {
      auto& st = root[static_cast<std::size_t>(e)];
      if (!p_.edge_allowed(e)) {
        st = -1;
      } else if (sgn(p_.costs[static_cast<std::size_t>(e)]) == 0) {
        st = free_edges.unite(p_.graph->edge(e).u, p_.graph->edge(e).v) ? 1 : -1;
      }
    }
    std::vector<std::vector<signed char>> stack{root};
    while (!stack.empty()) {
      auto state = std::move(stack.back());
      stack.pop_back();
      if (++stats_.nodes > opts_.node_limit) throw ScaleCapError("branch and bound node limit exceeded");
      if (opts_.use_lp_bound) {
        lp_node(state, stack);
      } else {
        dfs_node(state, stack);
      }
    }
  }

  std::optional<IntegralSolution>& best() { return best_; }
  const IpStats& stats() const { return stats_; }

private:
  EdgeSet forced_in(const std::vector<signed char>& state) const {
    EdgeSet out;
    for (EdgeId e = 0; e < static_cast<int>(state.size()); ++e) {
      if (state[static_cast<std::size_t>(e)] == 1) out.push_back(e);
    }
    return out;
  }

  bool closes_cycle(const std::vector<signed char>& state, EdgeId e) const {
    UnionFind uf(p_.graph->node_count());
    for (EdgeId f : forced_in(state)) uf.unite(p_.graph->edge(f).u, p_.graph->edge(f).v);
    return uf.same(p_.graph->edge(e).u, p_.graph->edge(e).v);
  }

  void push_children(const std::vector<signed char>& state, EdgeId e, bool in_first,
                     std::vector<std::vector<signed char>>& stack) const {
    auto in = state;
    in[static_cast<std::size_t>(e)] = 1;
    auto out = state;
    out[static_cast<std::size_t>(e)] = -1;
    const bool in_ok = !closes_cycle(state, e);
    // The stack is LIFO: push the preferred child last.
    if (in_first) {
      stack.push_back(std::move(out));
      if (in_ok) stack.push_back(std::move(in));
    } else {
      if (in_ok) stack.push_back(std::move(in));
      stack.push_back(std::move(out));
    }
  }

  void dfs_node(const std::vector<signed char>& state, std::vector<std::vector<signed char>>& stack) {
    Rational fixed(0);
    EdgeId next = -1;
    for (EdgeId e = 0; e < static_cast<int>(state.size()); ++e) {
      const auto st = state[static_cast<std::size_t>(e)];
      if (st == 1) fixed += p_.costs[static_cast<std::size_t>(e)];
      if (st == 0 && next < 0) next = e;
    }
    if (limit_ && fixed >= *limit_) return;
    if (next < 0) {
      offer(evaluate_edges(p_, forced_in(state)));
      return;
    }
    push_children(state, next, true, stack);
  }

  void lp_node(const std::vector<signed char>& state, std::vector<std::vector<signed char>>& stack) {
    CutLpModel model{p_.graph, p_.pairs, p_.costs, p_.penalties, state};
    ++stats_.lp_solves;
    auto lp = solve_cut_lp(model, pool_, limit_);
    if (!lp.feasible) return;
    if (limit_ && lp.value >= *limit_) return;

    EdgeSet rounded;
    EdgeSet ones;
    EdgeId branch = -1;
    Rational best_dist;
    const Rational half(1, 2);
    for (EdgeId e = 0; e < static_cast<int>(state.size()); ++e) {
      const auto& x = lp.solution.x[static_cast<std::size_t>(e)];
      if (x >= half) rounded.push_back(e);
      if (x == 1) ones.push_back(e);
      if (state[static_cast<std::size_t>(e)] != 0 || sgn(x) == 0 || x == 1) continue;
      Rational dist = abs(x - half);
      if (branch < 0 || dist < best_dist) {
        branch = e;
        best_dist = dist;
      }
    }
    if (branch < 0) {
      // Integral x: the support's spanning forest is optimal for this node.
      offer(evaluate_edges(p_, spanning_forest_of(p_, ones)));
      return;
    }
    offer(prune_forest(p_, rounded));
    push_children(state, branch, lp.solution.x[static_cast<std::size_t>(branch)] >= half, stack);
  }

  const PricedProblem& p_;
  IpOptions opts_;
  std::optional<Rational> limit_;
  std::optional<IntegralSolution> best_;
  std::vector<CutPoolEntry> pool_;
  IpStats stats_;
};

void check_scale(int edges, int cap) {
  if (edges > cap) {
    throw ScaleCapError("instance has " + std::to_string(edges) + " edges; exact solver cap is " +
                        std::to_string(cap));
  }
}

}  // namespace

std::optional<IntegralSolution> solve_priced(const PricedProblem& p, const std::optional<Rational>& cutoff,
                                             const std::vector<EdgeSet>& seeds, const IpOptions& opts,
                                             IpStats* stats) {
  int usable = 0;
  for (EdgeId e = 0; e < p.graph->edge_count(); ++e) usable += p.edge_allowed(e) ? 1 : 0;
  check_scale(usable, opts.max_edges);
  if (opts.use_chains) {
    if (auto by_chains = solve_by_chains(p, cutoff)) return std::move(*by_chains);
  }
  BranchAndBound bnb(p, opts, cutoff);
  bnb.offer(local_search(p, {}));
  for (const auto& s : seeds) bnb.offer(local_search(p, s));
  bnb.run();
  if (stats) *stats = bnb.stats();
  return std::move(bnb.best());
}

IntegralSolution solve_ip(const PcsfInstance& inst, const IpOptions& opts, IpStats* stats) {
  inst.validate();
  check_scale(inst.graph.edge_count(), opts.max_edges);
  auto p = PricedProblem::from(inst);
  std::vector<EdgeId> all(static_cast<std::size_t>(inst.graph.edge_count()));
  std::iota(all.begin(), all.end(), 0);
  auto everything = evaluate_edges(p, spanning_forest_of(p, all));
  if (!everything.feasible) {
    throw InfeasibleError("an infinite-penalty pair is disconnected in the graph");
  }
  auto best = solve_priced(p, std::nullopt, {everything.forest}, opts, stats);
  if (!best) throw Error("solve_ip: no feasible solution found");
  return *best;
}

void for_each_forest(const Graph& g, const std::vector<char>& allowed,
                     const std::function<void(const EdgeSet&)>& visit) {
  const int m = g.edge_count();
  std::vector<int> comp(static_cast<std::size_t>(g.node_count()));
  std::iota(comp.begin(), comp.end(), 0);
  EdgeSet current;
  std::function<void(EdgeId)> rec = [&](EdgeId next) {
    if (next == m) {
      visit(current);
      return;
    }
    const bool ok = allowed.empty() || allowed[static_cast<std::size_t>(next)];
    const auto& [u, v] = g.edge(next);
    const int cu = comp[static_cast<std::size_t>(u)];
    const int cv = comp[static_cast<std::size_t>(v)];
    if (ok && cu != cv) {
      auto saved = comp;
      for (auto& c : comp) {
        if (c == cv) c = cu;
      }
      current.push_back(next);
      rec(next + 1);
      current.pop_back();
      comp = std::move(saved);
    }
    rec(next + 1);
  };
  rec(0);
}

EnumerationResult enumerate_ip(const PcsfInstance& inst, int max_edges) {
  inst.validate();
  if (inst.graph.edge_count() > max_edges) {
    throw ScaleCapError("enumerate_ip: " + std::to_string(inst.graph.edge_count()) + " edges exceeds cap " +
                        std::to_string(max_edges));
  }
  auto p = PricedProblem::from(inst);
  EnumerationResult out;
  bool any = false;
  for_each_forest(inst.graph, {}, [&](const EdgeSet& f) {
    ++out.forests;
    auto s = evaluate_edges(p, f);
    if (!s.feasible) return;
    if (!any || s.objective() < out.value) {
      any = true;
      out.value = s.objective();
      out.optimal.clear();
    }
    if (s.objective() == out.value) out.optimal.push_back(std::move(s));
  });
  if (!any) throw InfeasibleError("an infinite-penalty pair is disconnected in the graph");
  return out;
}

GapResult gap(const PcsfInstance& inst, const IpOptions& opts) {
  GapResult out;
  out.lp = solve_lp(inst).value;
  out.ip = solve_ip(inst, opts).objective();
  if (sgn(out.lp) == 0) {
    if (sgn(out.ip) != 0) throw Error("gap: LP value 0 with positive IP value");
    out.ratio = 1;
  } else {
    out.ratio = out.ip / out.lp;
  }
  return out;
}

}  // namespace pcsf
