#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "pcsf/exact_solver.hpp"

namespace pcsf {

namespace {

// Skeleton leaves times broken patterns scanned per leaf.
constexpr double kWorkLimit = 5e7;

// A maximal path a = v_0, v_1, ..., v_m, v_{m+1} = b whose interior nodes have
// allowed degree 2. edges[i] joins v_i and v_{i+1}.
struct Chain {
  int a = 0;  // hub index
  int b = 0;  // hub index
  std::vector<EdgeId> edges;
  Rational full_cost;
};

// A pair with at least one endpoint inside a chain. Local ids: 0 = a,
// 1..m interior, m+1 = b; hub partners carry their hub index.
struct ChainPair {
  PairId id;
  int u_local;
  int v_local = -1;  // -1: partner is the hub `v_hub`
  int v_hub = -1;
};

// One broken pattern: the chosen edges (mask over chain edges), its cost and
// the local component root of each chain node.
struct Pattern {
  std::uint32_t mask;
  Rational cost;
  std::vector<int> root;
};

struct Penalized {
  Rational value;
  bool infinite = false;

  void add(const Penalty& p) {
    if (p.is_infinite()) {
      infinite = true;
    } else {
      value += p.value();
    }
  }
};

class ChainSolver {
 public:
  ChainSolver(const PricedProblem& p, int max_chains, int max_chain_edges)
      : p_(p), max_chains_(max_chains), max_chain_edges_(max_chain_edges) {}

  bool build() {
    const Graph& g = *p_.graph;
    const int n = g.node_count();
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (!p_.edge_allowed(e)) continue;
      ++degree[static_cast<std::size_t>(g.edge(e).u)];
      ++degree[static_cast<std::size_t>(g.edge(e).v)];
    }
    hub_of_.assign(static_cast<std::size_t>(n), -1);
    for (NodeId v = 0; v < n; ++v) {
      if (degree[static_cast<std::size_t>(v)] != 2) make_hub(v);
    }
    chain_of_.assign(static_cast<std::size_t>(n), -1);
    local_of_.assign(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(g.edge_count()), 0);
    auto walk_from = [&](NodeId h) {
      for (const auto& inc : g.incident(h)) {
        if (!p_.edge_allowed(inc.edge) || used[static_cast<std::size_t>(inc.edge)]) continue;
        Chain c;
        c.a = hub_of_[static_cast<std::size_t>(h)];
        EdgeId e = inc.edge;
        NodeId cur = inc.other;
        const int id = static_cast<int>(chains_.size());
        for (;;) {
          used[static_cast<std::size_t>(e)] = 1;
          c.edges.push_back(e);
          c.full_cost += p_.costs[static_cast<std::size_t>(e)];
          if (hub_of_[static_cast<std::size_t>(cur)] >= 0) break;
          chain_of_[static_cast<std::size_t>(cur)] = id;
          local_of_[static_cast<std::size_t>(cur)] = static_cast<int>(c.edges.size());
          EdgeId next = -1;
          for (const auto& step : g.incident(cur)) {
            if (p_.edge_allowed(step.edge) && step.edge != e) next = step.edge;
          }
          e = next;
          cur = g.edge(e).u == cur ? g.edge(e).v : g.edge(e).u;
        }
        c.b = hub_of_[static_cast<std::size_t>(cur)];
        chains_.push_back(std::move(c));
      }
    };
    for (NodeId h : hubs_) walk_from(h);
    // Components that are plain cycles have no hub yet.
    for (NodeId v = 0; v < n; ++v) {
      if (degree[static_cast<std::size_t>(v)] == 2 && chain_of_[static_cast<std::size_t>(v)] < 0 &&
          hub_of_[static_cast<std::size_t>(v)] < 0) {
        make_hub(v);
        walk_from(v);
      }
    }
    if (static_cast<int>(chains_.size()) > max_chains_) return false;
    double patterns = 0;
    for (const auto& c : chains_) {
      if (static_cast<int>(c.edges.size()) > max_chain_edges_) return false;
      patterns += static_cast<double>(1u << c.edges.size());
    }
    if (std::ldexp(patterns, static_cast<int>(chains_.size())) > kWorkLimit) return false;

    chain_pairs_.assign(chains_.size(), {});
    for (PairId i = 0; i < static_cast<PairId>(p_.pairs->size()); ++i) {
      NodeId s = (*p_.pairs)[static_cast<std::size_t>(i)].s;
      NodeId t = (*p_.pairs)[static_cast<std::size_t>(i)].t;
      int cs = chain_of_[static_cast<std::size_t>(s)];
      int ct = chain_of_[static_cast<std::size_t>(t)];
      if (cs < 0 && ct < 0) {
        hub_pairs_.push_back({i, hub_of_[static_cast<std::size_t>(s)], hub_of_[static_cast<std::size_t>(t)]});
        continue;
      }
      if (cs >= 0 && ct >= 0 && cs != ct) return false;
      if (cs < 0) {
        std::swap(s, t);
        std::swap(cs, ct);
      }
      ChainPair cp{i, local_of_[static_cast<std::size_t>(s)]};
      if (ct >= 0) {
        cp.v_local = local_of_[static_cast<std::size_t>(t)];
      } else {
        cp.v_hub = hub_of_[static_cast<std::size_t>(t)];
      }
      chain_pairs_[static_cast<std::size_t>(cs)].push_back(cp);
    }

    patterns_.resize(chains_.size());
    for (std::size_t c = 0; c < chains_.size(); ++c) {
      const auto& ch = chains_[c];
      const int len = static_cast<int>(ch.edges.size());
      const std::uint32_t full = (1u << len) - 1;
      for (std::uint32_t mask = 0; mask < full; ++mask) {
        Pattern pat{mask, Rational(0), {}};
        UnionFind uf(len + 1);
        for (int i = 0; i < len; ++i) {
          if ((mask >> i) & 1u) {
            pat.cost += p_.costs[static_cast<std::size_t>(ch.edges[static_cast<std::size_t>(i)])];
            uf.unite(i, i + 1);
          }
        }
        for (int i = 0; i <= len; ++i) pat.root.push_back(uf.find(i));
        patterns_[c].push_back(std::move(pat));
      }
    }
    return true;
  }

  std::optional<IntegralSolution> solve(const std::optional<Rational>& cutoff) {
    limit_ = cutoff;
    choice_.assign(chains_.size(), -1);
    std::vector<int> parent(hubs_.size());
    for (std::size_t h = 0; h < hubs_.size(); ++h) parent[h] = static_cast<int>(h);
    search(0, parent, Rational(0));
    if (!best_choice_) return std::nullopt;

    EdgeSet edges;
    for (std::size_t c = 0; c < chains_.size(); ++c) {
      const auto& ch = chains_[c];
      const int pick = (*best_choice_)[c];
      for (std::size_t i = 0; i < ch.edges.size(); ++i) {
        if (pick < 0 || ((patterns_[c][static_cast<std::size_t>(pick)].mask >> i) & 1u)) edges.push_back(ch.edges[i]);
      }
    }
    auto sol = evaluate_edges(p_, make_edge_set(std::move(edges)));
    if (!sol.feasible || sol.objective() != *limit_) throw std::logic_error("chain enumeration lost track of its objective");
    return sol;
  }

 private:
  void make_hub(NodeId v) {
    hub_of_[static_cast<std::size_t>(v)] = static_cast<int>(hubs_.size());
    hubs_.push_back(v);
  }

  static int find(std::vector<int>& parent, int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  }

  void search(std::size_t c, std::vector<int>& parent, const Rational& partial) {
    if (limit_ && partial >= *limit_) return;
    if (c == chains_.size()) {
      leaf(parent, partial);
      return;
    }
    const auto& ch = chains_[c];
    const int ra = find(parent, ch.a);
    const int rb = find(parent, ch.b);
    if (ra != rb) {
      auto joined = parent;
      joined[static_cast<std::size_t>(ra)] = rb;
      choice_[c] = -1;
      search(c + 1, joined, partial + ch.full_cost);
    }
    choice_[c] = 0;  // broken; the pattern is fixed at the leaf
    search(c + 1, parent, partial);
  }

  void leaf(std::vector<int>& parent, const Rational& full_costs) {
    std::vector<int> label(hubs_.size());
    for (std::size_t h = 0; h < hubs_.size(); ++h) label[h] = find(parent, static_cast<int>(h));

    Penalized total{full_costs};
    for (const auto& hp : hub_pairs_) {
      if (label[static_cast<std::size_t>(hp.u)] != label[static_cast<std::size_t>(hp.v)]) {
        total.add(p_.penalties[static_cast<std::size_t>(hp.id)]);
      }
    }
    if (total.infinite) return;

    std::vector<int> picks(chains_.size(), -1);
    for (std::size_t c = 0; c < chains_.size(); ++c) {
      if (limit_ && total.value >= *limit_) return;
      const auto& ch = chains_[c];
      const int la = label[static_cast<std::size_t>(ch.a)];
      const int lb = label[static_cast<std::size_t>(ch.b)];
      if (choice_[c] < 0) {
        // Every chain node sits in the component of a (= that of b).
        for (const auto& cp : chain_pairs_[c]) {
          if (cp.v_local < 0 && label[static_cast<std::size_t>(cp.v_hub)] != la) {
            total.add(p_.penalties[static_cast<std::size_t>(cp.id)]);
          }
        }
        if (total.infinite) return;
        continue;
      }
      const int last = static_cast<int>(ch.edges.size());
      std::optional<Rational> best;
      int best_pick = -1;
      for (std::size_t k = 0; k < patterns_[c].size(); ++k) {
        const auto& pat = patterns_[c][k];
        const int root_a = pat.root[0];
        const int root_b = pat.root[static_cast<std::size_t>(last)];
        // Global label of a local root, or -1 for a floating segment.
        auto global = [&](int r) { return r == root_a ? la : (r == root_b ? lb : -1); };
        Penalized cost{pat.cost};
        for (const auto& cp : chain_pairs_[c]) {
          const int ru = pat.root[static_cast<std::size_t>(cp.u_local)];
          bool joined;
          if (cp.v_local >= 0) {
            const int rv = pat.root[static_cast<std::size_t>(cp.v_local)];
            joined = ru == rv || (global(ru) >= 0 && global(ru) == global(rv));
          } else {
            joined = global(ru) >= 0 && global(ru) == label[static_cast<std::size_t>(cp.v_hub)];
          }
          if (!joined) cost.add(p_.penalties[static_cast<std::size_t>(cp.id)]);
        }
        if (cost.infinite) continue;
        if (!best || cost.value < *best) {
          best = cost.value;
          best_pick = static_cast<int>(k);
        }
      }
      if (!best) return;
      total.value += *best;
      picks[c] = best_pick;
    }
    if (limit_ && total.value >= *limit_) return;
    limit_ = total.value;
    best_choice_ = picks;
  }

  struct HubPair {
    PairId id;
    int u;
    int v;
  };

  const PricedProblem& p_;
  int max_chains_;
  int max_chain_edges_;
  std::vector<NodeId> hubs_;
  std::vector<int> hub_of_;
  std::vector<int> chain_of_;
  std::vector<int> local_of_;
  std::vector<Chain> chains_;
  std::vector<HubPair> hub_pairs_;
  std::vector<std::vector<ChainPair>> chain_pairs_;
  std::vector<std::vector<Pattern>> patterns_;
  std::vector<int> choice_;
  std::optional<Rational> limit_;
  std::optional<std::vector<int>> best_choice_;
};

}  // namespace

std::optional<std::optional<IntegralSolution>> solve_by_chains(const PricedProblem& p,
                                                               const std::optional<Rational>& cutoff,
                                                               int max_chains, int max_chain_edges) {
  ChainSolver solver(p, max_chains, max_chain_edges);
  if (!solver.build()) return std::nullopt;
  return solver.solve(cutoff);
}

}  // namespace pcsf
