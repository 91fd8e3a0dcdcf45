#include "pcsf/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "pcsf/error.hpp"

namespace pcsf {

Graph::Graph(int node_count) : adjacency_(static_cast<std::size_t>(node_count)) {}

NodeId Graph::add_node() {
  adjacency_.emplace_back();
  return node_count() - 1;
}

EdgeId Graph::add_edge(NodeId u, NodeId v) {
  if (!valid_node(u) || !valid_node(v)) {
    throw ValidationError("edge endpoint out of range: " + std::to_string(u) + "-" +
                          std::to_string(v));
  }
  if (u == v) throw ValidationError("self-loop at node " + std::to_string(u));
  const EdgeId id = edge_count();
  edges_.push_back({u, v});
  adjacency_[static_cast<std::size_t>(u)].push_back({id, v});
  adjacency_[static_cast<std::size_t>(v)].push_back({id, u});
  return id;
}

EdgeSet make_edge_set(std::vector<EdgeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

EdgeSet cut_edges(const Graph& g, const std::vector<char>& in_side) {
  EdgeSet out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& [u, v] = g.edge(e);
    if (in_side[static_cast<std::size_t>(u)] != in_side[static_cast<std::size_t>(v)]) {
      out.push_back(e);
    }
  }
  return out;
}

UnionFind::UnionFind(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int v) {
  auto idx = static_cast<std::size_t>(v);
  while (parent_[idx] != static_cast<int>(idx)) {
    parent_[idx] = parent_[static_cast<std::size_t>(parent_[idx])];
    idx = static_cast<std::size_t>(parent_[idx]);
  }
  return static_cast<int>(idx);
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  auto ia = static_cast<std::size_t>(a);
  auto ib = static_cast<std::size_t>(b);
  if (rank_[ia] < rank_[ib]) std::swap(ia, ib);
  parent_[ib] = static_cast<int>(ia);
  if (rank_[ia] == rank_[ib]) ++rank_[ia];
  return true;
}

namespace {

void check_endpoints(const Graph& g, NodeId s, NodeId t) {
  if (!g.valid_node(s) || !g.valid_node(t)) {
    throw ValidationError("min_cut: terminal out of range");
  }
  if (s == t) throw ValidationError("min_cut: s and t coincide");
}

// Signed flow per edge, positive in the u->v direction.
struct FlowState {
  const Graph& g;
  const Capacities& cap;
  std::vector<Rational> flow;

  FlowState(const Graph& graph, const Capacities& c)
      : g(graph), cap(c), flow(static_cast<std::size_t>(graph.edge_count()), Rational(0)) {}

  // Residual capacity of traversing edge e starting at `from`.
  Rational residual(EdgeId e, NodeId from) const {
    const auto idx = static_cast<std::size_t>(e);
    if (g.edge(e).u == from) return Rational(cap[idx] - flow[idx]);
    return Rational(cap[idx] + flow[idx]);
  }

  bool has_residual(EdgeId e, NodeId from) const {
    const auto idx = static_cast<std::size_t>(e);
    if (g.edge(e).u == from) return cap[idx] > flow[idx];
    return cap[idx] + flow[idx] > 0;
  }

  // BFS in the residual graph; fills pred edge per node (-1 = unreached).
  std::vector<EdgeId> bfs(NodeId s, NodeId t) const {
    std::vector<EdgeId> pred(static_cast<std::size_t>(g.node_count()), -1);
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
    std::deque<NodeId> queue{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      if (v == t) break;
      for (const auto& inc : g.incident(v)) {
        auto w = static_cast<std::size_t>(inc.other);
        if (seen[w] || !has_residual(inc.edge, v)) continue;
        seen[w] = 1;
        pred[w] = inc.edge;
        queue.push_back(inc.other);
      }
    }
    return pred;
  }

  // One augmentation along a shortest path; returns the amount (0 if none).
  Rational augment(NodeId s, NodeId t, const Rational& cap_amount, bool capped) {
    auto pred = bfs(s, t);
    if (pred[static_cast<std::size_t>(t)] < 0) return Rational(0);
    Rational bottleneck;
    bool first = true;
    for (NodeId v = t; v != s;) {
      const EdgeId e = pred[static_cast<std::size_t>(v)];
      const auto& ed = g.edge(e);
      const NodeId from = ed.u == v ? ed.v : ed.u;
      Rational r = residual(e, from);
      if (first || r < bottleneck) bottleneck = r;
      first = false;
      v = from;
    }
    if (capped && cap_amount < bottleneck) bottleneck = cap_amount;
    for (NodeId v = t; v != s;) {
      const EdgeId e = pred[static_cast<std::size_t>(v)];
      const auto& ed = g.edge(e);
      const NodeId from = ed.u == v ? ed.v : ed.u;
      if (ed.u == from) {
        flow[static_cast<std::size_t>(e)] += bottleneck;
      } else {
        flow[static_cast<std::size_t>(e)] -= bottleneck;
      }
      v = from;
    }
    return bottleneck;
  }
};

void check_capacities(const Graph& g, const Capacities& cap) {
  if (static_cast<int>(cap.size()) != g.edge_count()) {
    throw ValidationError("capacity vector does not match edge count");
  }
  for (const auto& c : cap) {
    if (sgn(c) < 0) throw ValidationError("negative capacity");
  }
}

}  // namespace

MinCutResult min_cut(const Graph& g, const Capacities& cap, NodeId s, NodeId t) {
  check_endpoints(g, s, t);
  check_capacities(g, cap);
  FlowState state(g, cap);
  Rational value(0);
  for (;;) {
    Rational pushed = state.augment(s, t, Rational(0), false);
    if (sgn(pushed) == 0) break;
    value += pushed;
  }
  auto pred = state.bfs(s, t);
  MinCutResult out{value, {}};
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == s || pred[static_cast<std::size_t>(v)] >= 0) out.side.push_back(v);
  }
  return out;
}

Rational max_flow_up_to(const Graph& g, const Capacities& cap, NodeId s, NodeId t,
                        const Rational& limit) {
  check_endpoints(g, s, t);
  FlowState state(g, cap);
  Rational value(0);
  while (value < limit) {
    Rational pushed = state.augment(s, t, limit - value, true);
    if (sgn(pushed) == 0) break;
    value += pushed;
  }
  return value;
}

int edge_connectivity(const Graph& g) {
  if (g.node_count() <= 1) return 0;
  if (!is_connected(g)) return 0;
  Capacities unit(static_cast<std::size_t>(g.edge_count()), Rational(1));
  int best = g.edge_count();
  // A global minimum cut separates node 0 from some other node.
  for (NodeId t = 1; t < g.node_count(); ++t) {
    Rational f = max_flow_up_to(g, unit, 0, t, Rational(best));
    best = std::min(best, static_cast<int>(f.get_num().get_si()));
  }
  return best;
}

std::vector<NodeId> component_labels(const Graph& g, std::span<const EdgeId> f) {
  UnionFind uf(g.node_count());
  for (EdgeId e : f) uf.unite(g.edge(e).u, g.edge(e).v);
  std::vector<NodeId> root_min(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<NodeId> label(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto r = static_cast<std::size_t>(uf.find(v));
    if (root_min[r] < 0) root_min[r] = v;
    label[static_cast<std::size_t>(v)] = root_min[r];
  }
  return label;
}

std::vector<NodeSet> components(const Graph& g, std::span<const EdgeId> f) {
  auto label = component_labels(g, f);
  std::vector<int> slot(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<NodeSet> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto l = static_cast<std::size_t>(label[static_cast<std::size_t>(v)]);
    if (slot[l] < 0) {
      slot[l] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[l])].push_back(v);
  }
  return out;
}

bool is_connected(const Graph& g) {
  std::vector<EdgeId> all(static_cast<std::size_t>(g.edge_count()));
  std::iota(all.begin(), all.end(), 0);
  return components(g, all).size() <= 1;
}

bool is_forest(const Graph& g, std::span<const EdgeId> f) {
  UnionFind uf(g.node_count());
  for (EdgeId e : f) {
    if (!uf.unite(g.edge(e).u, g.edge(e).v)) return false;
  }
  return true;
}

EdgeSet minimum_spanning_tree(const Graph& g, const Capacities& weights) {
  if (static_cast<int>(weights.size()) != g.edge_count()) {
    throw ValidationError("weight vector does not match edge count");
  }
  std::vector<EdgeId> order(static_cast<std::size_t>(g.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return weights[static_cast<std::size_t>(a)] < weights[static_cast<std::size_t>(b)];
  });
  UnionFind uf(g.node_count());
  EdgeSet tree;
  for (EdgeId e : order) {
    if (uf.unite(g.edge(e).u, g.edge(e).v)) tree.push_back(e);
  }
  if (g.node_count() > 0 && static_cast<int>(tree.size()) != g.node_count() - 1) {
    throw ValidationError("minimum_spanning_tree: graph is disconnected");
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

namespace {

void enumerate_trees_rec(const Graph& g, EdgeId next, std::vector<int>& comp, int components_left,
                         EdgeSet& current, std::vector<EdgeSet>& out) {
  if (components_left == 1) {
    out.push_back(current);
    return;
  }
  // Not enough edges left to finish a tree.
  if (g.edge_count() - next < components_left - 1) return;
  const auto& [u, v] = g.edge(next);
  const int cu = comp[static_cast<std::size_t>(u)];
  const int cv = comp[static_cast<std::size_t>(v)];
  if (cu != cv) {
    std::vector<int> saved = comp;
    for (auto& c : comp) {
      if (c == cv) c = cu;
    }
    current.push_back(next);
    enumerate_trees_rec(g, next + 1, comp, components_left - 1, current, out);
    current.pop_back();
    comp = std::move(saved);
  }
  enumerate_trees_rec(g, next + 1, comp, components_left, current, out);
}

}  // namespace

std::vector<EdgeSet> enumerate_spanning_trees(const Graph& g, int max_edges) {
  if (g.edge_count() > max_edges) {
    throw ScaleCapError("enumerate_spanning_trees: " + std::to_string(g.edge_count()) +
                        " edges exceeds cap " + std::to_string(max_edges));
  }
  if (!is_connected(g)) throw ValidationError("enumerate_spanning_trees: graph is disconnected");
  std::vector<EdgeSet> out;
  if (g.node_count() == 0) return out;
  std::vector<int> comp(static_cast<std::size_t>(g.node_count()));
  std::iota(comp.begin(), comp.end(), 0);
  EdgeSet current;
  enumerate_trees_rec(g, 0, comp, g.node_count(), current, out);
  return out;
}

}  // namespace pcsf
