#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcsf/rational.hpp"

namespace pcsf {

using NodeId = int;
using EdgeId = int;

struct Edge {
  NodeId u;
  NodeId v;
};

/// Undirected multigraph. Edge identity is the index into edges(); parallel
/// edges are allowed, self-loops are not.
class Graph {
public:
  struct Incidence {
    EdgeId edge;
    NodeId other;
  };

  Graph() = default;
  explicit Graph(int node_count);

  /// Appends an edge and returns its id.
  EdgeId add_edge(NodeId u, NodeId v);
  NodeId add_node();

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(NodeId v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }
  int degree(NodeId v) const { return static_cast<int>(incident(v).size()); }
  bool valid_node(NodeId v) const { return v >= 0 && v < node_count(); }

private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Per-edge nonnegative rational, indexed by edge id.
using Capacities = std::vector<Rational>;

/// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<EdgeId>;

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

EdgeSet make_edge_set(std::vector<EdgeId> ids);

/// Edges with exactly one endpoint in `side` (given as a membership mask).
EdgeSet cut_edges(const Graph& g, const std::vector<char>& in_side);

class UnionFind {
public:
  explicit UnionFind(int n);
  int find(int v);
  /// Returns false if already joined.
  bool unite(int a, int b);
  bool same(int a, int b) { return find(a) == find(b); }

private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

struct MinCutResult {
  Rational value;
  NodeSet side;  // contains s, excludes t
};

/// Exact minimum s-t cut by shortest augmenting paths. The returned side is
/// the set reachable from s in the final residual graph.
MinCutResult min_cut(const Graph& g, const Capacities& cap, NodeId s, NodeId t);

/// Max-flow value, stopping early once the flow reaches `limit`. Returns
/// min(maxflow, limit).
Rational max_flow_up_to(const Graph& g, const Capacities& cap, NodeId s, NodeId t,
                        const Rational& limit);

/// Global unit-capacity minimum cut; 0 when disconnected.
int edge_connectivity(const Graph& g);

/// Component label per node (label = smallest node id in its component),
/// using only the edges in `f`.
std::vector<NodeId> component_labels(const Graph& g, std::span<const EdgeId> f);

/// Components of (V, f) as node sets ordered by smallest member.
std::vector<NodeSet> components(const Graph& g, std::span<const EdgeId> f);

bool is_connected(const Graph& g);
bool is_forest(const Graph& g, std::span<const EdgeId> f);

/// Kruskal with ties broken by smallest edge id. Throws ValidationError when g
/// is disconnected.
EdgeSet minimum_spanning_tree(const Graph& g, const Capacities& weights);

/// Every spanning tree exactly once, each as a sorted edge set. Throws
/// ScaleCapError when |E| exceeds `max_edges`.
std::vector<EdgeSet> enumerate_spanning_trees(const Graph& g, int max_edges = 20);

}  // namespace pcsf
