#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pcsf/constraint.hpp"
#include "pcsf/graph.hpp"
#include "pcsf/instance.hpp"

namespace pcsf {

enum class BaseKind { K4, Complete, Prism, FromFile };

/// A base graph P together with its validated regularity l.
struct BaseGraph {
  Graph graph;
  int degree = 0;
  std::string label;
};

/// Checks that g is l-regular and l-edge-connected for l = degree of node 0.
/// Throws ValidationError naming the offending node or the connectivity.
int validate_regular_connected(const Graph& g);

/// K4, complete(q) (q >= 4), the triangular prism, or an edge-list file with
/// lines "<u> <v>" over integer node ids.
BaseGraph make_base(BaseKind kind, int q = 0, const std::filesystem::path& file = {});
BaseGraph make_base(const std::string& spec);  // "k4", "complete:5", "prism", "file:<path>"

enum class NodeRole { Branch, Subdivision };

struct LayeredNode {
  int copy = 0;  // copy that created the node
  NodeRole role = NodeRole::Branch;
  int level = 0;
  int local = 0;  // index of the node inside H
};

struct LayeredEdge {
  int copy = 0;
  int group = 0;  // edge of P whose subdivided path holds this edge
};

struct LayeredCopy {
  int parent = -1;  // parent copy, -1 for the root copy
  int level = 0;
  NodeId root = 0;             // global node playing the role of H's root
  std::vector<NodeId> nodes;   // global id of each H-local node
  std::vector<EdgeId> edges;   // global id of each H-local edge
};

/// The recursive layered graph H^(k): H is P with every edge replaced by a
/// path with m internal nodes; each level attaches a fresh copy of H at every
/// degree-2 node of the previous level.
struct LayeredConstruction {
  Graph base;
  int base_degree = 0;  // l
  int subdivisions = 0; // m
  int depth = 0;        // k

  Graph graph;
  NodeId root = 0;  // r0
  std::vector<LayeredNode> node_info;
  std::vector<LayeredEdge> edge_info;
  std::vector<LayeredCopy> copies;
  std::vector<int> child_copy;  // per node: copy rooted there, or -1

  // Local layout of H: nodes [0, n) are the branch nodes of P; subdivision
  // node j (0-based) of P-edge e is n + e*m + j. Local edge j of path e is
  // e*(m+1) + j, ordered from P-endpoint u to v.
  int base_nodes() const { return base.node_count(); }
  NodeId local_subdivision(int group, int j) const { return base_nodes() + group * subdivisions + j; }
  int local_path_edge(int group, int j) const { return group * (subdivisions + 1) + j; }

  /// Global ids of the m+1 edges of path Q_group inside copy c.
  std::vector<EdgeId> path_edges(int c, int group) const;
  /// Global ids of the m subdivision nodes on Q_group inside copy c.
  std::vector<NodeId> path_nodes(int c, int group) const;
  std::vector<NodeId> branch_nodes(int c) const;
  /// Copy rooted at node v, or -1.
  int copy_rooted_at(NodeId v) const;
  /// Nodes of degree 2 in the final graph, ascending.
  std::vector<NodeId> degree_two_nodes() const;
};

struct LayeredLimits {
  long max_nodes = 2'000'000;
};

LayeredConstruction build_layered(const BaseGraph& base, int m, int k, LayeredLimits limits = {});

enum class CostScheme { Unit, Witness };

/// Pairs: every unordered pair of branch nodes inside each copy (infinite
/// penalty under the unit scheme), then (r0, v) for each degree-2 node v
/// (penalty 1). Unit edge costs. The witness scheme is produced by
/// witness_costs_from_dual and is not accepted here.
PcsfInstance layered_instance(const LayeredConstruction& lc, CostScheme scheme = CostScheme::Unit);

enum class PointMode { Gap, Lmp };

/// x = 1/l everywhere; z = 0 on same-copy branch pairs and 1/3 (gap, l = 3
/// only) or 1 - 2/l (lmp) on root pairs. Pair order follows layered_instance.
FracSolution canonical_point(const LayeredConstruction& lc, PointMode mode);

/// Pair ids of layered_instance split into same-copy branch pairs and root pairs.
struct LayeredPairs {
  std::vector<PairId> branch;
  std::vector<PairId> root;
};
LayeredPairs layered_pair_classes(const LayeredConstruction& lc);

/// Node ids of the tree-instance gadget graph.
struct GadgetLayout {
  int k = 0;
  NodeId r = 0;
  NodeId s = 1;
  /// u(g, j) for gadget g in [0, k) and j in [1, 10].
  NodeId u(int g, int j) const { return 2 + 10 * g + (j - 1); }
  /// Pair (v, r) has id v - 1 for every v != r.
  PairId pair_of(NodeId v) const { return v - 1; }
};

struct GadgetInstance {
  PcsfInstance instance;
  FracSolution point;
  GadgetLayout layout;
  std::vector<EdgeId> wavy;  // edges carrying 2/k
  std::string wiring;        // description of the external wiring
};

/// k gadgets of 10 nodes each between a root r and a node s. Gadget g is
/// wired u1-s, u8-r, and u9(g)-u4(g+1 mod k). Pairs (v, r) for all v != r,
/// penalty 1, unit costs. Point: x = 2/k on wavy edges, 1/k elsewhere;
/// z_s = 0, z_u = 1 - 4/k.
GadgetInstance pcst_gadget_instance(int k);

/// Tight constraints certifying the gadget point: per gadget the 10 node cuts,
/// the 10 whole-gadget cuts, the 5 wavy-pair cuts, the {u1..u4} and {u7..u10}
/// cuts; globally the cut {r} for pair s and z_s >= 0.
enum class GadgetRowFamily {
  NodeCut,      // x(delta(u_i)) + z_{u_i} = 1
  GadgetCut,    // x(delta(gadget)) + z_{u_i} = 1
  WavyPairCut,  // x(delta({u_i, u_{i+1}})) + z_{u_i} = 1, i odd
  LeftBlock,    // x(delta({u1..u4})) + z_{u1} = 1
  RightBlock,   // x(delta({u7..u10})) + z_{u7} = 1
  RootCut,      // x(delta(r)) + z_s = 1
  SourceZero,   // z_s = 0
};

const char* to_string(GadgetRowFamily f);

struct GadgetFamily {
  std::vector<CutConstraint> constraints;
  std::vector<GadgetRowFamily> family;  // parallel to constraints
};
GadgetFamily gadget_tight_family(const GadgetInstance& g);

struct RandomSpec {
  int nodes = 6;
  int edges = 9;
  int pairs = 3;
  bool allow_infinite = false;
};

/// Connected multigraph (random spanning tree plus random extra edges), costs
/// in {1/2, 1, ..., 8}, distinct random pairs with penalties a/b, a <= 12,
/// b <= 3. With `allow_infinite`, about one pair in five gets an infinite
/// penalty. Deterministic in `seed`.
PcsfInstance random_instance(std::uint32_t seed, RandomSpec spec);

}  // namespace pcsf
