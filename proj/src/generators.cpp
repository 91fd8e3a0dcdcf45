#include "pcsf/generators.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "pcsf/error.hpp"

namespace pcsf {

int validate_regular_connected(const Graph& g) {
  if (g.node_count() < 2) throw ValidationError("base graph needs at least two nodes");
  const int l = g.degree(0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) != l) {
      throw ValidationError("base graph is not regular: node " + std::to_string(v) + " has degree " +
                            std::to_string(g.degree(v)) + ", expected " + std::to_string(l));
    }
  }
  const int conn = edge_connectivity(g);
  if (conn < l) {
    throw ValidationError("base graph is " + std::to_string(conn) + "-edge-connected, expected " +
                          std::to_string(l));
  }
  return l;
}

BaseGraph make_base(BaseKind kind, int q, const std::filesystem::path& file) {
  BaseGraph out;
  switch (kind) {
    case BaseKind::K4:
      q = 4;
      [[fallthrough]];
    case BaseKind::Complete: {
      if (q < 4) throw ValidationError("complete base graph needs q >= 4");
      out.graph = Graph(q);
      for (int a = 0; a < q; ++a) {
        for (int b = a + 1; b < q; ++b) out.graph.add_edge(a, b);
      }
      out.label = kind == BaseKind::K4 ? "k4" : "complete:" + std::to_string(q);
      break;
    }
    case BaseKind::Prism: {
      out.graph = Graph(6);
      for (int side = 0; side < 2; ++side) {
        for (int j = 0; j < 3; ++j) out.graph.add_edge(3 * side + j, 3 * side + (j + 1) % 3);
      }
      for (int j = 0; j < 3; ++j) out.graph.add_edge(j, j + 3);
      out.label = "prism";
      break;
    }
    case BaseKind::FromFile: {
      std::ifstream in(file);
      if (!in) throw ValidationError("cannot open base graph file " + file.string());
      std::vector<std::pair<int, int>> edges;
      int max_node = -1;
      std::string line;
      while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int u = 0;
        int v = 0;
        if (!(ls >> u)) continue;
        if (!(ls >> v) || u < 0 || v < 0) throw ValidationError("base graph file: malformed line '" + line + "'");
        edges.emplace_back(u, v);
        max_node = std::max({max_node, u, v});
      }
      out.graph = Graph(max_node + 1);
      for (auto [u, v] : edges) out.graph.add_edge(u, v);
      out.label = "file:" + file.string();
      break;
    }
  }
  out.degree = validate_regular_connected(out.graph);
  return out;
}

BaseGraph make_base(const std::string& spec) {
  if (spec == "k4" || spec == "K4") return make_base(BaseKind::K4);
  if (spec == "prism") return make_base(BaseKind::Prism);
  if (spec.rfind("complete:", 0) == 0) return make_base(BaseKind::Complete, std::stoi(spec.substr(9)));
  if (spec.rfind("k", 0) == 0 && spec.size() > 1 &&
      std::all_of(spec.begin() + 1, spec.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return make_base(BaseKind::Complete, std::stoi(spec.substr(1)));
  }
  if (spec.rfind("file:", 0) == 0) return make_base(BaseKind::FromFile, 0, spec.substr(5));
  throw ValidationError("unknown base graph '" + spec + "'");
}

std::vector<EdgeId> LayeredConstruction::path_edges(int c, int group) const {
  const auto& copy = copies[static_cast<std::size_t>(c)];
  std::vector<EdgeId> out;
  for (int j = 0; j <= subdivisions; ++j) {
    out.push_back(copy.edges[static_cast<std::size_t>(local_path_edge(group, j))]);
  }
  return out;
}

std::vector<NodeId> LayeredConstruction::path_nodes(int c, int group) const {
  const auto& copy = copies[static_cast<std::size_t>(c)];
  std::vector<NodeId> out;
  for (int j = 0; j < subdivisions; ++j) {
    out.push_back(copy.nodes[static_cast<std::size_t>(local_subdivision(group, j))]);
  }
  return out;
}

std::vector<NodeId> LayeredConstruction::branch_nodes(int c) const {
  const auto& copy = copies[static_cast<std::size_t>(c)];
  return {copy.nodes.begin(), copy.nodes.begin() + base_nodes()};
}

int LayeredConstruction::copy_rooted_at(NodeId v) const {
  if (v == root) return 0;
  return child_copy[static_cast<std::size_t>(v)];
}

std::vector<NodeId> LayeredConstruction::degree_two_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.degree(v) == 2) out.push_back(v);
  }
  return out;
}

LayeredConstruction build_layered(const BaseGraph& base, int m, int k, LayeredLimits limits) {
  if (m < 1) throw ValidationError("subdivision count m must be at least 1");
  if (k < 0) throw ValidationError("depth k must be nonnegative");
  const long n = base.graph.node_count();
  const long pe = base.graph.edge_count();
  const long h_nodes = n + m * pe;
  {
    long total = h_nodes;
    long deg2 = m * pe;
    for (int i = 1; i <= k; ++i) {
      total += deg2 * (h_nodes - 1);
      if (total > limits.max_nodes) break;
      deg2 *= m * pe;
    }
    if (total > limits.max_nodes) {
      throw ScaleCapError("layered construction exceeds node cap " + std::to_string(limits.max_nodes));
    }
  }

  LayeredConstruction lc;
  lc.base = base.graph;
  lc.base_degree = base.degree;
  lc.subdivisions = m;
  lc.depth = k;

  // Local endpoints of every edge of H.
  std::vector<std::pair<int, int>> local_edges;
  for (int e = 0; e < pe; ++e) {
    const auto& [a, b] = base.graph.edge(e);
    int prev = a;
    for (int j = 0; j < m; ++j) {
      const int sub = lc.local_subdivision(e, j);
      local_edges.emplace_back(prev, sub);
      prev = sub;
    }
    local_edges.emplace_back(prev, b);
  }

  auto attach = [&](int parent, int level, NodeId root_node) {
    const int id = static_cast<int>(lc.copies.size());
    LayeredCopy copy;
    copy.parent = parent;
    copy.level = level;
    copy.nodes.resize(static_cast<std::size_t>(h_nodes));
    for (int local = 0; local < h_nodes; ++local) {
      if (local == 0 && root_node >= 0) {
        copy.nodes[0] = root_node;
        continue;
      }
      const NodeId v = lc.graph.add_node();
      copy.nodes[static_cast<std::size_t>(local)] = v;
      lc.node_info.push_back({id, local < n ? NodeRole::Branch : NodeRole::Subdivision, level, local});
      lc.child_copy.push_back(-1);
    }
    copy.root = copy.nodes[0];
    for (std::size_t j = 0; j < local_edges.size(); ++j) {
      const auto& [a, b] = local_edges[j];
      const EdgeId e = lc.graph.add_edge(copy.nodes[static_cast<std::size_t>(a)],
                                         copy.nodes[static_cast<std::size_t>(b)]);
      copy.edges.push_back(e);
      lc.edge_info.push_back({id, static_cast<int>(j) / (m + 1)});
    }
    if (root_node >= 0) lc.child_copy[static_cast<std::size_t>(root_node)] = id;
    lc.copies.push_back(std::move(copy));
  };

  attach(-1, 0, -1);
  lc.root = lc.copies[0].root;
  std::size_t level_begin = 0;
  for (int level = 1; level <= k; ++level) {
    const std::size_t level_end = lc.copies.size();
    for (std::size_t c = level_begin; c < level_end; ++c) {
      for (int local = static_cast<int>(n); local < h_nodes; ++local) {
        const NodeId v = lc.copies[c].nodes[static_cast<std::size_t>(local)];
        attach(static_cast<int>(c), level, v);
      }
    }
    level_begin = level_end;
  }
  return lc;
}

namespace {

std::string layered_node_name(const LayeredConstruction& lc, NodeId v) {
  const auto& info = lc.node_info[static_cast<std::size_t>(v)];
  const int n = lc.base_nodes();
  if (info.role == NodeRole::Branch) return "c" + std::to_string(info.copy) + ".b" + std::to_string(info.local);
  const int rel = info.local - n;
  return "c" + std::to_string(info.copy) + ".e" + std::to_string(rel / lc.subdivisions) + "." +
         std::to_string(rel % lc.subdivisions);
}

}  // namespace

LayeredPairs layered_pair_classes(const LayeredConstruction& lc) {
  LayeredPairs out;
  const int n = lc.base_nodes();
  const int per_copy = n * (n - 1) / 2;
  const int branch_total = per_copy * static_cast<int>(lc.copies.size());
  for (int i = 0; i < branch_total; ++i) out.branch.push_back(i);
  const int roots = static_cast<int>(lc.degree_two_nodes().size());
  for (int i = 0; i < roots; ++i) out.root.push_back(branch_total + i);
  return out;
}

PcsfInstance layered_instance(const LayeredConstruction& lc, CostScheme scheme) {
  if (scheme != CostScheme::Unit) {
    throw ValidationError("witness costs come from witness_costs_from_dual, not layered_instance");
  }
  PcsfInstance inst;
  inst.graph = lc.graph;
  inst.costs.assign(static_cast<std::size_t>(lc.graph.edge_count()), Rational(1));
  for (NodeId v = 0; v < lc.graph.node_count(); ++v) inst.node_names.push_back(layered_node_name(lc, v));
  for (std::size_t c = 0; c < lc.copies.size(); ++c) {
    auto branch = lc.branch_nodes(static_cast<int>(c));
    for (std::size_t a = 0; a < branch.size(); ++a) {
      for (std::size_t b = a + 1; b < branch.size(); ++b) {
        inst.pairs.push_back({branch[a], branch[b]});
        inst.penalties.push_back(Penalty::infinite());
      }
    }
  }
  for (NodeId v : lc.degree_two_nodes()) {
    inst.pairs.push_back({lc.root, v});
    inst.penalties.emplace_back(Rational(1));
  }
  return inst;
}

FracSolution canonical_point(const LayeredConstruction& lc, PointMode mode) {
  const int l = lc.base_degree;
  if (mode == PointMode::Gap && l != 3) {
    throw ValidationError("gap-mode canonical point requires a 3-regular base graph (l = " + std::to_string(l) +
                          ")");
  }
  FracSolution point;
  point.x.assign(static_cast<std::size_t>(lc.graph.edge_count()), Rational(1, l));
  auto classes = layered_pair_classes(lc);
  point.z.assign(classes.branch.size() + classes.root.size(), Rational(0));
  const Rational root_z = mode == PointMode::Gap ? Rational(1, 3) : Rational(1) - frac(2, l);
  for (PairId i : classes.root) point.z[static_cast<std::size_t>(i)] = root_z;
  return point;
}

const char* to_string(GadgetRowFamily f) {
  switch (f) {
    case GadgetRowFamily::NodeCut: return "node-cut";
    case GadgetRowFamily::GadgetCut: return "gadget-cut";
    case GadgetRowFamily::WavyPairCut: return "wavy-pair-cut";
    case GadgetRowFamily::LeftBlock: return "left-block-cut";
    case GadgetRowFamily::RightBlock: return "right-block-cut";
    case GadgetRowFamily::RootCut: return "root-cut";
    case GadgetRowFamily::SourceZero: return "source-zero";
  }
  return "?";
}

GadgetInstance pcst_gadget_instance(int k) {
  if (k < 4) throw ValidationError("gadget instance needs k >= 4");
  GadgetInstance out;
  out.layout.k = k;
  const auto& lay = out.layout;
  auto& inst = out.instance;
  inst.graph = Graph(2 + 10 * k);
  inst.node_names = {"r", "s"};
  for (int g = 0; g < k; ++g) {
    for (int j = 1; j <= 10; ++j) inst.node_names.push_back("g" + std::to_string(g) + ".u" + std::to_string(j));
  }
  static constexpr std::pair<int, int> kWavy[] = {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}};
  static constexpr std::pair<int, int> kStraight[] = {{2, 3}, {1, 4}, {2, 5}, {3, 5},
                                                      {6, 7}, {6, 10}, {7, 10}, {8, 9}};
  for (int g = 0; g < k; ++g) {
    for (auto [a, b] : kWavy) out.wavy.push_back(inst.graph.add_edge(lay.u(g, a), lay.u(g, b)));
    for (auto [a, b] : kStraight) inst.graph.add_edge(lay.u(g, a), lay.u(g, b));
    inst.graph.add_edge(lay.u(g, 1), lay.s);
    inst.graph.add_edge(lay.u(g, 8), lay.r);
  }
  for (int g = 0; g < k; ++g) inst.graph.add_edge(lay.u(g, 9), lay.u((g + 1) % k, 4));
  out.wiring = "u1-s, u8-r, u9(g)-u4(g+1 mod k)";

  inst.costs.assign(static_cast<std::size_t>(inst.graph.edge_count()), Rational(1));
  for (NodeId v = 1; v < inst.graph.node_count(); ++v) {
    inst.pairs.push_back({v, lay.r});
    inst.penalties.emplace_back(Rational(1));
  }

  auto& point = out.point;
  point.x.assign(static_cast<std::size_t>(inst.graph.edge_count()), Rational(1, k));
  for (EdgeId e : out.wavy) point.x[static_cast<std::size_t>(e)] = frac(2, k);
  point.z.assign(static_cast<std::size_t>(inst.pair_count()), Rational(1) - frac(4, k));
  point.z[static_cast<std::size_t>(lay.pair_of(lay.s))] = 0;
  return out;
}

GadgetFamily gadget_tight_family(const GadgetInstance& g) {
  const auto& inst = g.instance;
  const auto& lay = g.layout;
  GadgetFamily out;
  auto add = [&](GadgetRowFamily f, CutConstraint c) {
    out.constraints.push_back(std::move(c));
    out.family.push_back(f);
  };
  auto cut = [&](NodeId owner, NodeSet side) { return CutConstraint::cut(inst, lay.pair_of(owner), std::move(side)); };
  for (int q = 0; q < lay.k; ++q) {
    NodeSet whole;
    for (int j = 1; j <= 10; ++j) whole.push_back(lay.u(q, j));
    for (int j = 1; j <= 10; ++j) add(GadgetRowFamily::NodeCut, cut(lay.u(q, j), {lay.u(q, j)}));
    for (int j = 1; j <= 10; ++j) add(GadgetRowFamily::GadgetCut, cut(lay.u(q, j), whole));
    for (int j = 1; j <= 9; j += 2) add(GadgetRowFamily::WavyPairCut, cut(lay.u(q, j), {lay.u(q, j), lay.u(q, j + 1)}));
    add(GadgetRowFamily::LeftBlock, cut(lay.u(q, 1), {lay.u(q, 1), lay.u(q, 2), lay.u(q, 3), lay.u(q, 4)}));
    add(GadgetRowFamily::RightBlock, cut(lay.u(q, 7), {lay.u(q, 7), lay.u(q, 8), lay.u(q, 9), lay.u(q, 10)}));
  }
  add(GadgetRowFamily::RootCut, cut(lay.s, {lay.r}));
  add(GadgetRowFamily::SourceZero, CutConstraint::nonneg_z(lay.pair_of(lay.s)));
  return out;
}

PcsfInstance random_instance(std::uint32_t seed, RandomSpec spec) {
  if (spec.nodes < 2) throw ValidationError("random instance needs at least 2 nodes");
  if (spec.edges < spec.nodes - 1) throw ValidationError("random instance needs at least nodes - 1 edges");
  if (spec.pairs < 0 || static_cast<long>(spec.pairs) * 2 > static_cast<long>(spec.nodes) * (spec.nodes - 1)) {
    throw ValidationError("more pairs than distinct node pairs");
  }
  std::mt19937 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Graph g(spec.nodes);
  std::vector<int> perm(static_cast<std::size_t>(spec.nodes));
  for (int i = 0; i < spec.nodes; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 1; i < spec.nodes; ++i) g.add_edge(perm[static_cast<std::size_t>(uni(0, i - 1))], perm[static_cast<std::size_t>(i)]);
  while (g.edge_count() < spec.edges) {
    int u = uni(0, spec.nodes - 1);
    int v = uni(0, spec.nodes - 1);
    if (u != v) g.add_edge(u, v);
  }
  PcsfInstance inst = make_instance(std::move(g));
  for (auto& c : inst.costs) c = frac(uni(1, 8), uni(1, 2));
  std::vector<std::pair<int, int>> used;
  int guard = 0;
  while (static_cast<int>(inst.pairs.size()) < spec.pairs && guard++ < 1000) {
    int s = uni(0, spec.nodes - 1);
    int t = uni(0, spec.nodes - 1);
    if (s == t) continue;
    std::pair<int, int> key{std::min(s, t), std::max(s, t)};
    if (std::find(used.begin(), used.end(), key) != used.end()) continue;
    used.push_back(key);
    inst.pairs.push_back({s, t});
    if (spec.allow_infinite && uni(0, 4) == 0) {
      inst.penalties.push_back(Penalty::infinite());
    } else {
      inst.penalties.emplace_back(frac(uni(1, 12), uni(1, 3)));
    }
  }
  return inst;
}

}  // namespace pcsf
