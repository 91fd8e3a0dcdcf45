#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcsf/graph.hpp"
#include "pcsf/rational.hpp"

namespace pcsf {

using PairId = int;

struct TerminalPair {
  NodeId s;
  NodeId t;
};

/// Prize-collecting Steiner forest instance: graph, edge costs, terminal pairs
/// and per-pair penalties (possibly infinite).
struct PcsfInstance {
  Graph graph;
  std::vector<std::string> node_names;
  Capacities costs;
  std::vector<TerminalPair> pairs;
  std::vector<Penalty> penalties;

  int pair_count() const { return static_cast<int>(pairs.size()); }
  const std::string& name(NodeId v) const { return node_names[static_cast<std::size_t>(v)]; }

  /// Throws ValidationError on negative costs, bad pairs or duplicates.
  void validate() const;
};

/// Assigns default names "v0", "v1", ... when the instance has none.
void ensure_node_names(PcsfInstance& inst);

/// Builds an instance with unit costs and no pairs.
PcsfInstance make_instance(Graph g);

bool structurally_equal(const PcsfInstance& a, const PcsfInstance& b);

/// Fractional point (x, z) of the cut relaxation, x by edge id, z by pair id.
struct FracSolution {
  std::vector<Rational> x;
  std::vector<Rational> z;
};

/// c.x + pi.z (infinite-penalty pairs contribute nothing; their z is 0).
Rational lp_objective(const PcsfInstance& inst, const FracSolution& point);

/// Throws ValidationError if dimensions or signs are off.
void check_dimensions(const PcsfInstance& inst, const FracSolution& point);

// Text format: "pcsf 1" header, "edge <u> <v> <cost>", "pair <s> <t> <penalty>".
PcsfInstance parse_instance_text(std::istream& in);
void write_instance_text(const PcsfInstance& inst, std::ostream& out);

// JSON mirror: {version, edges:[{u,v,cost}], pairs:[{s,t,penalty}]}.
PcsfInstance parse_instance_json(const std::string& text);
std::string instance_to_json(const PcsfInstance& inst);

/// Dispatches on extension: ".json" uses the JSON mirror, anything else text.
PcsfInstance read_instance(const std::filesystem::path& path);
void write_instance(const PcsfInstance& inst, const std::filesystem::path& path);

// Point format: "x <edge-id> <value>", "z <pair-id> <value>"; unlisted entries are 0.
FracSolution parse_solution_text(std::istream& in, int edge_count, int pair_count);
void write_solution_text(const FracSolution& point, std::ostream& out);
FracSolution read_solution(const std::filesystem::path& path, int edge_count, int pair_count);
void write_solution(const FracSolution& point, const std::filesystem::path& path);

}  // namespace pcsf
