#include "pcsf/constraint.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <sstream>

#include "pcsf/error.hpp"

namespace pcsf {

CutConstraint CutConstraint::cut(const PcsfInstance& inst, PairId i, NodeSet side) {
  if (i < 0 || i >= inst.pair_count()) throw ValidationError("cut references unknown pair");
  std::sort(side.begin(), side.end());
  side.erase(std::unique(side.begin(), side.end()), side.end());
  const auto& [s, t] = inst.pairs[static_cast<std::size_t>(i)];
  const bool has_s = std::binary_search(side.begin(), side.end(), s);
  const bool has_t = std::binary_search(side.begin(), side.end(), t);
  if (has_s == has_t) throw ValidationError("cut side does not separate pair " + std::to_string(i));
  if (!has_s) {
    NodeSet complement;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      if (!std::binary_search(side.begin(), side.end(), v)) complement.push_back(v);
    }
    side = std::move(complement);
  }
  CutConstraint c;
  c.kind = Kind::Cut;
  c.pair = i;
  c.side = std::move(side);
  return c;
}

CutConstraint CutConstraint::nonneg_x(EdgeId e) {
  CutConstraint c;
  c.kind = Kind::NonnegX;
  c.edge = e;
  return c;
}

CutConstraint CutConstraint::nonneg_z(PairId i) {
  CutConstraint c;
  c.kind = Kind::NonnegZ;
  c.pair = i;
  return c;
}

Rational CutConstraint::lhs(const PcsfInstance& inst, const FracSolution& point) const {
  switch (kind) {
    case Kind::NonnegX:
      return point.x[static_cast<std::size_t>(edge)];
    case Kind::NonnegZ:
      return point.z[static_cast<std::size_t>(pair)];
    case Kind::Cut:
      break;
  }
  std::vector<char> in(static_cast<std::size_t>(inst.graph.node_count()), 0);
  for (NodeId v : side) in[static_cast<std::size_t>(v)] = 1;
  Rational total = point.z[static_cast<std::size_t>(pair)];
  for (EdgeId e : cut_edges(inst.graph, in)) total += point.x[static_cast<std::size_t>(e)];
  return total;
}

std::string CutConstraint::describe(const PcsfInstance& inst) const {
  std::ostringstream out;
  switch (kind) {
    case Kind::NonnegX:
      out << "x[" << edge << "] >= 0";
      break;
    case Kind::NonnegZ:
      out << "z[" << pair << "] >= 0";
      break;
    case Kind::Cut: {
      const bool small = static_cast<int>(side.size()) * 2 <= inst.graph.node_count();
      out << "x(delta(" << (small ? "" : "V \\ ") << "{";
      bool first = true;
      std::vector<char> in(static_cast<std::size_t>(inst.graph.node_count()), 0);
      for (NodeId v : side) in[static_cast<std::size_t>(v)] = 1;
      for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
        if ((in[static_cast<std::size_t>(v)] != 0) != small) continue;
        out << (first ? "" : ",") << (inst.node_names.empty() ? std::to_string(v) : inst.name(v));
        first = false;
      }
      out << "})) + z[" << pair << "] >= 1";
      break;
    }
  }
  return out.str();
}

namespace {

int parse_index(const std::string& text, int limit, const char* what) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 0 || v >= limit) throw ValidationError(std::string("bad ") + what + " '" + text + "'");
  return v;
}

}  // namespace

std::vector<CutConstraint> parse_constraint_family(std::istream& in, const PcsfInstance& inst) {
  std::unordered_map<std::string, NodeId> by_name;
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
    by_name[inst.node_names.empty() ? std::to_string(v) : inst.name(v)] = v;
  }
  std::vector<CutConstraint> family;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "x" && tok.size() == 2) {
        family.push_back(CutConstraint::nonneg_x(parse_index(tok[1], inst.graph.edge_count(), "edge")));
      } else if (tok[0] == "z" && tok.size() == 2) {
        family.push_back(CutConstraint::nonneg_z(parse_index(tok[1], inst.pair_count(), "pair")));
      } else if (tok[0] == "cut" && tok.size() >= 3) {
        NodeSet side;
        for (std::size_t i = 2; i < tok.size(); ++i) {
          auto it = by_name.find(tok[i]);
          if (it == by_name.end()) throw ValidationError("unknown node '" + tok[i] + "'");
          side.push_back(it->second);
        }
        family.push_back(CutConstraint::cut(inst, parse_index(tok[1], inst.pair_count(), "pair"), std::move(side)));
      } else {
        throw ValidationError("unrecognized line");
      }
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return family;
}

void write_constraint_family(const PcsfInstance& inst, const std::vector<CutConstraint>& family, std::ostream& out) {
  for (const auto& c : family) {
    switch (c.kind) {
      case CutConstraint::Kind::NonnegX:
        out << "x " << c.edge << '\n';
        break;
      case CutConstraint::Kind::NonnegZ:
        out << "z " << c.pair << '\n';
        break;
      case CutConstraint::Kind::Cut:
        out << "cut " << c.pair;
        for (NodeId v : c.side) out << ' ' << (inst.node_names.empty() ? std::to_string(v) : inst.name(v));
        out << '\n';
        break;
    }
  }
}

std::vector<CutConstraint> read_constraint_family(const std::filesystem::path& path, const PcsfInstance& inst) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_constraint_family(in, inst);
}

}  // namespace pcsf
