#include "pcsf/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "pcsf/error.hpp"

namespace pcsf {

void PcsfInstance::validate() const {
  if (static_cast<int>(costs.size()) != graph.edge_count()) {
    throw ValidationError("cost vector does not match edge count");
  }
  for (const auto& c : costs) {
    if (sgn(c) < 0) throw ValidationError("negative edge cost");
  }
  if (penalties.size() != pairs.size()) throw ValidationError("penalty count does not match pairs");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [s, t] = pairs[i];
    if (!graph.valid_node(s) || !graph.valid_node(t)) throw ValidationError("pair endpoint out of range");
    if (s == t) throw ValidationError("pair " + std::to_string(i) + " has s == t");
    if (!seen.insert(std::minmax(s, t)).second) {
      throw ValidationError("duplicate pair " + std::to_string(i));
    }
    if (!penalties[i].is_infinite() && sgn(penalties[i].value()) < 0) {
      throw ValidationError("negative penalty on pair " + std::to_string(i));
    }
  }
  if (!node_names.empty() && static_cast<int>(node_names.size()) != graph.node_count()) {
    throw ValidationError("node name count does not match graph");
  }
}

void ensure_node_names(PcsfInstance& inst) {
  if (static_cast<int>(inst.node_names.size()) == inst.graph.node_count()) return;
  inst.node_names.clear();
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) inst.node_names.push_back("v" + std::to_string(v));
}

PcsfInstance make_instance(Graph g) {
  PcsfInstance inst;
  inst.costs.assign(static_cast<std::size_t>(g.edge_count()), Rational(1));
  inst.graph = std::move(g);
  ensure_node_names(inst);
  return inst;
}

bool structurally_equal(const PcsfInstance& a, const PcsfInstance& b) {
  if (a.graph.node_count() != b.graph.node_count() || a.graph.edge_count() != b.graph.edge_count() ||
      a.pairs.size() != b.pairs.size() || a.node_names != b.node_names || a.costs != b.costs) {
    return false;
  }
  for (EdgeId e = 0; e < a.graph.edge_count(); ++e) {
    if (a.graph.edge(e).u != b.graph.edge(e).u || a.graph.edge(e).v != b.graph.edge(e).v) return false;
  }
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].s != b.pairs[i].s || a.pairs[i].t != b.pairs[i].t) return false;
    if (!(a.penalties[i] == b.penalties[i])) return false;
  }
  return true;
}

Rational lp_objective(const PcsfInstance& inst, const FracSolution& point) {
  Rational total(0);
  for (std::size_t e = 0; e < inst.costs.size(); ++e) total += inst.costs[e] * point.x[e];
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    if (!inst.penalties[i].is_infinite()) total += inst.penalties[i].value() * point.z[i];
  }
  return total;
}

void check_dimensions(const PcsfInstance& inst, const FracSolution& point) {
  if (static_cast<int>(point.x.size()) != inst.graph.edge_count() ||
      static_cast<int>(point.z.size()) != inst.pair_count()) {
    throw ValidationError("point dimensions do not match instance");
  }
}

namespace {

class NameTable {
public:
  explicit NameTable(PcsfInstance& inst) : inst_(inst) {}
  NodeId get(const std::string& name) {
    auto [it, fresh] = ids_.try_emplace(name, inst_.graph.node_count());
    if (fresh) {
      inst_.graph.add_node();
      inst_.node_names.push_back(name);
    }
    return it->second;
  }

private:
  PcsfInstance& inst_;
  std::unordered_map<std::string, NodeId> ids_;
};

[[noreturn]] void malformed(int line, const std::string& why) {
  throw ValidationError("line " + std::to_string(line) + ": " + why);
}

}  // namespace

PcsfInstance parse_instance_text(std::istream& in) {
  PcsfInstance inst;
  NameTable names(inst);
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "pcsf" || tok[1] != "1") malformed(lineno, "expected header 'pcsf 1'");
      header = true;
      continue;
    }
    try {
      if (tok[0] == "edge" && tok.size() == 4) {
        Rational cost = parse_rational(tok[3]);
        if (sgn(cost) < 0) malformed(lineno, "negative cost");
        NodeId u = names.get(tok[1]);
        NodeId v = names.get(tok[2]);
        inst.graph.add_edge(u, v);
        inst.costs.push_back(cost);
      } else if (tok[0] == "pair" && tok.size() == 4) {
        Penalty p = parse_penalty(tok[3]);
        if (!p.is_infinite() && sgn(p.value()) < 0) malformed(lineno, "negative penalty");
        NodeId s = names.get(tok[1]);
        NodeId t = names.get(tok[2]);
        inst.pairs.push_back({s, t});
        inst.penalties.push_back(p);
      } else {
        malformed(lineno, "unrecognized line");
      }
    } catch (const ValidationError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      malformed(lineno, e.what());
    }
  }
  if (!header) throw ValidationError("missing 'pcsf 1' header");
  inst.validate();
  return inst;
}

void write_instance_text(const PcsfInstance& inst, std::ostream& out) {
  out << "pcsf 1\n";
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    const auto& ed = inst.graph.edge(e);
    out << "edge " << inst.name(ed.u) << ' ' << inst.name(ed.v) << ' '
        << to_string(inst.costs[static_cast<std::size_t>(e)]) << '\n';
  }
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    out << "pair " << inst.name(inst.pairs[i].s) << ' ' << inst.name(inst.pairs[i].t) << ' '
        << to_string(inst.penalties[i]) << '\n';
  }
}

namespace {

std::string json_number_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) {
    // Floating JSON numbers are taken at their shortest decimal spelling.
    return j.dump();
  }
  throw ValidationError("expected number or string, got " + j.dump());
}

}  // namespace

PcsfInstance parse_instance_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("json: ") + e.what());
  }
  PcsfInstance inst;
  NameTable names(inst);
  try {
    if (doc.value("version", 0) != 1) throw ValidationError("json: unsupported version");
    for (const auto& e : doc.at("edges")) {
      Rational cost = parse_rational(json_number_text(e.at("cost")));
      if (sgn(cost) < 0) throw ValidationError("json: negative cost");
      NodeId u = names.get(e.at("u").get<std::string>());
      NodeId v = names.get(e.at("v").get<std::string>());
      inst.graph.add_edge(u, v);
      inst.costs.push_back(cost);
    }
    for (const auto& p : doc.at("pairs")) {
      Penalty pen = parse_penalty(json_number_text(p.at("penalty")));
      NodeId s = names.get(p.at("s").get<std::string>());
      NodeId t = names.get(p.at("t").get<std::string>());
      inst.pairs.push_back({s, t});
      inst.penalties.push_back(pen);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("json: ") + e.what());
  }
  inst.validate();
  return inst;
}

std::string instance_to_json(const PcsfInstance& inst) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["edges"] = nlohmann::json::array();
  for (EdgeId e = 0; e < inst.graph.edge_count(); ++e) {
    const auto& ed = inst.graph.edge(e);
    doc["edges"].push_back({{"u", inst.name(ed.u)},
                            {"v", inst.name(ed.v)},
                            {"cost", to_string(inst.costs[static_cast<std::size_t>(e)])}});
  }
  doc["pairs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    doc["pairs"].push_back({{"s", inst.name(inst.pairs[i].s)},
                            {"t", inst.name(inst.pairs[i].t)},
                            {"penalty", to_string(inst.penalties[i])}});
  }
  return doc.dump(2);
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

PcsfInstance read_instance(const std::filesystem::path& path) {
  std::string text = slurp(path);
  if (path.extension() == ".json") return parse_instance_json(text);
  std::istringstream in(text);
  return parse_instance_text(in);
}

void write_instance(const PcsfInstance& inst, const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    spill(path, instance_to_json(inst) + "\n");
    return;
  }
  std::ostringstream out;
  write_instance_text(inst, out);
  spill(path, out.str());
}

FracSolution parse_solution_text(std::istream& in, int edge_count, int pair_count) {
  FracSolution point;
  point.x.assign(static_cast<std::size_t>(edge_count), Rational(0));
  point.z.assign(static_cast<std::size_t>(pair_count), Rational(0));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    std::string id_text;
    std::string value;
    if (!(ls >> kind)) continue;
    if (!(ls >> id_text >> value)) malformed(lineno, "expected '<x|z> <id> <value>'");
    int id = 0;
    try {
      id = std::stoi(id_text);
    } catch (const std::exception&) {
      malformed(lineno, "bad id");
    }
    Rational v = parse_rational(value);
    if (sgn(v) < 0) malformed(lineno, "negative value");
    if (kind == "x" && id >= 0 && id < edge_count) {
      point.x[static_cast<std::size_t>(id)] = v;
    } else if (kind == "z" && id >= 0 && id < pair_count) {
      point.z[static_cast<std::size_t>(id)] = v;
    } else {
      malformed(lineno, "unknown entry");
    }
  }
  return point;
}

void write_solution_text(const FracSolution& point, std::ostream& out) {
  for (std::size_t e = 0; e < point.x.size(); ++e) out << "x " << e << ' ' << to_string(point.x[e]) << '\n';
  for (std::size_t i = 0; i < point.z.size(); ++i) out << "z " << i << ' ' << to_string(point.z[i]) << '\n';
}

FracSolution read_solution(const std::filesystem::path& path, int edge_count, int pair_count) {
  std::istringstream in(slurp(path));
  return parse_solution_text(in, edge_count, pair_count);
}

void write_solution(const FracSolution& point, const std::filesystem::path& path) {
  std::ostringstream out;
  write_solution_text(point, out);
  spill(path, out.str());
}

}  // namespace pcsf
