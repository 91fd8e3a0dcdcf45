// Python module pcsf._core. Rationals cross the boundary as "a/b" strings;
// the pcsf package turns them into fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pcsf/cut_lp.hpp"
#include "pcsf/decomposition.hpp"
#include "pcsf/error.hpp"
#include "pcsf/exact_solver.hpp"
#include "pcsf/generators.hpp"
#include "pcsf/rounding.hpp"

namespace py = pybind11;
using namespace pcsf;

namespace {

std::vector<std::string> strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

std::vector<Rational> rationals(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(parse_rational(s));
  return out;
}

py::dict solution_dict(const IntegralSolution& s) {
  py::dict d;
  d["objective"] = to_string(s.objective());
  d["cost"] = to_string(s.cost);
  d["penalty"] = to_string(s.penalty);
  d["forest"] = s.forest;
  d["disconnected"] = s.disconnected;
  return d;
}

PointMode point_mode(const std::string& m) {
  if (m == "gap") return PointMode::Gap;
  if (m == "lmp") return PointMode::Lmp;
  throw ValidationError("mode must be gap or lmp");
}

DominanceMode dominance_mode(const std::string& m) {
  if (m == "gap") return DominanceMode::Gap;
  if (m == "lmp") return DominanceMode::Lmp;
  throw ValidationError("mode must be gap or lmp");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact prize-collecting Steiner forest LP tools";

  auto base_error = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base_error);
  py::register_exception<ScaleCapError>(m, "ScaleCapError", base_error);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base_error);

  py::class_<PcsfInstance>(m, "Instance")
      .def_static(
          "from_text",
          [](const std::string& text) {
            std::istringstream in(text);
            return parse_instance_text(in);
          },
          py::arg("text"))
      .def_static("from_json", &parse_instance_json, py::arg("text"))
      .def_static("read", [](const std::string& path) { return read_instance(path); }, py::arg("path"))
      .def("to_text",
           [](const PcsfInstance& inst) {
             std::ostringstream out;
             write_instance_text(inst, out);
             return out.str();
           })
      .def("to_json", &instance_to_json)
      .def("write", [](const PcsfInstance& inst, const std::string& path) { write_instance(inst, path); }, py::arg("path"))
      .def_property_readonly("node_count", [](const PcsfInstance& i) { return i.graph.node_count(); })
      .def_property_readonly("edge_count", [](const PcsfInstance& i) { return i.graph.edge_count(); })
      .def_property_readonly("pair_count", &PcsfInstance::pair_count)
      .def_property_readonly("costs", [](const PcsfInstance& i) { return strings(i.costs); })
      .def_property_readonly("penalties",
                             [](const PcsfInstance& i) {
                               std::vector<std::string> out;
                               for (const auto& p : i.penalties) out.push_back(to_string(p));
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const PcsfInstance& i) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (EdgeId e = 0; e < i.graph.edge_count(); ++e) {
                                 out.emplace_back(i.name(i.graph.edge(e).u), i.name(i.graph.edge(e).v));
                               }
                               return out;
                             })
      .def_property_readonly("pairs", [](const PcsfInstance& i) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : i.pairs) out.emplace_back(i.name(p.s), i.name(p.t));
        return out;
      });

  py::class_<FracSolution>(m, "Point")
      .def(py::init([](const std::vector<std::string>& x, const std::vector<std::string>& z) {
             return FracSolution{rationals(x), rationals(z)};
           }),
           py::arg("x"), py::arg("z"))
      .def_property_readonly("x", [](const FracSolution& p) { return strings(p.x); })
      .def_property_readonly("z", [](const FracSolution& p) { return strings(p.z); });

  py::class_<ForestDistribution>(m, "Distribution")
      .def_static(
          "from_text",
          [](const std::string& text) {
            std::istringstream in(text);
            return parse_distribution(in);
          },
          py::arg("text"))
      .def("to_text",
           [](const ForestDistribution& d) {
             std::ostringstream out;
             write_distribution(d, out);
             return out.str();
           })
      .def_property_readonly("support", [](const ForestDistribution& d) {
        std::vector<std::pair<std::string, EdgeSet>> out;
        for (const auto& wf : d.support) out.emplace_back(to_string(wf.weight), wf.forest);
        return out;
      });

  // generation
  m.def(
      "layered",
      [](const std::string& base, int m_sub, int k, const std::string& mode) {
        auto lc = build_layered(make_base(base), m_sub, k);
        return std::make_pair(layered_instance(lc), canonical_point(lc, point_mode(mode)));
      },
      py::arg("base") = "k4", py::arg("m") = 4, py::arg("k") = 0, py::arg("mode") = "gap",
      "Layered instance and its canonical point.");
  m.def(
      "gadget",
      [](int k) {
        auto g = pcst_gadget_instance(k);
        return std::make_pair(g.instance, g.point);
      },
      py::arg("k"), "Tree gadget instance and its extreme point.");
  m.def(
      "random_instance",
      [](std::uint32_t seed, int nodes, int edges, int pairs, bool infinite) {
        return random_instance(seed, RandomSpec{nodes, edges, pairs, infinite});
      },
      py::arg("seed"), py::arg("nodes") = 6, py::arg("edges") = 9, py::arg("pairs") = 3, py::arg("infinite") = false);

  // LP
  m.def(
      "solve_lp",
      [](const PcsfInstance& inst) {
        auto r = solve_lp(inst);
        return std::make_pair(to_string(r.value), r.solution);
      },
      py::arg("instance"), "Optimal value and point of the cut LP.");
  m.def(
      "check_feasible",
      [](const PcsfInstance& inst, const FracSolution& p) {
        auto r = check_feasible(inst, p);
        return py::make_tuple(r.feasible, r.violated ? py::cast(r.violated->describe(inst)) : py::none());
      },
      py::arg("instance"), py::arg("point"));
  m.def(
      "lp_objective", [](const PcsfInstance& inst, const FracSolution& p) { return to_string(lp_objective(inst, p)); },
      py::arg("instance"), py::arg("point"));
  m.def(
      "verify_gadget_vertex",
      [](int k) {
        auto g = pcst_gadget_instance(k);
        auto fam = gadget_tight_family(g);
        auto r = verify_vertex(g.instance, g.point, fam.constraints);
        py::dict d;
        d["feasible"] = r.is_feasible;
        d["all_tight"] = r.all_tight;
        d["unique"] = r.unique;
        d["rank"] = r.rank;
        d["dimension"] = r.dimension;
        d["all_x_positive"] = r.all_x_positive;
        d["max_coord"] = to_string(r.max_coordinate);
        return d;
      },
      py::arg("k"), "Extreme-point certificate of the gadget point against its tight family.");

  // exact solver
  m.def(
      "solve_ip", [](const PcsfInstance& inst) { return solution_dict(solve_ip(inst)); }, py::arg("instance"));
  m.def(
      "gap",
      [](const PcsfInstance& inst) {
        auto g = gap(inst);
        return py::make_tuple(to_string(g.lp), to_string(g.ip), to_string(g.ratio));
      },
      py::arg("instance"), "(lp, ip, ip / lp)");

  // rounding
  auto rounding = [](const RoundingResult& r) {
    py::dict d = solution_dict(r.solution);
    d["lp_value"] = to_string(r.lp_value);
    d["factor"] = to_string(r.factor);
    return d;
  };
  m.def(
      "threshold_round",
      [rounding](const PcsfInstance& inst, const FracSolution& p, const std::string& theta) {
        return rounding(threshold_round(inst, p, parse_rational(theta)));
      },
      py::arg("instance"), py::arg("point"), py::arg("theta") = "1/3");
  m.def(
      "two_value_round",
      [rounding](const PcsfInstance& inst, const FracSolution& p, const std::string& prob) {
        return rounding(two_value_round(inst, p, parse_rational(prob)));
      },
      py::arg("instance"), py::arg("point"), py::arg("p") = "3/4");
  m.def(
      "mu_bound",
      [](const std::string& gamma) {
        auto b = mu_bound(parse_rational(gamma));
        return std::make_pair(to_string(b.mu), to_string(b.p_star));
      },
      py::arg("gamma"), "(mu, p*) for a two-valued point with nonzero z value gamma.");

  // decomposition
  m.def(
      "min_alpha",
      [](const PcsfInstance& inst, const FracSolution& p) {
        auto r = min_alpha(inst, p);
        return std::make_pair(to_string(r.value), r.dist);
      },
      py::arg("instance"), py::arg("point"), "alpha* and a distribution achieving it.");
  m.def(
      "min_beta",
      [](const PcsfInstance& inst, const FracSolution& p) {
        auto r = min_beta(inst, p);
        return std::make_pair(to_string(r.value), r.dist);
      },
      py::arg("instance"), py::arg("point"), "beta* and a distribution achieving it.");
  m.def(
      "explicit_gap_distribution",
      [](int m_sub, int k, const std::string& alpha) {
        return explicit_gap_distribution(build_layered(make_base("k4"), m_sub, k), parse_rational(alpha));
      },
      py::arg("m") = 4, py::arg("k") = 1, py::arg("alpha") = "9/4", "Explicit distribution on the K4 construction.");
  m.def(
      "verify_distribution",
      [](const PcsfInstance& inst, const FracSolution& p, const ForestDistribution& dist, const std::string& scale,
         const std::string& mode) {
        auto r = verify_distribution(inst, p, dist, parse_rational(scale), dominance_mode(mode));
        py::dict d;
        d["passes"] = r.passes;
        d["max_marginal"] = to_string(r.max_marginal);
        d["min_pair_prob"] = to_string(r.min_pair_prob);
        d["edge_violations"] = r.edge_violations;
        d["pair_violations"] = r.pair_violations;
        return d;
      },
      py::arg("instance"), py::arg("point"), py::arg("distribution"), py::arg("scale"), py::arg("mode") = "gap");

  // closed forms
  m.def(
      "bound_alpha", [](long n, int k) { return to_string(bound_alpha(n, k)); }, py::arg("n"), py::arg("k"));
  m.def(
      "bound_beta", [](int l, long n, int k) { return to_string(bound_beta(l, n, k)); }, py::arg("l"), py::arg("n"),
      py::arg("k"));
  m.def(
      "bound_beta_asymptote", [](int l) { return to_string(bound_beta_asymptote(l)); }, py::arg("l"));
}
