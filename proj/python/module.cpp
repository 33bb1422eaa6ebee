#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combspec/analysis.hpp"
#include "combspec/bounds.hpp"
#include "combspec/comb.hpp"
#include "combspec/fem.hpp"
#include "combspec/graph.hpp"
#include "combspec/io.hpp"
#include "combspec/secular.hpp"
#include "combspec/spectrum.hpp"

namespace py = pybind11;
using namespace combspec;

namespace {

py::dict bound_dict(const bounds::BoundReport& r) {
  py::dict d;
  d["k"] = r.k;
  d["alpha"] = r.alpha;
  d["value"] = r.value;
  d["side"] = r.side == bounds::Side::Lower ? "lower" : "upper";
  d["source"] = r.source;
  d["n"] = r.n;
  d["volume"] = r.volume;
  d["vacuous"] = r.vacuous;
  return d;
}

py::dict bracket_row_dict(const analysis::BracketRow& r) {
  py::dict d;
  d["k"] = r.k;
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  d["valid"] = r.valid;
  d["lower_solver"] = r.lower_solver;
  d["threshold"] = r.threshold;
  d["lower_certified"] = r.lower_certified;
  d["upper_certified"] = r.upper_certified;
  return d;
}

}  // namespace

PYBIND11_MODULE(_combspec, m) {
  m.doc() = "Spectra of diagonal comb graphs: builders, eigenvalue solvers, bounds.";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<Condition>(m, "Condition")
      .value("KIRCHHOFF_NEUMANN", Condition::KirchhoffNeumann)
      .value("DIRICHLET", Condition::Dirichlet);

  py::class_<MetricGraph>(m, "MetricGraph")
      .def(py::init([](const std::vector<std::pair<std::string, Condition>>& vertices,
                       const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
             std::vector<Vertex> vs;
             for (const auto& [id, c] : vertices) vs.push_back({id, c});
             std::vector<Edge> es;
             for (const auto& [a, b, l] : edges) es.push_back({a, b, l});
             return MetricGraph(std::move(vs), std::move(es));
           }),
           py::arg("vertices"), py::arg("edges"))
      .def_property_readonly("vertex_count", &MetricGraph::vertex_count)
      .def_property_readonly("edge_count", &MetricGraph::edge_count)
      .def_property_readonly("edges", [](const MetricGraph& g) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& e : g.edges()) out.emplace_back(e.a, e.b, e.length);
        return out;
      })
      .def_property_readonly("vertices", [](const MetricGraph& g) {
        std::vector<std::pair<std::string, Condition>> out;
        for (const auto& v : g.vertices()) out.emplace_back(v.id, v.condition);
        return out;
      })
      .def("volume", [](const MetricGraph& g) { return volume(g); })
      .def("diameter", [](const MetricGraph& g) { return diameter(g); })
      .def("pendant_counts", [](const MetricGraph& g) {
        const auto p = pendant_counts(g);
        return std::pair{p.dirichlet, p.neumann};
      })
      .def("is_tree", [](const MetricGraph& g) { return is_tree(g); })
      .def("fingerprint", &MetricGraph::fingerprint)
      .def("to_json", [](const MetricGraph& g) { return graph_to_json(g); })
      .def_static("from_json", &graph_from_json, py::arg("text"));

  m.def("build_truncated_comb", &build_truncated_comb, py::arg("alpha"), py::arg("k"),
        py::arg("cut") = Condition::Dirichlet);
  m.def("build_finite_part", &build_finite_part, py::arg("alpha"), py::arg("n"));
  m.def("build_tail_approximation", &build_tail_approximation, py::arg("alpha"), py::arg("n"),
        py::arg("depth"));
  m.def("comb_volume", &comb_volume, py::arg("alpha"));
  m.def("truncated_comb_volume", &truncated_comb_volume, py::arg("alpha"), py::arg("k"));

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("errors", &Spectrum::errors)
      .def_readonly("backend", &Spectrum::backend)
      .def_readonly("mesh_dofs", &Spectrum::mesh_dofs)
      .def("__len__", &Spectrum::size)
      .def("__getitem__", [](const Spectrum& s, std::size_t i) {
        if (i >= s.size()) throw py::index_error();
        return s[i];
      });

  m.def("solve",
        [](const MetricGraph& g, std::size_t count, double fem_rel_tol) {
          analysis::SolveOptions opt;
          opt.fem_rel_tol = fem_rel_tol;
          py::gil_scoped_release release;
          return analysis::solve(g, count, opt);
        },
        py::arg("graph"), py::arg("count"), py::arg("fem_rel_tol") = 1e-8);
  m.def("secular_eigenvalues",
        [](const MetricGraph& g, std::size_t count, double abs_tol) {
          const BackboneChain chain = graph_to_chain(g);
          py::gil_scoped_release release;
          return secular::eigenvalues_by_bisection(chain, count, abs_tol);
        },
        py::arg("graph"), py::arg("count"), py::arg("abs_tol") = 1e-10);
  m.def("fem_eigenvalues",
        [](const MetricGraph& g, std::size_t count, double rel_tol) {
          py::gil_scoped_release release;
          return fem::refine_until(g, count, rel_tol);
        },
        py::arg("graph"), py::arg("count"), py::arg("rel_tol") = 1e-8);

  m.def("bkkm_upper", &bounds::bkkm_upper, py::arg("k"), py::arg("volume"), py::arg("n_dirichlet"),
        py::arg("n_neumann"));
  m.def("bkkm_lower", &bounds::bkkm_lower, py::arg("k"), py::arg("volume"));
  m.def("tail_infimum_bound", &bounds::tail_infimum_bound, py::arg("alpha"), py::arg("n"));
  m.def("certified_upper_bound",
        [](double a, std::int64_t k, bool paper) {
          bounds::BoundOptions o;
          o.paper_constants = paper;
          return bound_dict(bounds::certified_upper_bound(a, k, o));
        },
        py::arg("alpha"), py::arg("k"), py::arg("paper_constants") = false);
  m.def("certified_lower_bound",
        [](double a, std::int64_t k, bool paper) {
          bounds::BoundOptions o;
          o.paper_constants = paper;
          return bound_dict(bounds::certified_lower_bound(a, k, o));
        },
        py::arg("alpha"), py::arg("k"), py::arg("paper_constants") = false);
  m.def("finite_volume_bounds",
        [](double a, std::int64_t k) {
          const auto b = bounds::finite_volume_bounds(a, k);
          return std::pair{b.lower, b.upper};
        },
        py::arg("alpha"), py::arg("k"));
  m.def("decoupled_eigenvalue", &bounds::decoupled_eigenvalue, py::arg("alpha"), py::arg("k"),
        py::arg("truncation"));

  m.def("bracket_spectrum",
        [](double a, std::size_t kmax, std::int64_t n, std::size_t threads) {
          analysis::SolveOptions opt;
          opt.threads = threads;
          analysis::BracketTable t;
          {
            py::gil_scoped_release release;
            t = analysis::bracket_spectrum(a, kmax, n, opt);
          }
          py::list rows;
          for (const auto& r : t.rows) rows.append(bracket_row_dict(r));
          return rows;
        },
        py::arg("alpha"), py::arg("kmax"), py::arg("n"), py::arg("threads") = 1);
  m.def("fit_exponent",
        [](const std::vector<double>& ks, const std::vector<double>& values, double lo, double hi) {
          const auto f = analysis::fit_exponent(ks, values, lo, hi);
          return std::tuple{f.slope, f.intercept, f.r2};
        },
        py::arg("ks"), py::arg("values"), py::arg("k_lo"), py::arg("k_hi"));
  m.def("verify",
        [](std::size_t threads) {
          analysis::VerifyOptions o;
          o.threads = threads;
          std::vector<analysis::CheckResult> r;
          {
            py::gil_scoped_release release;
            r = analysis::verify_suite(o);
          }
          py::list out;
          for (const auto& c : r) out.append(py::make_tuple(c.name, c.passed, c.detail));
          return out;
        },
        py::arg("threads") = 1);
}
