#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "layersolve/analysis.hpp"
#include "layersolve/config.hpp"
#include "layersolve/discretization.hpp"
#include "layersolve/mesh.hpp"
#include "layersolve/problem.hpp"
#include "layersolve/solver.hpp"
#include "layersolve/tridiagonal.hpp"

namespace py = pybind11;
using namespace layersolve;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
  py::array_t<double> out(values.size());
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

LStrategy parse_L(const std::string& s) {
  if (s == "logN") return LStrategy::LogN;
  if (s == "lambertW") return LStrategy::LambertW;
  throw py::value_error("L_strategy must be 'logN' or 'lambertW'");
}

ErrorNorm parse_norm(const std::string& s) {
  if (s == "space-time") return ErrorNorm::SpaceTime;
  if (s == "final-time") return ErrorNorm::FinalTime;
  throw py::value_error("norm must be 'space-time' or 'final-time'");
}

SpatialScheme parse_spatial(const std::string& s) {
  if (s == "hybrid") return SpatialScheme::Hybrid;
  if (s == "upwind") return SpatialScheme::Upwind;
  if (s == "central") return SpatialScheme::Central;
  throw py::value_error("scheme must be 'hybrid', 'upwind' or 'central'");
}

MeshOptions mesh_options(std::optional<double> tau0, std::optional<double> sigma,
                         std::optional<std::string> L_strategy, const std::string& refine) {
  MeshOptions o;
  o.tau0 = tau0;
  o.sigma = sigma;
  if (L_strategy) o.L_strategy = parse_L(*L_strategy);
  if (refine == "regenerate") o.refine = Refinement::Regenerate;
  else if (refine != "bisect") throw py::value_error("refine must be 'bisect' or 'regenerate'");
  return o;
}

py::object optional_value(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

}  // namespace

PYBIND11_MODULE(_layersolve, m) {
  m.doc() = "Solver for singularly perturbed parabolic turning-point problems";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PivotError>(m, "PivotError", PyExc_ArithmeticError);

  py::class_<TurningPointProblem>(m, "Problem")
      .def_readonly("name", &TurningPointProblem::name)
      .def_readonly("x_lo", &TurningPointProblem::x_lo)
      .def_readonly("x_hi", &TurningPointProblem::x_hi)
      .def_readonly("t_final", &TurningPointProblem::t_final)
      .def_readonly("x_c", &TurningPointProblem::x_c)
      .def_readonly("p", &TurningPointProblem::p)
      .def_readonly("alpha0", &TurningPointProblem::alpha0)
      .def_readonly("beta", &TurningPointProblem::beta)
      .def_readonly("gamma", &TurningPointProblem::gamma)
      .def_readonly("alpha", &TurningPointProblem::alpha)
      .def("a", [](const TurningPointProblem& p, double x, double t) { return p.a(x, t); })
      .def("b", [](const TurningPointProblem& p, double x, double t) { return p.b(x, t); })
      .def("d", [](const TurningPointProblem& p, double x, double t) { return p.d(x, t); })
      .def("f", [](const TurningPointProblem& p, double x, double t) { return p.f(x, t); })
      .def("with_source",
           [](TurningPointProblem p, std::function<double(double, double)> f) {
             p.f = std::move(f);
             p.autonomous = false;
             return p;
           },
           py::arg("f"), "Copy with the source term replaced by a Python callable f(x, t).")
      .def("__repr__", [](const TurningPointProblem& p) {
        std::ostringstream s;
        s << "<Problem " << p.name << " on [" << p.x_lo << ", " << p.x_hi << "], p=" << p.p << ">";
        return s.str();
      });

  m.def("problem_1", &builtin_problem_1);
  m.def("problem_2", &builtin_problem_2, py::arg("p") = 1);
  m.def("validate", [](const TurningPointProblem& p, int sx, int st) { return validate(p, sx, st).violations; },
        py::arg("problem"), py::arg("samples_x") = 64, py::arg("samples_t") = 16,
        "List of violated assumptions on a sample grid; empty when none were found.");

  py::class_<SpatialMesh>(m, "Mesh")
      .def_property_readonly("nodes", [](const SpatialMesh& mesh) { return to_array(mesh.nodes()); })
      .def_property_readonly("N", &SpatialMesh::intervals)
      .def_property_readonly("tau", &SpatialMesh::tau)
      .def_property_readonly("L", &SpatialMesh::L_value)
      .def_property_readonly("kind", [](const SpatialMesh& mesh) { return std::string(to_string(mesh.kind())); })
      .def("region", [](const SpatialMesh& mesh, int i) { return std::string(to_string(mesh.region_of(i))); })
      .def("bisect", [](const SpatialMesh& mesh) { return bisect(mesh); });

  m.def("compute_L", [](int N, const std::string& s) { return compute_L(N, parse_L(s)); }, py::arg("N"),
        py::arg("strategy") = "logN");
  m.def("generalized_shishkin",
        [](int N, double eps, double tau0, const TurningPointProblem& p, const std::string& s) {
          return generalized_shishkin(N, eps, tau0, p, parse_L(s));
        },
        py::arg("N"), py::arg("eps"), py::arg("tau0"), py::arg("problem"), py::arg("L_strategy") = "logN");
  m.def("standard_shishkin", &standard_shishkin, py::arg("N"), py::arg("eps"), py::arg("sigma"), py::arg("problem"));
  m.def("uniform_mesh", &uniform_mesh, py::arg("N"), py::arg("problem"));

  py::class_<TridiagonalSystem>(m, "TridiagonalSystem")
      .def_property_readonly("lower", [](const TridiagonalSystem& s) { return to_array(s.lower); })
      .def_property_readonly("diag", [](const TridiagonalSystem& s) { return to_array(s.diag); })
      .def_property_readonly("upper", [](const TridiagonalSystem& s) { return to_array(s.upper); })
      .def_property_readonly("rhs", [](const TridiagonalSystem& s) { return to_array(s.rhs); })
      .def_property_readonly("tags", [](const TridiagonalSystem& s) {
        std::vector<std::string> out;
        for (SchemeTag t : s.tags) out.emplace_back(to_string(t));
        return out;
      });

  m.def("assemble",
        [](const std::string& scheme, const TurningPointProblem& p, const SpatialMesh& mesh, double eps, double dt,
           std::vector<double> U_prev, double t_n) { return assemble(parse_spatial(scheme), p, mesh, eps, dt, U_prev, t_n); },
        py::arg("scheme"), py::arg("problem"), py::arg("mesh"), py::arg("eps"), py::arg("dt"), py::arg("U_prev"),
        py::arg("t_n"));
  m.def("is_m_matrix", [](const TridiagonalSystem& s) { return is_m_matrix(s).ok; });
  m.def("thomas_solve",
        [](std::vector<double> lower, std::vector<double> diag, std::vector<double> upper, std::vector<double> rhs) {
          TridiagonalSystem s;
          s.lower = std::move(lower);
          s.diag = std::move(diag);
          s.upper = std::move(upper);
          s.rhs = std::move(rhs);
          if (s.lower.size() != s.diag.size() || s.upper.size() != s.diag.size() || s.rhs.size() != s.diag.size())
            throw py::value_error("thomas_solve: all four vectors need the same length");
          s.tags.assign(s.diag.size(), SchemeTag::Central);
          const auto x = thomas_solve(s);
          return to_array(x);
        },
        py::arg("lower"), py::arg("diag"), py::arg("upper"), py::arg("rhs"));

  py::class_<SolutionGrid>(m, "SolutionGrid")
      .def_property_readonly("x", [](const SolutionGrid& g) { return to_array(g.space_mesh().nodes()); })
      .def_property_readonly("mesh", &SolutionGrid::space_mesh)
      .def_property_readonly("levels", &SolutionGrid::retained_levels)
      .def_property_readonly("t", [](const SolutionGrid& g) {
        std::vector<double> t;
        for (int n : g.retained_levels()) t.push_back(g.time_mesh().t(n));
        return to_array(t);
      })
      .def_property_readonly("max_abs", &SolutionGrid::max_abs)
      .def_property_readonly("min_value", &SolutionGrid::min_value)
      .def("level", [](const SolutionGrid& g, int n) { return to_array(g.level(n)); })
      .def("values", [](const SolutionGrid& g) {
        const auto levels = g.retained_levels();
        const std::size_t cols = g.space_mesh().nodes().size();
        py::array_t<double> out({levels.size(), cols});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t r = 0; r < levels.size(); ++r) {
          const auto row = g.level(levels[r]);
          for (std::size_t i = 0; i < cols; ++i) view(r, i) = row[i];
        }
        return out;
      }, "Retained levels as a (levels, N+1) array.");

  m.def("solve",
        [](const TurningPointProblem& p, const std::string& scheme, int N, int M, double eps,
           std::optional<double> tau0, std::optional<double> sigma, std::optional<std::string> L_strategy) {
          SolveOptions o;
          o.mesh = mesh_options(tau0, sigma, L_strategy, "bisect");
          py::gil_scoped_release release;
          return solve(p, parse_scheme(scheme), N, M, eps, o);
        },
        py::arg("problem"), py::arg("scheme"), py::arg("N"), py::arg("M"), py::arg("eps"), py::arg("tau0") = py::none(),
        py::arg("sigma") = py::none(), py::arg("L_strategy") = py::none());

  m.def("double_mesh_error",
        [](const TurningPointProblem& p, const std::string& scheme, int N, int M, double eps, const std::string& norm,
           std::optional<double> tau0, std::optional<double> sigma, std::optional<std::string> L_strategy,
           const std::string& refine) {
          DoubleMeshOptions o;
          o.mesh = mesh_options(tau0, sigma, L_strategy, refine);
          o.norm = parse_norm(norm);
          py::gil_scoped_release release;
          return double_mesh_estimate(p, parse_scheme(scheme), N, M, eps, o).error;
        },
        py::arg("problem"), py::arg("scheme"), py::arg("N"), py::arg("M"), py::arg("eps"),
        py::arg("norm") = "space-time", py::arg("tau0") = py::none(), py::arg("sigma") = py::none(),
        py::arg("L_strategy") = py::none(), py::arg("refine") = "bisect");

  m.def("order", &order, py::arg("E_coarse"), py::arg("E_fine"));

  m.def("run_experiment",
        [](const TurningPointProblem& p, const std::string& scheme, std::vector<double> eps_list,
           std::vector<int> n_list, const std::string& m_policy, const std::string& norm, unsigned threads) {
          ExperimentOptions o;
          o.double_mesh.norm = parse_norm(norm);
          o.threads = threads;
          ConvergenceTable t;
          {
            py::gil_scoped_release release;
            t = run_experiment(p, parse_scheme(scheme), eps_list, n_list, MPolicy::parse(m_policy), o);
          }
          py::list E, q, errors;
          for (std::size_t e = 0; e < t.eps_list.size(); ++e) {
            py::list row, qrow, erow;
            for (std::size_t j = 0; j < t.n_list.size(); ++j) {
              row.append(optional_value(t.E(e, j)));
              erow.append(t.cells[e][j].error);
            }
            for (const auto& v : t.q[e]) qrow.append(optional_value(v));
            E.append(row);
            q.append(qrow);
            errors.append(erow);
          }
          py::list Eu, qu;
          for (const auto& v : t.E_uniform) Eu.append(optional_value(v));
          for (const auto& v : t.q_uniform) qu.append(optional_value(v));
          std::ostringstream csv;
          write_table_csv(csv, t);
          py::dict out;
          out["eps"] = t.eps_list;
          out["N"] = t.n_list;
          out["E"] = E;
          out["q"] = q;
          out["E_uniform"] = Eu;
          out["q_uniform"] = qu;
          out["errors"] = errors;
          out["csv"] = csv.str();
          return out;
        },
        py::arg("problem"), py::arg("scheme"), py::arg("eps_list"), py::arg("n_list"), py::arg("m_policy") = "equal-n",
        py::arg("norm") = "space-time", py::arg("threads") = 0);

#ifdef LAYERSOLVE_VERSION
  m.attr("__version__") = LAYERSOLVE_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
