#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bonusruin/analytics.hpp"
#include "bonusruin/importance.hpp"
#include "bonusruin/oracle.hpp"
#include "bonusruin/simulation.hpp"
#include "commands.hpp"

namespace py = pybind11;
using namespace bonusruin;

namespace {

py::dict estimate_dict(const RuinEstimate& e) {
  py::dict d;
  d["estimate"] = e.estimate;
  d["std_error"] = e.std_error;
  d["ci_lo"] = e.ci_lo;
  d["ci_hi"] = e.ci_hi;
  d["n_paths"] = e.n_paths;
  d["n_ruined"] = e.n_ruined;
  d["seed"] = e.seed;
  d["horizon"] = e.horizon ? py::cast(*e.horizon) : py::none();
  d["low_information"] = e.low_information;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ruin probabilities for a two-level bonus risk process";

  static py::exception<Error> error_type(m, "BonusRuinError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = error_type;
      py::object instance = err(e.what());
      instance.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("lambda1", &ModelParams::lambda1)
      .def_readonly("lambda2", &ModelParams::lambda2)
      .def_readonly("xi", &ModelParams::xi)
      .def_property_readonly("exponential_claims",
                             [](const ModelParams& p) { return is_exponential(p.claims); })
      .def_property_readonly("claim_mean", [](const ModelParams& p) { return claim_mean(p.claims); })
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream os;
        os << "ModelParams(lambda1=" << p.lambda1 << ", lambda2=" << p.lambda2 << ", xi=" << p.xi
           << ")";
        return os.str();
      });

  m.def("exponential_model", &make_exponential_model, py::arg("lambda1"), py::arg("lambda2"),
        py::arg("xi"), py::arg("beta"));
  m.def("pareto_model", &make_pareto_model, py::arg("lambda1"), py::arg("lambda2"), py::arg("xi"),
        py::arg("alpha"), py::arg("sigma"));

  m.def("npc_margin", &npc_margin);
  m.def("mean_cycle_increment", &mean_cycle_increment);
  m.def("steady_state", [](const ModelParams& p) {
    const SteadyState s = steady_state(p);
    return py::make_tuple(s.pi1, s.pi2);
  });
  m.def("mgf_x1", &mgf_x1, py::arg("params"), py::arg("theta"));
  m.def("solve_kappa", [](const ModelParams& p) { return solve_kappa(p); });
  m.def("adjustment_eigenvector", [](const ModelParams& p, double kappa) {
    const EigenPair e = adjustment_eigenvector(p, kappa);
    return py::make_tuple(e.v1, e.v2);
  });
  m.def("cramer_upper_constant", &cramer_upper_constant);
  m.def("classical_ruin", &classical_ruin, py::arg("lam"), py::arg("beta"), py::arg("u"));
  m.def("heavy_tail_constant", &heavy_tail_constant);
  m.def("heavy_tail_asymptotic",
        [](const ModelParams& p, double x) { return heavy_tail_asymptotic(p, x).value; });

  m.def(
      "crude_mc_ruin",
      [](const ModelParams& p, double x, std::uint64_t n, std::uint64_t seed, double horizon,
         double escape_margin, unsigned threads) {
        CrudeOptions o;
        o.horizon = horizon;
        o.escape_margin = escape_margin;
        o.threads = threads;
        py::gil_scoped_release release;
        const RuinEstimate e = crude_mc_ruin(p, x, n, seed, o);
        py::gil_scoped_acquire acquire;
        return estimate_dict(e);
      },
      py::arg("params"), py::arg("x"), py::arg("n"), py::arg("seed"), py::arg("horizon") = 1e4,
      py::arg("escape_margin") = std::numeric_limits<double>::infinity(), py::arg("threads") = 0);

  auto is_binding = [&m](const char* name, auto fn) {
    m.def(
        name,
        [fn](const ModelParams& p, double x, std::uint64_t n, std::uint64_t seed, unsigned threads) {
          ImportanceOptions o;
          o.threads = threads;
          RuinEstimate e;
          {
            py::gil_scoped_release release;
            e = fn(p, x, n, seed, o);
          }
          return estimate_dict(e);
        },
        py::arg("params"), py::arg("x"), py::arg("n"), py::arg("seed"), py::arg("threads") = 0);
  };
  is_binding("map_is_ruin", [](const ModelParams& p, double x, std::uint64_t n, std::uint64_t s,
                               const ImportanceOptions& o) { return map_is_ruin(p, x, n, s, o); });
  is_binding("macro_is_ruin", [](const ModelParams& p, double x, std::uint64_t n, std::uint64_t s,
                                 const ImportanceOptions& o) { return macro_is_ruin(p, x, n, s, o); });

  m.def(
      "solve_integral_equations",
      [](const ModelParams& p, double x_max, double h, double tol) {
        const GridFunction g = solve_integral_equations(p, x_max, h, tol);
        py::dict d;
        d["grid"] = g.grid;
        d["psi1"] = g.psi1;
        d["psi2"] = g.psi2;
        d["residual"] = g.residual;
        d["iterations"] = g.iterations;
        return d;
      },
      py::arg("params"), py::arg("x_max"), py::arg("h"), py::arg("tol") = 1e-10);
  m.def(
      "mc_mgf_x1",
      [](const ModelParams& p, double theta, std::uint64_t n, std::uint64_t seed) {
        const MgfEstimate e = mc_mgf_x1(p, theta, n, seed);
        return py::make_tuple(e.mean, e.std_error);
      },
      py::arg("params"), py::arg("theta"), py::arg("n"), py::arg("seed"));
  m.def(
      "mc_tail_ratio",
      [](const ModelParams& p, double x, std::uint64_t n, std::uint64_t seed) {
        const TailRatio r = mc_tail_ratio(p, x, n, seed);
        return py::make_tuple(r.ratio, r.std_error);
      },
      py::arg("params"), py::arg("x"), py::arg("n"), py::arg("seed"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"bonusruin"};
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run_cli(full, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
