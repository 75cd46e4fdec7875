#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chemofront/errors.hpp"
#include "chemofront/harness.hpp"

namespace py = pybind11;
using namespace chemofront;

namespace {

BoundaryKind boundary_from(const std::string& kind, double a, double b) {
  if (kind == "mixed") return MixedBC{a};
  if (kind == "dirichlet") return DirichletBC{a, b};
  throw ConfigError("boundary kind must be 'mixed' or 'dirichlet'");
}

py::dict series_columns(const RunSeries& s) {
  std::vector<double> t, h, hp, sup, inf, combo, grad, g, gp;
  for (const Sample& x : s.samples) {
    t.push_back(x.t);
    h.push_back(x.h);
    hp.push_back(x.h_prime);
    sup.push_back(x.sup_u);
    inf.push_back(x.inf_u_window);
    combo.push_back(x.combo_residual);
    grad.push_back(x.gradient_residual);
    g.push_back(x.g);
    gp.push_back(x.g_prime);
  }
  py::dict d;
  d["t"] = t;
  d["h"] = h;
  d["h_prime"] = hp;
  d["sup_u"] = sup;
  d["inf_u_window"] = inf;
  d["combo_residual"] = combo;
  d["gradient_residual"] = grad;
  if (s.double_front) {
    d["g"] = g;
    d["g_prime"] = gp;
  }
  return d;
}

py::dict hypotheses_dict(const HypothesisReport& r) {
  py::dict d;
  d["M"] = r.M;
  d["K"] = r.K;
  d["M0"] = r.M0;
  d["m0"] = r.m0;
  d["M0_valid"] = r.M0_valid;
  d["m0_positive"] = r.m0_positive;
  d["h1_holds"] = r.h1_holds;
  d["h2_holds"] = r.h2_holds;
  d["h3_holds"] = r.h3_holds;
  d["h1_margin"] = r.h1_margin;
  d["h2_margin"] = r.h2_margin;
  d["h3_margin"] = r.h3_margin;
  return d;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free-boundary attraction-repulsion chemotaxis solvers";

  // Translators run most-recent first, so derived classes are registered last.
  auto& base_exc = py::register_exception<Error>(m, "ChemofrontError", PyExc_RuntimeError);
  auto& numeric_exc = py::register_exception<NumericalError>(m, "NumericalError", base_exc.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", numeric_exc.ptr());
  auto& config_exc = py::register_exception<ConfigError>(m, "ConfigError", base_exc.ptr());
  py::register_exception<HypothesisViolation>(m, "HypothesisViolation", config_exc.ptr());
  py::register_exception<AssertionFailure>(m, "AssertionFailure", base_exc.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def(py::init([](double chi1, double chi2, double lambda1, double lambda2, double mu1, double mu2,
                       double nu) { return ModelParams{chi1, chi2, lambda1, lambda2, mu1, mu2, nu}; }),
           py::arg("chi1") = 0.0, py::arg("chi2") = 0.0, py::arg("lambda1") = 1.0, py::arg("lambda2") = 1.0,
           py::arg("mu1") = 0.0, py::arg("mu2") = 0.0, py::arg("nu") = 1.0)
      .def_readwrite("chi1", &ModelParams::chi1)
      .def_readwrite("chi2", &ModelParams::chi2)
      .def_readwrite("lambda1", &ModelParams::lambda1)
      .def_readwrite("lambda2", &ModelParams::lambda2)
      .def_readwrite("mu1", &ModelParams::mu1)
      .def_readwrite("mu2", &ModelParams::mu2)
      .def_readwrite("nu", &ModelParams::nu)
      .def("validate", &ModelParams::validate);

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_static("constant", &CoefficientField::constant, py::arg("a"), py::arg("b"))
      .def_static(
          "from_json",
          [](const std::string& text) {
            Json raw = parse(text);
            return coefficients_from(normalize_config(Json{{"coefficients", raw}}));
          },
          "Build from the 'coefficients' section of a config (JSON text).")
      .def("a", &CoefficientField::a)
      .def("b", &CoefficientField::b)
      .def_property_readonly("kind", [](const CoefficientField& c) { return std::string(to_string(c.kind())); })
      .def_property_readonly("period", &CoefficientField::period)
      .def_property_readonly("bounds", [](const CoefficientField& c) {
        const auto& b = c.bounds();
        return py::dict(py::arg("a_inf") = b.a_inf, py::arg("a_sup") = b.a_sup, py::arg("b_inf") = b.b_inf,
                        py::arg("b_sup") = b.b_sup);
      });

  m.def("compute_M", &compute_M);
  m.def("compute_K", &compute_K);
  m.def("compute_M0", &compute_M0);
  m.def("compute_m0", &compute_m0);
  m.def("check_hypotheses", [](const ModelParams& p, const CoefficientField& c) {
    return hypotheses_dict(check_hypotheses(p, c));
  });

  m.def(
      "principal_eigenvalue",
      [](const std::function<double(double)>& a, const std::string& kind, double l1, double l2, int n,
         bool extrapolate) {
        const BoundaryKind bc = boundary_from(kind, l1, l2);
        return extrapolate ? principal_eigenvalue_extrapolated(a, bc, n) : principal_eigenvalue_autonomous(a, bc, n);
      },
      py::arg("a"), py::arg("kind"), py::arg("l1"), py::arg("l2") = 0.0, py::arg("n") = 256,
      py::arg("extrapolate") = true,
      "Largest eigenvalue of d2/dx2 + a(x); kind 'mixed' uses [0, l1], 'dirichlet' uses [l1, l2].");
  m.def("find_l_star", [](const CoefficientField& c, double tol) { return find_l_star(c, tol); }, py::arg("c"),
        py::arg("tol") = 1e-6);
  m.def("find_l_star_star", [](const CoefficientField& c, double tol) { return find_l_star_star(c, tol); },
        py::arg("c"), py::arg("tol") = 1e-6);

  m.def("solve_potential",
        [](const std::vector<double>& u, double lambda, double mu, double h) { return solve_potential(u, lambda, mu, h); },
        py::arg("u"), py::arg("lam"), py::arg("mu"), py::arg("h"));
  m.def(
      "potential_oracle_reflection",
      [](const std::vector<double>& u, double lambda, double mu, double h, int quad_n) {
        ReflectionOracleOptions o;
        o.quad_n = quad_n;
        return potential_oracle_reflection(u, lambda, mu, h, o);
      },
      py::arg("u"), py::arg("lam"), py::arg("mu"), py::arg("h"), py::arg("quad_n") = 64);

  m.def(
      "stefan_velocity",
      [](const std::vector<double>& u, double h, double nu) {
        FrontState s;
        s.u = u;
        s.h = h;
        s.grid_n = static_cast<int>(u.size());
        if (s.grid_n < 3) throw ConfigError("need at least 3 nodes");
        return stefan_velocity(s, nu);
      },
      py::arg("u"), py::arg("h"), py::arg("nu") = 1.0);

  m.def(
      "logistic_orbit",
      [](const CoefficientField& c, const std::vector<double>& times) {
        const LogisticOrbit orbit = logistic_entire_solution(c.a_sampler(), c.b_sampler(), c.period());
        std::vector<double> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(orbit(t));
        return out;
      },
      py::arg("c"), py::arg("times"),
      "Positive periodic solution of u' = u (a(t) - b(t) u), evaluated at `times`.");

  m.def("normalize_config", [](const std::string& text) { return normalize_config(parse(text)).dump(); });
  m.def("config_digest", [](const std::string& text) { return config_digest(normalize_config(parse(text))); });
  m.def(
      "run_config",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        Json cfg = normalize_config(parse(text));
        for (const auto& o : overrides) apply_override(cfg, o);
        RunReport r;
        {
          py::gil_scoped_release release;
          r = execute(cfg);
        }
        py::dict d;
        d["verdict"] = r.verdict;
        d["digest"] = r.digest;
        d["series"] = series_columns(r.series);
        d["manifest"] = r.manifest.dump();
        d["final_u"] = r.final_profile.u;
        d["final_left"] = r.final_profile.left;
        d["final_length"] = r.final_profile.length;
        return d;
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "run_sweep",
      [](const std::string& text, int jobs) {
        SweepSpec spec = sweep_from(normalize_config(parse(text)));
        spec.jobs = jobs;
        py::gil_scoped_release release;
        return run_sweep(spec).csv();
      },
      py::arg("config"), py::arg("jobs") = 1);
  m.def("spectrum_report", [](const std::string& text) { return spectrum_report(normalize_config(parse(text))).dump(); });
  m.def(
      "run_experiment",
      [](const std::string& preset, const std::vector<std::string>& overrides, const std::string& out_dir, int jobs) {
        ExperimentOptions o;
        o.overrides = overrides;
        o.out_dir = out_dir;
        o.jobs = jobs;
        py::gil_scoped_release release;
        return run_experiment(preset, o).dump();
      },
      py::arg("preset"), py::arg("overrides") = std::vector<std::string>{}, py::arg("out_dir") = "",
      py::arg("jobs") = 1);
  m.def("experiment_presets", &experiment_presets);
}
