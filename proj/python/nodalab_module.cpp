// Python bindings for the main operations: build domains and fields, evaluate
// frequency and doubling indices, trace nodal sets, and run the cube dividing
// recursion.  Everything returns plain dicts / floats so the smoke tests and
// notebooks need no custom types beyond the handles themselves.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nodalab/cli.hpp"
#include "nodalab/lifted.hpp"

namespace py = pybind11;
using namespace nodalab;

namespace {

DomainSpec make_domain(const std::string& kind, double a, double b, int mode) {
  if (kind == "disk") return DomainSpec::unit_disk();
  if (kind == "rectangle") return DomainSpec::rectangle(a, b);
  if (kind == "perturbed_disk")
    return DomainSpec::perturbed_disk(a <= 0 ? 1.0 : a, b, mode);
  throw std::invalid_argument("unknown domain kind: " + kind);
}

py::dict freq_dict(const FrequencyEval& e) {
  py::dict d;
  d["r"] = e.r;
  d["H"] = e.H;
  d["I"] = e.I;
  d["N"] = e.N;
  d["N_def"] = e.N_def;
  d["quadrature_error"] = e.quadrature_error;
  d["ibp_gap"] = e.ibp_gap;
  return d;
}

py::dict doubling_dict(const DoublingEval& e) {
  py::dict d;
  d["r"] = e.r;
  d["sup_outer"] = e.sup_outer;
  d["sup_inner"] = e.sup_inner;
  d["M"] = e.M;
  d["M_err"] = e.M_err;
  return d;
}

}  // namespace

PYBIND11_MODULE(nodalab, m) {
  m.doc() = "frequency-function and nodal-measure verification lab";

  py::class_<DomainSpec>(m, "Domain")
      .def(py::init(&make_domain), py::arg("kind"), py::arg("a") = 1.0,
           py::arg("b") = 1.0, py::arg("mode") = 0)
      .def("area", &DomainSpec::area)
      .def("perimeter", &DomainSpec::perimeter)
      .def("contains", [](const DomainSpec& d, double x,
                          double y) { return d.contains({x, y}); })
      .def("boundary_distance", [](const DomainSpec& d, double x, double y) {
        return d.boundary_distance({x, y});
      });

  py::class_<SolutionField>(m, "Field")
      .def_readonly("mu", &SolutionField::mu)
      .def_readonly("lambda_", &SolutionField::lambda)
      .def_readonly("name", &SolutionField::name)
      .def_readonly("residual", &SolutionField::residual)
      .def("value", [](const SolutionField& f, double x,
                       double y) { return f.value({x, y}); })
      .def("gradient", [](const SolutionField& f, double x, double y) {
        const Vec2 g = f.gradient({x, y});
        return py::make_tuple(g.x, g.y);
      });

  m.def(
      "square_mode",
      [](int k, int mm, double w, double h) {
        return square_mode(DomainSpec::rectangle(w, h), k, mm);
      },
      py::arg("k"), py::arg("m"), py::arg("w") = 1.0, py::arg("h") = 1.0);
  m.def(
      "disk_mode",
      [](int nr, int mm) { return disk_mode(DomainSpec::unit_disk(), nr, mm); },
      py::arg("nr"), py::arg("m"));
  m.def(
      "harmonic_poly",
      [](int k, double w, double h) {
        return harmonic_poly(DomainSpec::rectangle(w, h), k);
      },
      py::arg("k"), py::arg("w") = 1.0, py::arg("h") = 1.0);
  m.def(
      "solve_eigenpair",
      [](const DomainSpec& dom, int index, double mesh_h, double pot_a,
         unsigned seed) {
        const Potential W = pot_a == 0.0
                                ? Potential::zero()
                                : Potential::sine_product(pot_a, 3, 3);
        EigenOptions opts;
        opts.seed = seed;
        return solve_eigenpair(dom, W, index, mesh_h, opts);
      },
      py::arg("domain"), py::arg("index") = 1, py::arg("mesh_h") = 1.0 / 64,
      py::arg("pot_a") = 0.0, py::arg("seed") = 12345);

  m.def(
      "frequency",
      [](const SolutionField& f, double x, double y, double r) {
        return freq_dict(frequency_eval(f, {x, y, 0.0}, r));
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("r"));
  m.def(
      "doubling",
      [](const SolutionField& f, double x, double y, double r) {
        return doubling_dict(doubling_index(f, {x, y, 0.0}, r));
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("r"));
  m.def(
      "nodal_length",
      [](const SolutionField& f, double h) {
        const NodalSet ns = extract_nodal(f, h);
        py::dict d;
        d["total_length"] = ns.total_length;
        d["segments"] = ns.segments.size();
        d["degenerate_cells"] = ns.degenerate_cells;
        return d;
      },
      py::arg("field"), py::arg("h") = 1.0 / 128);
  m.def(
      "vanishing_order",
      [](const SolutionField& f, double x, double y) {
        std::vector<double> radii;
        for (double r = 0.015; r <= 0.21; r *= 1.55) radii.push_back(r);
        const VanishingOrderEstimate vo = vanishing_order(f, {x, y}, radii);
        py::dict d;
        d["order"] = vo.slope;
        d["residual"] = vo.residual;
        d["reliable"] = vo.reliable;
        return d;
      },
      py::arg("field"), py::arg("x"), py::arg("y"));

  m.def(
      "run_dividing",
      [](int A, double M0, double R, double M_root, int max_generations,
         const std::string& oracle) {
        DividingConfig cfg;
        cfg.A = A;
        cfg.M0 = M0;
        cfg.R = R;
        cfg.origin = {-0.5 * R, 0.0, -0.5 * R};
        cfg.max_generations = max_generations;
        cfg.keep_nodes = false;
        cfg.validate();
        const MOracle o = oracle == "stuck" ? stuck_oracle(M_root)
                                            : halving_oracle(M_root);
        const CubeTree tree = run_dividing(o, cfg);
        const SeriesBound sb = series_bound(cfg, tree.M_root);
        py::dict d;
        d["M_root"] = tree.M_root;
        d["k0"] = tree.k0;
        d["kappa"] = cfg.kappa();
        d["recursion_total"] = tree.accounting.recursion_total;
        d["closed_form_total"] = tree.accounting.closed_form_total;
        d["series_total"] = sb.total;
        d["final_bound"] = sb.final_bound;
        d["fitted_C"] = sb.fitted_C;
        d["complete"] = tree.accounting.complete;
        d["recursion_le_series"] = tree.accounting.recursion_le_series;
        return d;
      },
      py::arg("A") = 3, py::arg("M0") = 1.5, py::arg("R") = 0.1,
      py::arg("M_root") = 18.0, py::arg("max_generations") = 8,
      py::arg("oracle") = "halving");

  m.def("config_roundtrip", [](const std::string& text) {
    const RunConfig cfg = RunConfig::from_json(nlohmann::json::parse(text));
    cfg.validate();
    return cfg.to_json().dump(2);
  });

  m.def("cli_main", [](const std::vector<std::string>& args) {
    std::vector<std::string> argv_s = args;
    argv_s.insert(argv_s.begin(), "nodalab");
    std::vector<char*> argv;
    argv.reserve(argv_s.size());
    for (std::string& s : argv_s) argv.push_back(s.data());
    return run_cli(int(argv.size()), argv.data());
  });
}
