// Python bindings: filter construction with exact coefficients, the DG solver,
// boundary and interior filtering, and the experiment harness.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siac/errors.hpp"
#include "siac/harness.hpp"

namespace py = pybind11;
using namespace siac;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.to_string());
}

Rational rational(const py::handle& value) {
  if (py::isinstance<py::int_>(value)) return Rational::parse(py::str(value).cast<std::string>());
  if (py::isinstance<py::float_>(value)) return Rational::from_double(value.cast<double>());
  return Rational::parse(py::str(value).cast<std::string>());
}

py::list fractions(const std::vector<Rational>& values) {
  py::list out;
  for (const auto& v : values) out.append(fraction(v));
  return out;
}

py::list fraction_rows(const RatMatrix& m) {
  py::list out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.append(fractions(m.row_values(r)));
  return out;
}

FilterSpec spec_from(const std::string& family, int d, const std::string& side) {
  int npk = 0;
  const Family f = parse_family(family, &npk);
  return build_spec(f, d, parse_side(side), npk);
}

py::dict record_dict(const Record& r) {
  py::dict d;
  d["problem"] = r.problem;
  d["d"] = r.d;
  d["filter"] = r.filter;
  d["region"] = to_string(r.region);
  d["norm"] = to_string(r.norm);
  d["N"] = r.N;
  d["T"] = r.T;
  d["value"] = r.value;
  d["kind"] = r.kind;
  return d;
}

}  // namespace

PYBIND11_MODULE(pysiac, m) {
  m.doc() = "Position-dependent SIAC filtering of discontinuous Galerkin solutions";

  static py::exception<Error> siac_error(m, "SiacError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      py::set_error(siac_error, e.what());
    }
  });

  py::class_<FilterSpec>(m, "FilterSpec")
      .def_property_readonly("name", &FilterSpec::name)
      .def_property_readonly("side", [](const FilterSpec& s) { return to_string(s.side); })
      .def_readonly("dg_degree", &FilterSpec::dg_degree)
      .def_readonly("reproduction_degree", &FilterSpec::reproduction_degree)
      .def_property_readonly("size", &FilterSpec::size)
      .def_property_readonly("knots", [](const FilterSpec& s) { return fractions(s.knots.knots()); })
      .def_property_readonly("index_set", [](const FilterSpec& s) { return s.index_set; })
      .def_property_readonly("degrees",
                             [](const FilterSpec& s) {
                               std::vector<int> out;
                               for (const auto& t : s.splines) out.push_back(t.degree);
                               return out;
                             })
      .def_property_readonly("region_width", [](const FilterSpec& s) { return fraction(s.region_width); })
      .def_property_readonly("anchor_offset", [](const FilterSpec& s) { return fraction(s.anchor_offset()); })
      .def("__repr__", [](const FilterSpec& s) { return "<FilterSpec " + s.name() + " " + to_string(s.side) + ">"; });

  m.def("build_spec", &spec_from, py::arg("family"), py::arg("d"), py::arg("side") = "interior",
        "Spec of a shipped family: symmetric, RS, SRV, RLKV or NPk.");
  m.def(
      "static_coefficients", [](const FilterSpec& s) { return fractions(static_coefficients(s)); }, py::arg("spec"));
  m.def(
      "coefficient_matrix", [](const FilterSpec& s) { return fraction_rows(shifted_coefficient_polynomials(s).matrix); },
      py::arg("spec"), "Row j holds the coefficients of c_j(xi) in ascending powers.");
  m.def(
      "coefficients_at",
      [](const FilterSpec& s, const py::object& xi) { return fractions(shifted_coefficient_polynomials(s).at(rational(xi))); },
      py::arg("spec"), py::arg("xi"));
  m.def(
      "q_matrix", [](const FilterSpec& s, int data_degree) { return fraction_rows(q_matrix(s, data_degree)); },
      py::arg("spec"), py::arg("data_degree"));
  m.def(
      "endpoint_vector",
      [](const FilterSpec& s, int data_degree, const py::object& xi) {
        return fractions(endpoint_vector(q_matrix(s, data_degree), rational(xi)));
      },
      py::arg("spec"), py::arg("data_degree"), py::arg("xi"));

  py::class_<Mesh>(m, "Mesh")
      .def(py::init<double, double, int>(), py::arg("a"), py::arg("b"), py::arg("N"))
      .def_readonly("a", &Mesh::a)
      .def_readonly("b", &Mesh::b)
      .def_readonly("N", &Mesh::N)
      .def_property_readonly("h", &Mesh::h);

  py::class_<DGField>(m, "DGField")
      .def_readonly("d", &DGField::d)
      .def_readonly("mesh", &DGField::mesh)
      .def_readonly("time", &DGField::time)
      .def_readonly("coeffs", &DGField::coeffs)
      .def_property_readonly("basis",
                             [](const DGField& f) { return f.basis == Basis::Legendre ? "legendre" : "bernstein"; })
      .def("__call__", [](const DGField& f, double x) { return f(x); })
      .def("__call__", [](const DGField& f, const std::vector<double>& xs) {
        std::vector<double> out;
        for (double x : xs) out.push_back(f(x));
        return out;
      });

  py::class_<TestProblem>(m, "TestProblem")
      .def_readonly("id", &TestProblem::id)
      .def_readonly("name", &TestProblem::name)
      .def_readonly("a", &TestProblem::a)
      .def_readonly("b", &TestProblem::b)
      .def("exact", [](const TestProblem& p, double x, double t) { return p.exact(x, t); }, py::arg("x"), py::arg("t"));

  m.def("make_test_problem", &make_test_problem, py::arg("id"));
  m.def("l2_project", &l2_project, py::arg("f"), py::arg("mesh"), py::arg("d"));
  m.def(
      "dg_solve",
      [](int problem, int N, int d, double T, double cfl) {
        const TestProblem tp = make_test_problem(problem);
        py::gil_scoped_release release;
        return dg_solve(tp, Mesh(tp.a, tp.b, N), d, T, cfl > 0.0 ? cfl : default_cfl(d));
      },
      py::arg("problem"), py::arg("N"), py::arg("d"), py::arg("T"), py::arg("cfl") = 0.0);

  py::class_<BoundaryPolynomial>(m, "BoundaryPolynomial")
      .def_property_readonly("side", [](const BoundaryPolynomial& p) { return to_string(p.side); })
      .def_readonly("h", &BoundaryPolynomial::h)
      .def_readonly("anchor", &BoundaryPolynomial::anchor)
      .def_readonly("lo", &BoundaryPolynomial::lo)
      .def_readonly("hi", &BoundaryPolynomial::hi)
      .def_readonly("coeffs", &BoundaryPolynomial::coeffs)
      .def_readonly("derivative_order", &BoundaryPolynomial::derivative_order)
      .def_property_readonly("degree", &BoundaryPolynomial::degree)
      .def("__call__", &BoundaryPolynomial::operator(), py::arg("x"))
      .def("derivative", &BoundaryPolynomial::derivative, py::arg("order") = 1)
      .def("physical_coefficients", &BoundaryPolynomial::physical_coefficients);

  m.def("filter_boundary", &filter_boundary, py::arg("field"), py::arg("spec"));

  py::class_<SymmetricFilter>(m, "SymmetricFilter")
      .def(py::init<FilterSpec>(), py::arg("spec"))
      .def("region", &SymmetricFilter::region, py::arg("mesh"))
      .def("__call__", &SymmetricFilter::operator(), py::arg("field"), py::arg("x"));

  m.def(
      "reference_convolve",
      [](const FilterSpec& s, const DGField& field, double x) {
        return reference_convolve(kernel_at(s, field.mesh, x), field, x);
      },
      py::arg("spec"), py::arg("field"), py::arg("x"));

  m.def(
      "blend_weight",
      [](double z, int rho, const std::string& profile, int derivative) {
        return blend_weight(z, rho, profile == "literal" ? BlendProfile::Literal : BlendProfile::Hermite, derivative);
      },
      py::arg("z"), py::arg("rho") = 2, py::arg("profile") = "hermite", py::arg("derivative") = 0);

  m.def("convergence_rate", &convergence_rate, py::arg("e_2h"), py::arg("e_h"));
  m.def("default_times", &default_times, py::arg("problem"));

  m.def(
      "time_series_experiment",
      [](int problem, int d, std::vector<std::string> filters, std::vector<int> meshes, std::vector<double> times,
         bool blend, int rho, int samples, int jobs) {
        RunConfig config;
        config.problem = problem;
        config.d = d;
        config.filters = std::move(filters);
        config.meshes = std::move(meshes);
        config.times = std::move(times);
        config.blend = blend;
        config.rho = rho;
        config.samples = samples;
        config.jobs = jobs;
        std::vector<Record> records;
        {
          py::gil_scoped_release release;
          records = time_series_experiment(config);
        }
        py::list out;
        for (const auto& r : records) out.append(record_dict(r));
        return out;
      },
      py::arg("problem"), py::arg("d"), py::arg("filters") = std::vector<std::string>{"DG", "symmetric", "NP0"},
      py::arg("meshes") = std::vector<int>{20, 40, 80, 160}, py::arg("times") = std::vector<double>{},
      py::arg("blend") = true, py::arg("rho") = 2, py::arg("samples") = 6, py::arg("jobs") = 1,
      "Error and rate records as dicts; an empty `times` uses the problem's default grid.");
}
