#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ml2v/asymptotics.hpp"
#include "ml2v/gamma.hpp"
#include "ml2v/oracle.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/series.hpp"

namespace py = pybind11;
using namespace ml2v;

namespace {

py::dict as_dict(const Evaluation& e) {
    py::dict d;
    d["value"] = e.value;
    d["est_error"] = e.est_error;
    d["method"] = method_tag(e);
    d["case"] = e.asymptotic_case ? py::cast(to_string(*e.asymptotic_case)) : py::none();
    d["error_constant"] = e.error_constant ? py::cast(*e.error_constant) : py::none();
    return d;
}

using LemmaFn = Evaluation (*)(cplx, cplx, const Parameters&, const ContourSpec&, double,
                               const RepresentationOptions&);

void def_lemma(py::module_& m, const char* name, LemmaFn fn) {
    m.def(
        name,
        [fn](cplx x, cplx y, const Parameters& p, const ContourSpec& c, double tol) {
            return as_dict(fn(x, y, p, c, tol, RepresentationOptions{}));
        },
        py::arg("x"), py::arg("y"), py::arg("params"), py::arg("contour"), py::arg("tol") = 1e-10);
}

}  // namespace

PYBIND11_MODULE(ml2v, m) {
    m.doc() = "Two-variable Mittag-Leffler function E_{alpha,beta}(x, y; mu)";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<RegionError>(m, "RegionError", base.ptr());
    py::register_exception<PoleProximityError>(m, "PoleProximityError", base.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
    py::register_exception<DegenerateDenominator>(m, "DegenerateDenominator", base.ptr());
    py::register_exception<MagnitudeFloor>(m, "MagnitudeFloor", base.ptr());
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

    py::class_<Parameters>(m, "Parameters")
        .def_readonly("alpha", &Parameters::alpha)
        .def_readonly("beta", &Parameters::beta)
        .def_readonly("mu", &Parameters::mu)
        .def_readonly("thin_window", &Parameters::thin_window)
        .def_property_readonly("regime", [](const Parameters& p) { return to_string(p.regime); })
        .def("__repr__", [](const Parameters& p) {
            return "Parameters(alpha=" + std::to_string(p.alpha) +
                   ", beta=" + std::to_string(p.beta) + ")";
        });

    py::class_<ContourSpec>(m, "ContourSpec")
        .def(py::init([](double eps, double theta) { return ContourSpec{eps, theta}; }),
             py::arg("epsilon"), py::arg("theta"))
        .def_readwrite("epsilon", &ContourSpec::epsilon)
        .def_readwrite("theta", &ContourSpec::theta);

    m.def("validate_params", &validate_params, py::arg("alpha"), py::arg("beta"),
          py::arg("mu") = cplx(1.0));
    m.def("theta_window", [](const Parameters& p) {
        const ThetaWindow w = theta_window(p);
        return py::make_tuple(w.lower, w.upper);
    });
    m.def(
        "classify_region",
        [](cplx point, const ContourSpec& c) { return to_string(classify_region(point, c)); },
        py::arg("point"), py::arg("contour"));
    m.def("recip_gamma", [](cplx s) { return recip_gamma(s); }, py::arg("s"));

    m.def(
        "eval_double_series",
        [](cplx x, cplx y, const Parameters& p, double tol, int max_terms) {
            return as_dict(eval_double_series(x, y, p, SeriesBudget{tol, max_terms}));
        },
        py::arg("x"), py::arg("y"), py::arg("params"), py::arg("tol") = 1e-12,
        py::arg("max_terms") = 2000);
    m.def(
        "eval_ml_one",
        [](cplx z, double rho, cplx kappa, double tol) {
            return as_dict(eval_ml_one(z, rho, kappa, SeriesBudget{tol, 2000}));
        },
        py::arg("z"), py::arg("rho"), py::arg("kappa"), py::arg("tol") = 1e-12);

    def_lemma(m, "eval_lemma1", &eval_lemma1);
    def_lemma(m, "eval_lemma2", &eval_lemma2);
    def_lemma(m, "eval_remark1", &eval_remark1);
    def_lemma(m, "eval_lemma3", &eval_lemma3);
    def_lemma(m, "eval_representation", &eval_representation);
    m.def("choose_contour", &choose_contour, py::arg("x"), py::arg("y"), py::arg("params"));

    m.def(
        "eval_asymptotic",
        [](cplx x, cplx y, const Parameters& p, int p_alpha, int p_beta,
           std::optional<double> tau1) {
            const double t = tau1 ? *tau1 : default_tau1(x, y, p);
            return as_dict(eval_asymptotic(x, y, p, TruncationOrders{p_alpha, p_beta}, t));
        },
        py::arg("x"), py::arg("y"), py::arg("params"), py::arg("p_alpha") = 3,
        py::arg("p_beta") = 3, py::arg("tau1") = py::none());

    m.def(
        "eval_auto",
        [](cplx x, cplx y, const Parameters& p, double tol) {
            return as_dict(eval_auto(x, y, p, tol));
        },
        py::arg("x"), py::arg("y"), py::arg("params"), py::arg("tol") = 1e-10);

    m.def(
        "oracle_eval",
        [](cplx x, cplx y, const Parameters& p, int digits) {
            const OracleValue o = oracle_eval(x, y, p, digits);
            py::dict d;
            d["re"] = o.re;
            d["im"] = o.im;
            d["approx"] = o.approx;
            d["tail_bound"] = o.tail_bound;
            d["working_digits"] = o.working_digits;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("params"), py::arg("digits") = 30);
}
