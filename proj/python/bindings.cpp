#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsf/qbessel.hpp"
#include "qsf/qcore.hpp"
#include "qsf/qneumann.hpp"
#include "qsf/verify.hpp"

namespace py = pybind11;
using namespace qsf;

namespace {

TruncationPolicy make_policy(double rel_tol, long max_terms) {
    TruncationPolicy p;
    p.rel_tol = rel_tol;
    p.max_terms = max_terms;
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "q-special functions: q-gamma, q-psi, Hahn-Exton q-Bessel, "
              "q-Neumann, and the identity verification sweeps";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError",
                                             PyExc_ArithmeticError);
    py::register_exception<NearIntegerError>(m, "NearIntegerError",
                                             PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError",
                                              PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError",
                                            PyExc_ArithmeticError);

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("value", &Evaluation::value)
        .def_readonly("est_error", &Evaluation::est_error)
        .def_readonly("terms_used", &Evaluation::terms_used)
        .def_readonly("flags", &Evaluation::flags)
        .def_property_readonly(
            "flag_names", [](const Evaluation& e) { return flag_names(e.flags); })
        .def("__float__", [](const Evaluation& e) { return e.value; })
        .def("__repr__", [](const Evaluation& e) {
            return "Evaluation(value=" + std::to_string(e.value) +
                   ", est_error=" + std::to_string(e.est_error) +
                   ", terms_used=" + std::to_string(e.terms_used) +
                   ", flags=" + flag_names(e.flags) + ")";
        });

    m.def(
        "q_gamma",
        [](double nu, double q, double rel_tol, long max_terms) {
            return q_gamma(nu, QParam(q), make_policy(rel_tol, max_terms));
        },
        py::arg("nu"), py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);
    m.def(
        "log_q_gamma",
        [](double nu, double q, double rel_tol, long max_terms) {
            return log_q_gamma(nu, QParam(q), make_policy(rel_tol, max_terms));
        },
        py::arg("nu"), py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);
    m.def(
        "q_psi",
        [](double nu, double q, double rel_tol, long max_terms) {
            return q_psi(nu, QParam(q), make_policy(rel_tol, max_terms));
        },
        py::arg("nu"), py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);
    m.def(
        "q_euler_constant",
        [](double q, double rel_tol, long max_terms) {
            return q_euler_constant(QParam(q), make_policy(rel_tol, max_terms));
        },
        py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);
    m.def(
        "q_gamma_residue",
        [](int n, double q) { return q_gamma_residue(n, QParam(q)); },
        py::arg("n"), py::arg("q"));
    m.def(
        "q_psi_residue",
        [](int n, double q) { return q_psi_residue(n, QParam(q)); },
        py::arg("n"), py::arg("q"));
    m.def(
        "psi_over_gamma_limit",
        [](int n, double q) { return psi_over_gamma_limit(n, QParam(q)); },
        py::arg("n"), py::arg("q"));

    m.def(
        "bessel_j",
        [](double nu, double x, double q, double rel_tol, long max_terms) {
            return hahn_exton_j(nu, x, QParam(q),
                                make_policy(rel_tol, max_terms));
        },
        py::arg("nu"), py::arg("x"), py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);
    m.def(
        "neumann_n",
        [](double nu, double x, double q, double rel_tol, long max_terms) {
            return q_neumann(nu, x, QParam(q),
                             make_policy(rel_tol, max_terms));
        },
        py::arg("nu"), py::arg("x"), py::arg("q"), py::arg("rel_tol") = 1e-14,
        py::arg("max_terms") = 10000000L);

    m.def("verify_suite_names", [] { return verify::suite_names(); });
    m.def(
        "verify_suite",
        [](const std::string& suite) {
            verify::SweepConfig cfg;
            auto recs = verify::run_suite(suite, cfg);
            py::list cases;
            long failed = 0;
            for (const auto& r : recs) {
                py::dict c;
                c["identity"] = verify::identity_name(r.identity);
                c["q"] = r.q;
                c["nu"] = r.nu;
                c["x"] = r.x;
                c["extras"] = r.extras;
                c["residual"] = r.residual;
                c["scale"] = r.scale;
                c["tol"] = r.tol;
                c["pass"] = r.pass;
                failed += !r.pass;
                cases.append(std::move(c));
            }
            py::dict out;
            out["suite"] = suite;
            out["cases"] = std::move(cases);
            out["total"] = static_cast<long>(recs.size());
            out["failed"] = failed;
            return out;
        },
        py::arg("suite"));
}
