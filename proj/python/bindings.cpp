#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "shortcalc/approx.hpp"
#include "shortcalc/commands.hpp"
#include "shortcalc/compat.hpp"
#include "shortcalc/orders.hpp"
#include "shortcalc/shorted.hpp"

namespace py = pybind11;
using namespace shortcalc;

namespace {

Subspace span_of(const ComplexMatrix& s, const Tolerance& tol) { return Subspace::span(s, tol); }

py::object projection(const std::optional<Projection>& p) {
    if (!p) return py::none();
    py::dict d;
    d["matrix"] = p->matrix();
    d["range"] = p->range().basis();
    d["nullspace"] = p->nullspace().basis();
    return std::move(d);
}

py::list checks(const Report& rep) {
    py::list out;
    for (const Check& c : rep.checks) {
        py::dict d;
        d["name"] = c.name;
        d["pass"] = c.pass;
        d["residual"] = c.residual;
        d["note"] = c.note;
        out.append(d);
    }
    return out;
}

py::dict verdict(const OrderVerdict& v) {
    py::dict d;
    d["holds"] = v.holds;
    d["failure_reason"] = std::string(to_string(v.failure_reason));
    d["left_witness"] = projection(v.left_witness);
    d["right_witness"] = projection(v.right_witness);
    d["cross_check"] = v.cross_check ? py::object(py::bool_(*v.cross_check)) : py::object(py::none());
    return d;
}

StarVariant star_variant(const std::string& s) {
    if (s == "star") return StarVariant::star;
    if (s == "left") return StarVariant::left_star;
    if (s == "right") return StarVariant::right_star;
    throw UsageError("variant must be star, left or right");
}

WeightedVariant weighted_variant(const std::string& s) {
    if (s == "left") return WeightedVariant::left;
    if (s == "right") return WeightedVariant::right;
    if (s == "both") return WeightedVariant::both;
    throw UsageError("variant must be left, right or both");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shorted operators, compatibility, matrix partial orders and weighted least squares";

    auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<HypothesisViolated>(m, "HypothesisViolated", error.ptr());
    py::register_exception<Infeasible>(m, "Infeasible", error.ptr());
    py::register_exception<NotPsd>(m, "NotPsd", error.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());

    py::class_<Tolerance>(m, "Tolerance")
        .def(py::init<>())
        .def(py::init([](double rank_rel, double cmp_abs, double cmp_rel) {
                 Tolerance t{rank_rel, cmp_abs, cmp_rel};
                 t.validate();
                 return t;
             }),
             py::arg("rank_rel"), py::arg("cmp_abs"), py::arg("cmp_rel"))
        .def_static("from_scalar", &Tolerance::from_scalar)
        .def_readwrite("rank_rel", &Tolerance::rank_rel)
        .def_readwrite("cmp_abs", &Tolerance::cmp_abs)
        .def_readwrite("cmp_rel", &Tolerance::cmp_rel);

    m.def("rank_and_pinv", [](const ComplexMatrix& a, const Tolerance& tol) {
        const RankPinv r = rank_and_pinv(a, tol);
        return py::make_tuple(r.rank, r.pinv);
    }, py::arg("a"), py::arg("tol") = Tolerance{});

    m.def("orthonormal_basis", [](const ComplexMatrix& s, const Tolerance& tol) { return span_of(s, tol).basis(); },
          py::arg("span"), py::arg("tol") = Tolerance{});

    m.def("oblique_projection", [](const ComplexMatrix& range, const ComplexMatrix& null, const Tolerance& tol) {
        return oblique_projection(span_of(range, tol), span_of(null, tol), tol).matrix();
    }, py::arg("range_span"), py::arg("nullspace_span"), py::arg("tol") = Tolerance{});

    m.def("loewner_leq", [](const ComplexMatrix& x, const ComplexMatrix& y, const Tolerance& tol) {
        return loewner_leq(x, y, tol);
    }, py::arg("x"), py::arg("y"), py::arg("tol") = Tolerance{});

    m.def("schatten_norm", &schatten_norm, py::arg("x"), py::arg("p"));
    m.def("weighted_schatten_norm", [](const ComplexMatrix& x, double p, const ComplexMatrix& w) {
        return weighted_schatten_norm(x, p, PsdOperator(w));
    }, py::arg("x"), py::arg("p"), py::arg("w"));

    m.def("shorted_operator", [](const ComplexMatrix& w, const ComplexMatrix& s, const Tolerance& tol) {
        const ShortedResult r = shorted_operator(PsdOperator(w, tol), span_of(s, tol), tol);
        py::dict d;
        d["shorted"] = r.shorted.matrix();
        d["compression"] = r.compression.matrix();
        d["shorted_range"] = r.shorted_range.basis();
        d["shorted_nullspace"] = r.shorted_nullspace.basis();
        d["compression_nullspace"] = r.compression_nullspace.basis();
        return d;
    }, py::arg("w"), py::arg("s_span"), py::arg("tol") = Tolerance{});

    m.def("shorted_schur_oracle", [](const ComplexMatrix& w, const ComplexMatrix& s, const Tolerance& tol) {
        return shorted_schur_oracle(PsdOperator(w, tol), span_of(s, tol), tol);
    }, py::arg("w"), py::arg("s_span"), py::arg("tol") = Tolerance{});

    m.def("is_compatible", [](const ComplexMatrix& w, const ComplexMatrix& s, const Tolerance& tol) {
        const CompatibilityCertificate c = is_compatible(PsdOperator(w, tol), span_of(s, tol), tol);
        py::dict d;
        d["compatible"] = c.compatible;
        d["companion"] = c.companion.basis();
        d["canonical"] = projection(c.canonical);
        d["defect"] = c.defect.basis();
        d["direct_decomposition"] = c.direct_decomposition;
        d["margin"] = c.margin;
        return d;
    }, py::arg("w"), py::arg("s_span"), py::arg("tol") = Tolerance{});

    m.def("projection_set_member",
          [](const ComplexMatrix& q, const ComplexMatrix& w, const ComplexMatrix& s, const Tolerance& tol) {
              return projection_set_member(q, PsdOperator(w, tol), span_of(s, tol), tol);
          },
          py::arg("q"), py::arg("w"), py::arg("s_span"), py::arg("tol") = Tolerance{});

    m.def("leq_minus", [](const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
        return verdict(leq_minus(a, b, tol));
    }, py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{});

    m.def("leq_left_minus", [](const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
        return leq_left_minus(a, b, tol);
    }, py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{});

    m.def("leq_star", [](const std::string& variant, const ComplexMatrix& a, const ComplexMatrix& b,
                         const Tolerance& tol) { return verdict(leq_star(star_variant(variant), a, b, tol)); },
          py::arg("variant"), py::arg("a"), py::arg("b"), py::arg("tol") = Tolerance{});

    m.def("leq_weighted_star",
          [](const std::string& variant, const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& w,
             const Tolerance& tol) {
              return verdict(leq_weighted_star(weighted_variant(variant), a, b, PsdOperator(w, tol), tol));
          },
          py::arg("variant"), py::arg("a"), py::arg("b"), py::arg("w"), py::arg("tol") = Tolerance{});

    m.def("solve_operator_equation", [](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                                        const Tolerance& tol) { return solve_operator_equation(a, b, c, tol); },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("tol") = Tolerance{});

    m.def("w_inverse",
          [](const ComplexMatrix& a, const ComplexMatrix& w, std::optional<ComplexMatrix> b, const Tolerance& tol) {
              const ComplexMatrix rhs = b ? *b : ComplexMatrix::Identity(a.rows(), a.rows());
              const WInverseResult r = w_inverse(a, PsdOperator(w, tol), rhs, tol);
              py::dict d;
              d["solution"] = r.solution;
              d["normal_residual"] = r.normal_residual;
              d["achieved"] = r.achieved.matrix();
              d["is_minimum"] = r.is_minimum;
              d["consistent"] = r.consistent;
              d["free_dimension"] = r.free_dimension;
              return d;
          },
          py::arg("a"), py::arg("w"), py::arg("b") = py::none(), py::arg("tol") = Tolerance{});

    m.def("minimize_quadratic",
          [](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& w, int samples, std::uint64_t seed,
             const Tolerance& tol) {
              MinimizationOptions opts;
              opts.samples = samples;
              opts.seed = seed;
              const MinimizationReport r = minimize_quadratic(a, b, PsdOperator(w, tol), tol, opts);
              py::dict d;
              d["minimizer"] = r.minimizer;
              d["value"] = r.value.matrix();
              d["equals_shorted"] = r.equals_shorted;
              d["minus_lower_bound_checked"] = r.minus_lower_bound_checked;
              d["schatten_values"] = r.schatten_values;
              d["checks"] = checks(r.checks);
              return d;
          },
          py::arg("a"), py::arg("b"), py::arg("w"), py::arg("samples") = 20, py::arg("seed") = 0,
          py::arg("tol") = Tolerance{});

    m.def("verify", [](const std::string& suite, int n, int trials, std::uint64_t seed, const Tolerance& tol) {
        const Report r = run_suite(suite, n, trials, seed, tol);
        py::dict d;
        d["passed"] = r.passed();
        d["checks"] = checks(r);
        return d;
    }, py::arg("suite"), py::arg("n") = 6, py::arg("trials") = 20, py::arg("seed") = 0,
          py::arg("tol") = Tolerance{});

    m.def("suite_names", &suite_names);

    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "shortcalc");
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
