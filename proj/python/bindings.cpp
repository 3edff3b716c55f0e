#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odolab/analysis.hpp"
#include "odolab/errors.hpp"
#include "odolab/gallery.hpp"
#include "odolab/operator.hpp"
#include "odolab/symbol.hpp"
#include "odolab/verify.hpp"

namespace py = pybind11;
using namespace odolab;
using ojson = nlohmann::ordered_json;

namespace {

// JSON documents cross the boundary as Python objects via the json module.
py::object to_py(const ojson& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

ojson from_py(const py::object& o) {
    return ojson::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

AnalysisOptions options(int depth, int chain_depth, double tol_exact, double tol_rank) {
    AnalysisOptions a;
    a.depth = depth;
    a.chain_depth = chain_depth;
    a.tol.eps_exact = tol_exact;
    a.tol.eps_rank = tol_rank;
    a.tol.validate();
    return a;
}

py::tuple sparse_parts(const FockOperator& op) {
    std::vector<Eigen::Index> rows, cols;
    std::vector<cplx> vals;
    for (Eigen::Index j = 0; j < op.matrix.outerSize(); ++j) {
        for (SparseCMatrix::InnerIterator it(op.matrix, j); it; ++it) {
            rows.push_back(it.row());
            cols.push_back(it.col());
            vals.push_back(it.value());
        }
    }
    return py::make_tuple(rows, cols, vals, py::make_tuple(op.matrix.rows(), op.matrix.cols()));
}

}  // namespace

PYBIND11_MODULE(_odolab, m) {
    m.doc() = "Odometer maps W_L on truncated Fock spaces";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", error.ptr());
    auto pre = py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
    py::register_exception<NotIsometric>(m, "NotIsometric", pre.ptr());
    py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());
    py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());
    auto cert = py::register_exception<CertificateError>(m, "CertificateError", error.ptr());
    py::register_exception<BoundaryZeroSuspected>(m, "BoundaryZeroSuspected", cert.ptr());
    py::register_exception<RangeNotContained>(m, "RangeNotContained", error.ptr());

    py::class_<Symbol>(m, "Symbol")
        .def(py::init<int, int>(), py::arg("n"), py::arg("dim"))
        .def("add", [](Symbol& s, const std::vector<int>& word, int slot, int q, cplx v) {
            s.add(Word(word), slot, q, v);
        }, py::arg("word"), py::arg("s"), py::arg("q"), py::arg("value"))
        .def_property_readonly("n", &Symbol::n)
        .def_property_readonly("dim", &Symbol::dim)
        .def_property_readonly("depth", &Symbol::depth)
        .def_readwrite("tail_bound", &Symbol::tail_bound)
        .def("as_matrix", [](const Symbol& s) { return s.as_matrix(); })
        .def("to_json", [](const Symbol& s) { return symbol_to_json(s); })
        .def_static("from_json", &symbol_from_json)
        .def_static("load", &load_symbol)
        .def("theta", [](const Symbol& s) { return theta(s).coefficients; },
             "coefficients L_0..L_K of the analytic symbol");

    m.def("gallery_names", &gallery_names);
    m.def("gallery_build", [](const std::string& name, const py::dict& params) {
        const GalleryEntry e = gallery_build(name, from_py(params));
        return py::make_tuple(e.symbol, to_py(e.expected));
    }, py::arg("name"), py::arg("params") = py::dict(), "returns (symbol, expected values)");

    m.def("classify", [](const Symbol& s, int depth, int chain_depth, double te, double tr) {
        return to_py(to_json(classify(s, options(depth, chain_depth, te, tr))));
    }, py::arg("symbol"), py::arg("depth") = -1, py::arg("chain_depth") = -1, py::arg("tol_exact") = 1e-10,
       py::arg("tol_rank") = 1e-8);
    m.def("defect", [](const Symbol& s, int depth, int chain_depth, double te, double tr) {
        return to_py(to_json(defect(s, options(depth, chain_depth, te, tr))));
    }, py::arg("symbol"), py::arg("depth") = -1, py::arg("chain_depth") = -1, py::arg("tol_exact") = 1e-10,
       py::arg("tol_rank") = 1e-8);
    m.def("norm_report", [](const Symbol& s, int depth) {
        return to_py(to_json(norm_report(s, options(depth, -1, 1e-10, 1e-8))));
    }, py::arg("symbol"), py::arg("depth") = -1);
    m.def("douglas_factor", [](const Symbol& l1, const Symbol& l2, int depth) {
        return to_py(to_json(douglas_factor(l1, l2, options(depth, -1, 1e-10, 1e-8))));
    }, py::arg("l1"), py::arg("l2"), py::arg("depth") = -1);
    m.def("coburn_bound", [](const Symbol& s, std::optional<std::vector<cplx>> lambdas, int depth) {
        return to_py(to_json(coburn_bound(s, lambdas.value_or(default_coburn_lambdas()), options(depth, -1, 1e-10, 1e-8))));
    }, py::arg("symbol"), py::arg("lambdas") = py::none(), py::arg("depth") = -1);
    m.def("hyponormality_probe", [](const Symbol& s, int depth) {
        return to_py(to_json(hyponormality_probe(s, options(depth, -1, 1e-10, 1e-8))));
    }, py::arg("symbol"), py::arg("depth") = -1);

    m.def("build_wl", [](const Symbol& s, int depth) { return sparse_parts(build_wl(s, depth)); },
          py::arg("symbol"), py::arg("depth"), "(rows, cols, values, shape) of the depth-D truncation");
    m.def("build_wl_adjoint", [](const Symbol& s, int depth) { return sparse_parts(build_wl_adjoint(s, depth)); },
          py::arg("symbol"), py::arg("depth"));
    m.def("toeplitz_truncation", [](const Symbol& s, std::size_t blocks) { return toeplitz_truncation(theta(s), blocks); },
          py::arg("symbol"), py::arg("blocks"));
    m.def("is_inner", [](const Symbol& s, double tol) {
        const InnerVerdict v = is_inner_exact(theta(s), tol);
        return py::make_tuple(v.inner, v.deviation);
    }, py::arg("symbol"), py::arg("tol") = 1e-10);

    m.def("verify", [](const std::string& suite, std::uint64_t seed, int count, bool inject) {
        VerifyOptions v;
        v.seed = seed;
        v.random_count = count;
        v.inject_fault = inject;
        return to_py(verify_summary(run_verify(suite, v)));
    }, py::arg("suite") = "all", py::arg("seed") = 7, py::arg("count") = 50, py::arg("inject_fault") = false);
}
