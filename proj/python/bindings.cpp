#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iga/cases.hpp"
#include "iga/extraction.hpp"
#include "iga/geometry.hpp"
#include "iga/mesh.hpp"
#include "iga/quadrature.hpp"
#include "iga/refine.hpp"
#include "iga/verify.hpp"

namespace py = pybind11;
using namespace iga;

namespace {

std::vector<double> py_eval_point(const NurbsPatch& p, std::vector<double> xi) {
    xi.resize(3, 0.0);
    const Vec3 x = p.eval_point({xi[0], xi[1], xi[2]});
    std::vector<double> out(p.spatial_dim());
    for (int c = 0; c < p.spatial_dim(); ++c) out[c] = x[c];
    return out;
}

std::vector<double> py_basis(const NurbsPatch& p, std::vector<double> xi) {
    xi.resize(3, 0.0);
    return p.basis_ders({xi[0], xi[1], xi[2]}, 0).R;
}

}  // namespace

PYBIND11_MODULE(pyigacore, m) {
    m.doc() = "isogeometric analysis kernel";

    py::class_<KnotVector>(m, "KnotVector")
        .def(py::init<int, std::vector<double>>(), py::arg("degree"), py::arg("knots"))
        .def_property_readonly("degree", &KnotVector::degree)
        .def_property_readonly("knots", &KnotVector::knots)
        .def("find_span", &KnotVector::find_span)
        .def("basis", py::overload_cast<double>(&KnotVector::basis, py::const_))
        .def("num_spans", &KnotVector::num_spans)
        .def("is_open", &KnotVector::is_open);

    py::class_<NurbsPatch>(m, "NurbsPatch")
        .def_static("from_json", &NurbsPatch::from_json)
        .def("to_json", &NurbsPatch::to_json)
        .def_property_readonly("dim", &NurbsPatch::dim)
        .def_property_readonly("spatial_dim", &NurbsPatch::spatial_dim)
        .def("degree", &NurbsPatch::degree)
        .def("num_controls", &NurbsPatch::num_controls)
        .def("eval_point", &py_eval_point, py::arg("xi"))
        .def("basis", &py_basis, py::arg("xi"));

    m.def("line_patch", &line_patch);
    m.def("rectangle_patch", &rectangle_patch);
    m.def("quarter_circle_arc", &quarter_circle_arc);
    m.def("quarter_annulus", &quarter_annulus);
    m.def("plate_with_hole", &plate_with_hole);

    m.def("insert_knot", &insert_knot, py::arg("patch"), py::arg("direction"),
          py::arg("knot"), py::arg("times") = 1);
    m.def("elevate_degree", &elevate_degree, py::arg("patch"), py::arg("direction"),
          py::arg("raise") = 1);
    m.def("refine_uniform", &refine_uniform, py::arg("patch"), py::arg("levels") = 1);

    m.def("bezier_extraction", [](const KnotVector& kv) {
        std::vector<std::vector<std::vector<double>>> out;
        for (const DenseMatrix& C : bezier_extract(kv)) {
            std::vector<std::vector<double>> M(C.rows(), std::vector<double>(C.cols()));
            for (int i = 0; i < C.rows(); ++i)
                for (int j = 0; j < C.cols(); ++j) M[i][j] = C(i, j);
            out.push_back(std::move(M));
        }
        return out;
    });
    m.def("bernstein", &bernstein);

    m.def("gauss_points", [](int order) {
        std::vector<double> p, w;
        gauss_legendre_1d(order, p, w);
        return py::make_tuple(p, w);
    });

    m.def("element_count", [](const NurbsPatch& p) { return generate_mesh(p).n_el; });

    m.def("case_catalog", &case_catalog);
    m.def("builtin_config", &builtin_config);
    m.def("run_case", [](const std::string& config, const std::string& outdir) {
        const CaseResult res = run_case(config, outdir);
        py::list rows;
        for (const MetricRow& r : res.rows) {
            py::dict d;
            d["case"] = r.case_name;
            d["mesh"] = r.mesh;
            d["p"] = r.p;
            d["dofs"] = r.dofs;
            d["metric"] = r.metric;
            d["value"] = r.value;
            d["ref"] = r.ref;
            d["rel_error"] = r.rel_error;
            rows.append(d);
        }
        return rows;
    }, py::arg("config"), py::arg("outdir") = "");

    m.def("verify", [](const std::string& outdir) {
        py::list out;
        for (const CriterionResult& r : run_acceptance(outdir)) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            out.append(d);
        }
        return out;
    }, py::arg("outdir") = "");
}
