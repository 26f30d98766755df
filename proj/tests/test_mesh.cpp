#include <doctest.h>

#include <set>
#include <sstream>

#include "iga/mesh.hpp"
#include "iga/refine.hpp"
#include "test_util.hpp"

using namespace iga;
using namespace iga::testing;

TEST_CASE("build_connectivity matches the printed tables") {
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    const DirConnectivity dc = build_connectivity(kv);
    REQUIRE(dc.conn.size() == 2);
    CHECK(dc.conn[0] == std::vector<int>{0, 1, 2});  // 1-based: 1 2 3
    CHECK(dc.conn[1] == std::vector<int>{1, 2, 3});  // 1-based: 2 3 4
    CHECK(dc.ranges[0] == std::array<double, 2>{0.0, 0.5});
    CHECK(dc.ranges[1] == std::array<double, 2>{0.5, 1.0});

    const DirConnectivity one = build_connectivity(KnotVector(2, {0, 0, 0, 1, 1, 1}));
    REQUIRE(one.conn.size() == 1);
    CHECK(one.conn[0] == std::vector<int>{0, 1, 2});
    CHECK(one.ranges[0] == std::array<double, 2>{0.0, 1.0});

    // repeated interior knot: zero-length spans never become elements
    const DirConnectivity dc2 = build_connectivity(KnotVector(2, {0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5}));
    CHECK(dc2.conn.size() == 5);
}

TEST_CASE("generate_mesh: bi-quadratic 2x2 example") {
    KnotVector k(2, {0, 0, 0, 0.5, 1, 1, 1});
    ControlNet net;
    net.dims = {4, 4, 1};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            net.points.push_back({k.greville(i), k.greville(j), 0});
            net.weights.push_back(1.0);
        }
    NurbsPatch patch({k, k}, std::move(net), 2);
    const IgaMesh mesh = generate_mesh(patch);

    CHECK(mesh.n_el == 4);
    CHECK(mesh.n_en == 9);
    CHECK(mesh.n_np == 16);
    // the paper's element matrix, 1-based rows [1 2 3 5 6 7 9 10 11] etc.
    CHECK(mesh.element[0] == std::vector<int>{0, 1, 2, 4, 5, 6, 8, 9, 10});
    CHECK(mesh.element[1] == std::vector<int>{1, 2, 3, 5, 6, 7, 9, 10, 11});
    CHECK(mesh.element[2] == std::vector<int>{4, 5, 6, 8, 9, 10, 12, 13, 14});
    CHECK(mesh.element[3] == std::vector<int>{5, 6, 7, 9, 10, 11, 13, 14, 15});

    std::ostringstream os;
    mesh.dump(os);
    CHECK(os.str().find("1 2 3 5 6 7 9 10 11") != std::string::npos);
}

TEST_CASE("generate_mesh: 1D quadratic and p=1/q=2 elasticity example") {
    const NurbsPatch curve = line_patch(0, 1, 2, 2);
    const IgaMesh cm = generate_mesh(curve);
    CHECK(cm.element[0] == std::vector<int>{0, 1, 2});  // IEN(:,1) = [1 2 3]
    CHECK(cm.element[1] == std::vector<int>{1, 2, 3});  // IEN(:,2) = [2 3 4]

    // knots Xi1 = {0,0,1,1}, Xi2 = {0,0,0,0.5,1,1,1}: IEN columns [1..6], [3..8]
    KnotVector ku(1, {0, 0, 1, 1});
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    ControlNet net;
    net.dims = {2, 4, 1};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 2; ++i) {
            net.points.push_back({double(i), kv.greville(j), 0});
            net.weights.push_back(1.0);
        }
    NurbsPatch patch({ku, kv}, std::move(net), 2);
    const IgaMesh mesh = generate_mesh(patch);
    REQUIRE(mesh.n_el == 2);
    CHECK(mesh.element[0] == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(mesh.element[1] == std::vector<int>{2, 3, 4, 5, 6, 7});

    const NurbsPatch sq = unit_square();
    const IgaMesh sm = generate_mesh(sq);
    CHECK(sm.element[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("element ranges tile the parameter domain") {
    for (const NurbsPatch& patch : property_patches()) {
        const IgaMesh mesh = generate_mesh(patch);
        double measure = 0.0, domain = 1.0;
        for (int e = 0; e < mesh.n_el; ++e) {
            double vol = 1.0;
            for (int d = 0; d < mesh.dim; ++d) {
                const auto r = mesh.range(e, d);
                CHECK(r[1] > r[0]);
                vol *= r[1] - r[0];
            }
            measure += vol;
        }
        for (int d = 0; d < mesh.dim; ++d)
            domain *= patch.kv(d).back() - patch.kv(d).front();
        CHECK(measure == doctest::Approx(domain).epsilon(1e-12));
    }
}

TEST_CASE("tensor consistency by brute-force enumeration") {
    const NurbsPatch box = box_patch(1, 1, 1, 2, 1, 2, 3, 2, 2);
    const IgaMesh mesh = generate_mesh(box);
    const auto& dims = box.net().dims;
    // every element's control points recomputed from spans directly
    for (int e = 0; e < mesh.n_el; ++e) {
        std::set<int> expected;
        std::array<int, 3> spans;
        for (int d = 0; d < 3; ++d) {
            const auto r = mesh.range(e, d);
            spans[d] = box.kv(d).find_span(0.5 * (r[0] + r[1]));
        }
        for (int k = 0; k <= box.degree(2); ++k)
            for (int j = 0; j <= box.degree(1); ++j)
                for (int i = 0; i <= box.degree(0); ++i)
                    expected.insert((spans[0] - box.degree(0) + i) +
                                    dims[0] * ((spans[1] - box.degree(1) + j) +
                                               dims[1] * (spans[2] - box.degree(2) + k)));
        const std::set<int> actual(mesh.element[e].begin(), mesh.element[e].end());
        CHECK(actual == expected);
        CHECK(int(mesh.element[e].size()) == mesh.n_en);
    }
}

TEST_CASE("extract_boundary") {
    // right edge of a p=1 x q=2 strip: 3 control points, 2 linear elements
    KnotVector ku(1, {0, 0, 1, 1});
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    ControlNet net;
    net.dims = {2, 4, 1};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 2; ++i) {
            net.points.push_back({double(i), kv.greville(j), 0});
            net.weights.push_back(1.0);
        }
    NurbsPatch patch({ku, kv}, std::move(net), 2);

    SUBCASE("degenerate-direction edge") {
        // face 1 = upper xi edge; boundary runs along eta with q=2
        const BoundaryMesh b = extract_boundary(patch, 1);
        CHECK(b.patch.dim() == 1);
        CHECK(b.patch.degree(0) == 2);
        CHECK(b.mesh.n_el == 2);
        CHECK(b.control_map == std::vector<int>{1, 3, 5, 7});
    }
    SUBCASE("linear boundary mesh of the Fig-fext kind") {
        // a 2x2-element bilinear patch: an edge has 3 control points and
        // 2 linear boundary elements
        const NurbsPatch sq = rectangle_patch(1, 1, 1, 1, 2, 2);
        const BoundaryMesh b = extract_boundary(sq, 1);
        CHECK(b.mesh.n_el == 2);
        CHECK(b.mesh.n_np == 3);
        // subset property: boundary indices are patch indices
        for (int A : b.control_map) CHECK(A < sq.num_controls());
    }
    SUBCASE("restriction agrees with the surface") {
        const NurbsPatch ann = quarter_annulus(0.3, 0.5);
        const BoundaryMesh top = extract_boundary(ann, 3);  // eta = 1
        for (int s = 0; s <= 20; ++s) {
            const double t = s / 20.0;
            const Vec3 xc = top.patch.eval_point({t, 0, 0});
            const Vec3 xs = ann.eval_point({t, 1.0, 0});
            CHECK(norm(xc - xs) < 1e-12);
        }
    }
    SUBCASE("3D face is a surface mesh with n*m control points") {
        const NurbsPatch box = box_patch(1, 2, 3, 2, 1, 1, 2, 2, 2);
        const BoundaryMesh f = extract_boundary(box, 4);  // zeta = 0
        CHECK(f.patch.dim() == 2);
        CHECK(f.mesh.n_np == box.net().dims[0] * box.net().dims[1]);
        std::vector<int> expected;
        for (int a = 0; a < f.mesh.n_np; ++a) expected.push_back(a);
        CHECK(f.control_map == expected);
    }
    CHECK_THROWS_AS(extract_boundary(patch, 7), std::invalid_argument);
}

TEST_CASE("build_vis_mesh") {
    // 2x2 bi-quadratic: 9 nodes, 4 quads
    NurbsPatch sq = rectangle_patch(1, 1, 2, 2, 2, 2);
    IgaMesh mesh = generate_mesh(sq);
    VisualizationMesh vis = build_vis_mesh(mesh, sq);
    CHECK(vis.nodes.size() == 9);
    CHECK(vis.cells.size() == 4);
    CHECK(vis.vtk_cell_type == 9);

    // identity patch: nodes at the unique-knot tensor grid
    for (size_t n = 0; n < vis.nodes.size(); ++n) {
        CHECK(vis.nodes[n].x == doctest::Approx(vis.param[n].x).epsilon(1e-14));
        CHECK(vis.nodes[n].y == doctest::Approx(vis.param[n].y).epsilon(1e-14));
    }

    // quarter annulus: all nodes between the radii
    const NurbsPatch ann = refine_uniform(quarter_annulus(0.3, 0.5), 2);
    const IgaMesh am = generate_mesh(ann);
    const VisualizationMesh av = build_vis_mesh(am, ann);
    CHECK(av.cells.size() == size_t(am.n_el));
    for (const Vec3& x : av.nodes) {
        const double r = norm(x);
        CHECK(r >= 0.3 - 1e-12);
        CHECK(r <= 0.5 + 1e-12);
    }

    // 3D: brick cells
    const NurbsPatch box = box_patch(1, 1, 1, 1, 1, 1, 2, 2, 2);
    const IgaMesh bm = generate_mesh(box);
    const VisualizationMesh bv = build_vis_mesh(bm, box);
    CHECK(bv.vtk_cell_type == 12);
    CHECK(bv.nodes.size() == 27);
    CHECK(bv.cells.size() == 8);
}
