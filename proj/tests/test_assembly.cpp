#include <doctest.h>

#include <cmath>

#include "iga/assembly.hpp"
#include "iga/bc.hpp"
#include "iga/refine.hpp"
#include "iga/solver.hpp"
#include "test_util.hpp"

using namespace iga;
using namespace iga::testing;

namespace {

// Independent Q4 oracle: classical bilinear Lagrange element on the unit
// square, 2x2 Gauss, no spline machinery involved.
DenseMatrix q4_stiffness_unit_square(const DenseMatrix& D) {
    DenseMatrix K(8, 8);
    const double g = 1.0 / std::sqrt(3.0);
    const double gp[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
    // tensor-product node order (0,0),(1,0),(0,1),(1,1); parent coords
    const double xn[4] = {-1, 1, -1, 1}, yn[4] = {-1, -1, 1, 1};
    for (auto& q : gp) {
        double dNdx[4], dNdy[4];
        for (int a = 0; a < 4; ++a) {
            // d/dxi, d/deta of N_a = (1+xi xn)(1+eta yn)/4, then J = I/2
            dNdx[a] = 0.25 * xn[a] * (1 + q[1] * yn[a]) * 2.0;
            dNdy[a] = 0.25 * yn[a] * (1 + q[0] * xn[a]) * 2.0;
        }
        DenseMatrix B(3, 8);
        for (int a = 0; a < 4; ++a) {
            B(0, 2 * a) = dNdx[a];
            B(1, 2 * a + 1) = dNdy[a];
            B(2, 2 * a) = dNdy[a];
            B(2, 2 * a + 1) = dNdx[a];
        }
        accumulate_AtBA(B, D, 0.25, K);  // detJ = 1/4, unit weights
    }
    return K;
}

int kernel_dimension(const SparseMatrix& K) {
    const std::vector<double> ev = symmetric_eigenvalues(K.dense());
    const double scale = std::fabs(ev.back());
    int dim = 0;
    for (double l : ev)
        if (std::fabs(l) < 1e-10 * scale) ++dim;
    return dim;
}

}  // namespace

TEST_CASE("elasticity matrices") {
    const DenseMatrix D = elasticity_D({1.0, 0.0, ElasticityMode::PlaneStress});
    CHECK(D(0, 0) == doctest::Approx(1.0));
    CHECK(D(1, 1) == doctest::Approx(1.0));
    CHECK(D(2, 2) == doctest::Approx(0.5));
    CHECK(D(0, 1) == doctest::Approx(0.0));

    const DenseMatrix Ds = elasticity_D({1.0, 0.25, ElasticityMode::PlaneStress});
    const DenseMatrix De = elasticity_D({1.0, 0.25, ElasticityMode::PlaneStrain});
    CHECK(std::fabs(Ds(0, 0) - De(0, 0)) > 1e-3);

    // 3D matrix in Lame form
    const double E = 7.0, nu = 0.3;
    const DenseMatrix D3 = elasticity_D({E, nu, ElasticityMode::Solid3D});
    const double lam = E * nu / ((1 + nu) * (1 - 2 * nu)), mu = E / (2 * (1 + nu));
    CHECK(D3(0, 0) == doctest::Approx(lam + 2 * mu));
    CHECK(D3(0, 1) == doctest::Approx(lam));
    CHECK(D3(3, 3) == doctest::Approx(mu));
    CHECK_THROWS_AS(elasticity_D({-1.0, 0.3, ElasticityMode::Solid3D}), std::invalid_argument);
}

TEST_CASE("1D Poisson assembly") {
    // two linear elements on (0,1): K = 2 * tridiag(-1, 2, -1)
    const NurbsPatch patch = line_patch(0.0, 1.0, 1, 2);
    const IgaMesh mesh = generate_mesh(patch);
    AssembledSystem sys = assemble_poisson_1d(patch, mesh, [](double) { return 0.0; });
    sys.finalize();
    CHECK(sys.K.get(0, 0) == doctest::Approx(2.0));
    CHECK(sys.K.get(1, 1) == doctest::Approx(4.0));
    CHECK(sys.K.get(0, 1) == doctest::Approx(-2.0));
    CHECK(sys.K.get(1, 2) == doctest::Approx(-2.0));
    CHECK(sys.K.get(0, 2) == doctest::Approx(0.0));

    // interior row sums vanish (constants in the kernel)
    const NurbsPatch q = line_patch(0.0, 1.0, 2, 5);
    const IgaMesh qm = generate_mesh(q);
    AssembledSystem qs = assemble_poisson_1d(q, qm, [](double) { return 0.0; });
    qs.finalize();
    for (int i = 0; i < qs.n_dof; ++i) {
        double s = 0.0;
        for (int j = 0; j < qs.n_dof; ++j) s += qs.K.get(i, j);
        CHECK(std::fabs(s) < 1e-12);
    }
    CHECK(kernel_dimension(qs.K) == 1);
}

TEST_CASE("1D Poisson: cubic solution reproduced exactly for p >= 3") {
    for (int p : {3, 4}) {
        const NurbsPatch patch = line_patch(0.0, 1.0, p, 4);
        const IgaMesh mesh = generate_mesh(patch);
        AssembledSystem sys = assemble_poisson_1d(patch, mesh, [](double x) { return x; });
        apply_direct(sys, {0, mesh.n_np - 1}, {0.0, 0.0});
        const SolveReport rep = solve(sys);
        // u(x) = -x^3/6 + x/6 at the knot images
        for (double x : {0.25, 0.5, 0.75}) {
            // evaluate the solution field at parametric x (affine map)
            const BasisDers bd = patch.basis_ders({x, 0, 0}, 0);
            const auto act = patch.active_controls(bd.span);
            double u = 0.0;
            for (size_t a = 0; a < act.size(); ++a) u += bd.R[a] * rep.solution[act[a]];
            CHECK(std::fabs(u - (-x * x * x / 6 + x / 6)) < 1e-12);
        }
    }
}

TEST_CASE("single bilinear element matches the Q4 oracle") {
    const MaterialModel mat{1.0, 0.0, ElasticityMode::PlaneStress};
    const NurbsPatch sq = unit_square();
    const IgaMesh mesh = generate_mesh(sq);
    AssembledSystem sys = assemble_elasticity(sq, mesh, mat);
    sys.finalize();
    const DenseMatrix Kq4 = q4_stiffness_unit_square(elasticity_D(mat));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(sys.K.get(i, j) == doctest::Approx(Kq4(i, j)).epsilon(1e-12));
}

TEST_CASE("rigid modes and kernel dimensions") {
    const MaterialModel mat{1.0, 0.3, ElasticityMode::PlaneStress};
    const NurbsPatch sq = rectangle_patch(2.0, 1.0, 2, 2, 2, 2);
    const IgaMesh mesh = generate_mesh(sq);
    AssembledSystem sys = assemble_elasticity(sq, mesh, mat);
    sys.finalize();

    // rigid translation: K u = 0
    std::vector<double> u(sys.n_dof, 0.0), Ku;
    for (int A = 0; A < mesh.n_np; ++A) u[2 * A] = 1.0;
    sys.K.multiply(u, Ku);
    for (double v : Ku) CHECK(std::fabs(v) < 1e-12);

    CHECK(kernel_dimension(sys.K) == 3);
    CHECK(sys.K.asymmetry() / sys.K.max_abs() < 1e-12);

    // 3D: kernel of dimension 6
    const MaterialModel m3{1.0, 0.3, ElasticityMode::Solid3D};
    const NurbsPatch box = box_patch(1, 1, 1, 1, 1, 1, 2, 1, 1);
    const IgaMesh bm = generate_mesh(box);
    AssembledSystem bs = assemble_elasticity(box, bm, m3);
    bs.finalize();
    REQUIRE(bs.n_dof <= 200);
    CHECK(kernel_dimension(bs.K) == 6);
}

TEST_CASE("linear patch test on a distorted quadratic patch") {
    // distort interior control points; boundary values of the exact linear
    // field are imposed directly at the control points (linear precision)
    NurbsPatch base = rectangle_patch(1.0, 1.0, 2, 2, 3, 3);
    ControlNet net = base.net();
    const int n = net.dims[0], m = net.dims[1];
    for (int j = 1; j < m - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            net.points[i + n * j].x += uniform(-0.03, 0.03);
            net.points[i + n * j].y += uniform(-0.03, 0.03);
        }
    const NurbsPatch patch({base.kv(0), base.kv(1)}, net, 2);
    const IgaMesh mesh = generate_mesh(patch);
    const MaterialModel mat{100.0, 0.3, ElasticityMode::PlaneStress};
    AssembledSystem sys = assemble_elasticity(patch, mesh, mat);

    const auto exact = [](const Vec3& x) {
        return Vec3{0.003 * x.x + 0.001 * x.y, -0.002 * x.x + 0.004 * x.y, 0};
    };
    std::vector<int> dofs;
    std::vector<double> vals;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            if (i > 0 && i < n - 1 && j > 0 && j < m - 1) continue;
            const int A = i + n * j;
            const Vec3 u = exact(net.points[A]);
            dofs.push_back(2 * A);
            vals.push_back(u.x);
            dofs.push_back(2 * A + 1);
            vals.push_back(u.y);
        }
    apply_direct(sys, dofs, vals);
    const SolveReport rep = solve(sys);

    // stresses from the exact linear field
    const DenseMatrix D = elasticity_D(mat);
    const double exx = 0.003, eyy = 0.004, gxy = 0.001 - 0.002;
    const double sxx = D(0, 0) * exx + D(0, 1) * eyy;
    const double syy = D(1, 0) * exx + D(1, 1) * eyy;
    const double sxy = D(2, 2) * gxy;
    for (int e = 0; e < mesh.n_el; ++e) {
        const MappedPoint mp = map_point(patch, mesh, e, {0.21, -0.4, 0});
        DenseMatrix B;
        strain_displacement(mp, 2, B);
        double strain[3] = {0, 0, 0};
        const auto& conn = mesh.element[e];
        for (size_t a = 0; a < conn.size(); ++a)
            for (int c = 0; c < 2; ++c)
                for (int r = 0; r < 3; ++r)
                    strain[r] += B(r, 2 * int(a) + c) * rep.solution[2 * conn[a] + c];
        const double s0 = D(0, 0) * strain[0] + D(0, 1) * strain[1];
        const double s1 = D(1, 0) * strain[0] + D(1, 1) * strain[1];
        const double s2 = D(2, 2) * strain[2];
        CHECK(std::fabs(s0 - sxx) < 1e-8 * mat.E);
        CHECK(std::fabs(s1 - syy) < 1e-8 * mat.E);
        CHECK(std::fabs(s2 - sxy) < 1e-8 * mat.E);
    }
}

TEST_CASE("constant body force load sums to b * |Omega|") {
    const NurbsPatch ann = refine_uniform(quarter_annulus(0.3, 0.5), 1);
    const IgaMesh mesh = generate_mesh(ann);
    AssembledSystem sys;
    sys.init(2 * mesh.n_np);
    assemble_body_force(ann, mesh, [](const Vec3&) { return Vec3{2.0, -1.0, 0}; }, sys, 6);
    const double area = M_PI * (0.25 - 0.09) / 4.0;
    double fx = 0, fy = 0;
    for (int A = 0; A < mesh.n_np; ++A) {
        fx += sys.F[2 * A];
        fy += sys.F[2 * A + 1];
    }
    CHECK(std::fabs(fx - 2.0 * area) < 1e-10);
    CHECK(std::fabs(fy + 1.0 * area) < 1e-10);
}

TEST_CASE("traction assembly") {
    // constant unit normal traction on a straight edge of length 2
    const NurbsPatch rect = rectangle_patch(3.0, 2.0, 2, 2, 3, 2);
    const BoundaryMesh right = extract_boundary(rect, 1);
    AssembledSystem sys;
    sys.init(2 * rect.num_controls());
    assemble_traction(right, [](const Vec3&) { return Vec3{1.0, 0, 0}; }, sys);
    double fx = 0.0, fy = 0.0;
    for (int A = 0; A < rect.num_controls(); ++A) {
        fx += sys.F[2 * A];
        fy += sys.F[2 * A + 1];
    }
    CHECK(fx == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fy == doctest::Approx(0.0));
    // only boundary control points receive load
    for (int A = 0; A < rect.num_controls(); ++A)
        if (std::find(right.control_map.begin(), right.control_map.end(), A) ==
            right.control_map.end())
            CHECK(sys.F[2 * A] == 0.0);

    // zero traction keeps the vector zero
    AssembledSystem zero;
    zero.init(2 * rect.num_controls());
    assemble_traction(right, [](const Vec3&) { return Vec3{0, 0, 0}; }, zero);
    for (double v : zero.F) CHECK(v == 0.0);
}

TEST_CASE("stiffness symmetry across assembled systems") {
    const MaterialModel mat{1000.0, 0.3, ElasticityMode::PlaneStress};
    for (int levels = 0; levels < 2; ++levels) {
        const NurbsPatch patch = refine_uniform(plate_with_hole(4.0, 1.0), levels + 1);
        const IgaMesh mesh = generate_mesh(patch);
        AssembledSystem sys = assemble_elasticity(patch, mesh, mat);
        sys.finalize();
        CHECK(sys.K.asymmetry() / sys.K.max_abs() < 1e-12);
    }
}

TEST_CASE("strain energy grows monotonically under h-refinement") {
    // fixed exact-traction loading on the plate-with-hole geometry; nested
    // spline spaces make the load-controlled strain energy increase toward
    // the exact value
    const MaterialModel mat{1000.0, 0.3, ElasticityMode::PlaneStress};
    std::vector<double> energies;
    for (int levels : {1, 2, 3}) {
        const NurbsPatch patch = refine_uniform(plate_with_hole(4.0, 1.0), levels);
        const IgaMesh mesh = generate_mesh(patch);
        AssembledSystem sys = assemble_elasticity(patch, mesh, mat);
        const auto traction = [&](const Vec3& x) -> Vec3 {
            // far-field uniaxial tension as a fixed outer load
            const Vec3 n = std::fabs(x.x + 4.0) < 1e-8 ? Vec3{-1, 0, 0} : Vec3{0, 1, 0};
            return {1.0 * n.x, 0.0, 0};
        };
        assemble_traction(extract_boundary(patch, 3), traction, sys);
        std::vector<int> dofs;
        for (int A : extract_boundary(patch, 0).control_map) dofs.push_back(2 * A + 1);
        for (int A : extract_boundary(patch, 1).control_map) dofs.push_back(2 * A);
        apply_direct(sys, dofs, std::vector<double>(dofs.size(), 0.0));
        const auto u = solve(sys).solution;
        // homogeneous essential BCs: strain energy equals half the external work
        double work = 0.0;
        for (int i = 0; i < sys.n_dof; ++i) work += sys.F_unconstrained[i] * u[i];
        energies.push_back(0.5 * work);
    }
    CHECK(energies[1] > energies[0]);
    CHECK(energies[2] > energies[1]);
}

TEST_CASE("threaded assembly matches serial bit for bit") {
    const NurbsPatch patch = refine_uniform(quarter_annulus(0.3, 0.5), 2);
    const IgaMesh mesh = generate_mesh(patch);
    const MaterialModel mat{10.0, 0.25, ElasticityMode::PlaneStress};
    AssembledSystem serial = assemble_elasticity(patch, mesh, mat);
    setenv("IGACORE_THREADS", "4", 1);
    AssembledSystem threaded = assemble_elasticity(patch, mesh, mat);
    unsetenv("IGACORE_THREADS");
    REQUIRE(serial.triplets.size() == threaded.triplets.size());
    for (size_t i = 0; i < serial.triplets.size(); ++i) {
        CHECK(serial.triplets[i].r == threaded.triplets[i].r);
        CHECK(serial.triplets[i].c == threaded.triplets[i].c);
        CHECK(serial.triplets[i].v == threaded.triplets[i].v);
    }
}
