#include <doctest.h>

#include <cmath>

#include "iga/extraction.hpp"
#include "iga/refine.hpp"
#include "test_util.hpp"

using namespace iga;
using namespace iga::testing;

namespace {

double max_point_distance(const NurbsPatch& a, const NurbsPatch& b, int samples = 100) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vec3 xi;
        for (int d = 0; d < a.dim(); ++d)
            xi[d] = uniform(a.kv(d).front(), a.kv(d).back());
        worst = std::max(worst, norm(a.eval_point(xi) - b.eval_point(xi)));
    }
    return worst;
}

}  // namespace

TEST_CASE("find_span conventions") {
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    CHECK(kv.find_span(0.3) == 2);
    CHECK(kv.find_span(0.7) == 3);
    CHECK(kv.find_span(1.0) == 3);  // clamped into the last non-degenerate span
    CHECK(kv.find_span(0.0) == 2);

    KnotVector lin(1, {0, 0, 1, 1});
    CHECK(lin.find_span(0.0) == 1);
    CHECK_THROWS_AS(kv.find_span(1.5), std::domain_error);
    CHECK_THROWS_AS(kv.find_span(-0.1), std::domain_error);
}

TEST_CASE("bspline basis values") {
    KnotVector bern(2, {0, 0, 0, 1, 1, 1});
    auto N = bern.basis(0.5);
    CHECK(N[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(N[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(N[2] == doctest::Approx(0.25).epsilon(1e-14));

    KnotVector hat(1, {0, 0, 1, 1});
    N = hat.basis(0.3);
    CHECK(N[0] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(N[1] == doctest::Approx(0.3).epsilon(1e-14));

    // non-uniform open vector with a repeated interior knot, against the
    // direct recursion
    KnotVector kv(2, {0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5});
    const double xi = 2.5;
    const int s = kv.find_span(xi);
    N = kv.basis(xi);
    for (int a = 0; a <= 2; ++a)
        CHECK(N[a] ==
              doctest::Approx(cox_de_boor(kv.knots(), s - 2 + a, 2, xi)).epsilon(1e-13));
}

TEST_CASE("bspline derivatives") {
    KnotVector hat(1, {0, 0, 1, 1});
    std::vector<std::vector<double>> d;
    hat.basis_ders(0.5, 1, d);
    CHECK(d[1][0] == doctest::Approx(-1.0));
    CHECK(d[1][1] == doctest::Approx(1.0));

    KnotVector bern(2, {0, 0, 0, 1, 1, 1});
    bern.basis_ders(0.5, 2, d);
    CHECK(d[2][0] == doctest::Approx(2.0));
    CHECK(d[2][1] == doctest::Approx(-4.0));
    CHECK(d[2][2] == doctest::Approx(2.0));

    // derivative of the partition of unity vanishes
    KnotVector kv(3, {0, 0, 0, 0, 0.2, 0.5, 0.7, 1, 1, 1, 1});
    for (int rep = 0; rep < 20; ++rep) {
        kv.basis_ders(uniform(0.0, 1.0), 2, d);
        double s1 = 0, s2 = 0;
        for (double v : d[1]) s1 += v;
        for (double v : d[2]) s2 += v;
        CHECK(std::fabs(s1) < 1e-10);
        CHECK(std::fabs(s2) < 1e-9);
    }
    CHECK_THROWS_AS(hat.basis_ders(0.5, 2, d), std::invalid_argument);
}

TEST_CASE("derivatives vs finite differences across property patches") {
    for (const NurbsPatch& patch : property_patches()) {
        for (int rep = 0; rep < 50; ++rep) {
            const Vec3 xi = random_param(patch, 2e-3);
            const BasisDers bd = patch.basis_ders(xi, patch.dim() <= 2 ? 2 : 1);
            const double h = 1e-6;
            for (int d = 0; d < patch.dim(); ++d) {
                Vec3 xp = xi, xm = xi;
                xp[d] += h;
                xm[d] -= h;
                const BasisDers bp = patch.basis_ders(xp, 0);
                const BasisDers bm = patch.basis_ders(xm, 0);
                double scale = 0.0;
                for (size_t a = 0; a < bd.R.size(); ++a)
                    scale = std::max(scale, std::fabs(bd.dR(int(a), d)));
                for (size_t a = 0; a < bd.R.size(); ++a) {
                    const double fd = (bp.R[a] - bm.R[a]) / (2 * h);
                    CHECK(std::fabs(fd - bd.dR(int(a), d)) <= 1e-6 * std::max(1.0, scale));
                }
                if (patch.dim() <= 2 && patch.degree(d) >= 2) {
                    // second derivatives against the central difference of the
                    // first derivatives; a second difference of raw values at
                    // step 1e-6 would sit on the double-precision noise floor
                    const BasisDers bp1 = patch.basis_ders(xp, 1);
                    const BasisDers bm1 = patch.basis_ders(xm, 1);
                    double scale2 = 0.0;
                    for (size_t a = 0; a < bd.R.size(); ++a)
                        for (int c = 0; c < bd.d2R.cols(); ++c)
                            scale2 = std::max(scale2, std::fabs(bd.d2R(int(a), c)));
                    for (size_t a = 0; a < bd.R.size(); ++a) {
                        const double fd2 =
                            (bp1.dR(int(a), d) - bm1.dR(int(a), d)) / (2 * h);
                        CHECK(std::fabs(fd2 - bd.d2R(int(a), d)) <=
                              1e-4 * std::max(1.0, scale2));
                    }
                }
            }
        }
    }
}

TEST_CASE("mixed second parametric derivative") {
    const NurbsPatch patch = quarter_annulus(0.3, 0.5);
    const Vec3 xi{0.37, 0.61, 0};
    const BasisDers bd = patch.basis_ders(xi, 2);
    const double h = 1e-5;
    const BasisDers bpp = patch.basis_ders({xi.x + h, xi.y + h, 0}, 0);
    const BasisDers bpm = patch.basis_ders({xi.x + h, xi.y - h, 0}, 0);
    const BasisDers bmp = patch.basis_ders({xi.x - h, xi.y + h, 0}, 0);
    const BasisDers bmm = patch.basis_ders({xi.x - h, xi.y - h, 0}, 0);
    for (size_t a = 0; a < bd.R.size(); ++a) {
        const double fd = (bpp.R[a] - bpm.R[a] - bmp.R[a] + bmm.R[a]) / (4 * h * h);
        CHECK(bd.d2R(int(a), 2) == doctest::Approx(fd).epsilon(5e-5));
    }
}

TEST_CASE("partition of unity, non-negativity, local support") {
    const auto patches = property_patches();
    for (const NurbsPatch& patch : patches) {
        int expected = 1;
        for (int d = 0; d < patch.dim(); ++d) expected *= patch.degree(d) + 1;
        for (int rep = 0; rep < 500; ++rep) {
            const Vec3 xi = random_param(patch, 0.0);
            const BasisDers bd = patch.basis_ders(xi, 0);
            CHECK(int(bd.R.size()) == expected);
            double sum = 0.0;
            for (double v : bd.R) {
                CHECK(v >= -1e-14);
                sum += v;
            }
            CHECK(std::fabs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("continuity across interior knots") {
    // multiplicity m: the (p-m)-th derivative is continuous, the next jumps
    struct Case { int p; std::vector<double> U; double knot; int mult; };
    const std::vector<Case> cases = {
        {2, {0, 0, 0, 0.5, 1, 1, 1}, 0.5, 1},
        {3, {0, 0, 0, 0, 0.5, 0.5, 1, 1, 1, 1}, 0.5, 2},
        {3, {0, 0, 0, 0, 0.4, 1, 1, 1, 1}, 0.4, 1},
    };
    for (const auto& c : cases) {
        KnotVector kv(c.p, c.U);
        const double eps = 1e-9;
        std::vector<std::vector<double>> dm, dp;
        kv.basis_ders(c.knot - eps, c.p, dm);
        kv.basis_ders(c.knot + eps, c.p, dp);
        const int sm = kv.find_span(c.knot - eps), sp = kv.find_span(c.knot + eps);
        auto global = [&](const std::vector<std::vector<double>>& d, int span, int order,
                          int i) {
            const int a = i - (span - c.p);
            return (a >= 0 && a <= c.p) ? d[order][a] : 0.0;
        };
        const int smooth = c.p - c.mult;
        double jump_smooth = 0.0, jump_next = 0.0, scale_next = 0.0;
        for (int i = 0; i < kv.num_basis(); ++i) {
            jump_smooth = std::max(jump_smooth, std::fabs(global(dm, sm, smooth, i) -
                                                          global(dp, sp, smooth, i)));
            const double jm = global(dm, sm, smooth + 1, i);
            const double jp = global(dp, sp, smooth + 1, i);
            jump_next = std::max(jump_next, std::fabs(jm - jp));
            scale_next = std::max({scale_next, std::fabs(jm), std::fabs(jp)});
        }
        CHECK(jump_smooth < 1e-8 * std::max(1.0, scale_next));
        CHECK(jump_next > 1e-3 * std::max(1.0, scale_next));
    }
}

TEST_CASE("nurbs basis reduces to bspline for unit weights") {
    const NurbsPatch patch = rectangle_patch(2.0, 1.0, 2, 3, 3, 2);
    for (int rep = 0; rep < 10; ++rep) {
        const Vec3 xi = random_param(patch);
        const BasisDers bd = patch.basis_ders(xi, 1);
        // tensor product of univariate B-spline values
        std::vector<double> Nu = patch.kv(0).basis(xi.x);
        std::vector<double> Nv = patch.kv(1).basis(xi.y);
        int a = 0;
        for (size_t j = 0; j < Nv.size(); ++j)
            for (size_t i = 0; i < Nu.size(); ++i, ++a)
                CHECK(bd.R[a] == doctest::Approx(Nu[i] * Nv[j]).epsilon(1e-13));
    }
}

TEST_CASE("quarter circle: interpolation, point on circle") {
    const NurbsPatch arc = quarter_circle_arc();
    const BasisDers b0 = arc.basis_ders({0, 0, 0}, 0);
    CHECK(b0.R[0] == doctest::Approx(1.0));
    CHECK(b0.R[1] == doctest::Approx(0.0));
    CHECK(b0.R[2] == doctest::Approx(0.0));

    const Vec3 mid = arc.eval_point({0.5, 0, 0});
    CHECK(mid.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    CHECK(mid.y == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

    // W(0.5) = 0.25 + 0.5/sqrt(2) + 0.25; hand-evaluated rational basis
    const double W = 0.5 + 0.5 / std::sqrt(2.0);
    const BasisDers bm = arc.basis_ders({0.5, 0, 0}, 0);
    CHECK(bm.R[0] == doctest::Approx(0.25 / W).epsilon(1e-13));
    CHECK(bm.R[1] == doctest::Approx((0.5 / std::sqrt(2.0)) / W).epsilon(1e-13));

    for (int i = 0; i <= 100; ++i) {
        const Vec3 x = arc.eval_point({i / 100.0, 0, 0});
        CHECK(std::fabs(norm(x) - 1.0) < 1e-12);
    }

    const Vec3 start = arc.eval_point({0, 0, 0});
    CHECK(norm(start - Vec3{1, 0, 0}) < 1e-15);

    const NurbsPatch sq = unit_square();
    const Vec3 c = sq.eval_point({0.5, 0.5, 0});
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));
}

TEST_CASE("homogeneous coordinates round trip") {
    ControlNet net;
    net.dims = {2, 1, 1};
    net.points = {{2, 0, 0}, {1, 3, -1}};
    net.weights = {0.5, 2.0};
    const HomogeneousNet h = to_homogeneous(net);
    CHECK(h.points[0][0] == doctest::Approx(1.0));
    CHECK(h.points[0][1] == doctest::Approx(0.0));
    CHECK(h.points[0][3] == doctest::Approx(0.5));
    const ControlNet back = from_homogeneous(h);
    for (int a = 0; a < 2; ++a) {
        CHECK(norm(back.points[a] - net.points[a]) < 1e-14);
        CHECK(back.weights[a] == doctest::Approx(net.weights[a]).epsilon(1e-14));
    }
    net.weights[0] = -1.0;
    CHECK_THROWS_AS(to_homogeneous(net), std::invalid_argument);

    // unit weight appends 1 and keeps coordinates
    ControlNet unit;
    unit.dims = {1, 1, 1};
    unit.points = {{3, 4, 5}};
    unit.weights = {1.0};
    const auto hu = to_homogeneous(unit);
    CHECK(hu.points[0] == std::array<double, 4>{3, 4, 5, 1});
}

TEST_CASE("knot insertion") {
    // single insertion into the Bernstein segment
    NurbsPatch curve = quarter_circle_arc();
    NurbsPatch refined = insert_knot(curve, 0, 0.5, 1);
    CHECK(refined.num_controls() == 4);
    CHECK(refined.kv(0).knots() == std::vector<double>{0, 0, 0, 0.5, 1, 1, 1});
    CHECK(max_point_distance(curve, refined) < 1e-12);

    // triple insertion into a cubic makes the basis C0 there
    NurbsPatch cub = line_patch(0.0, 1.0, 3, 2);
    NurbsPatch c0 = insert_knot(cub, 0, 0.25, 3);
    CHECK(c0.kv(0).multiplicity(0.25) == 3);
    CHECK(max_point_distance(cub, c0) < 1e-12);

    // uniform h-refinement doubles the element count with midpoint knots
    NurbsPatch two = insert_knot(curve, 0, 0.5, 1);
    NurbsPatch four = refine_uniform(two, 1);
    CHECK(four.kv(0).num_spans() == 4);
    const auto uq = four.kv(0).unique_knots();
    CHECK(uq == std::vector<double>{0, 0.25, 0.5, 0.75, 1});

    CHECK_THROWS_AS(insert_knot(c0, 0, 0.25, 1), std::invalid_argument);
    CHECK_THROWS_AS(insert_knot(curve, 0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("geometry invariance of refinement on surfaces and volumes") {
    for (const NurbsPatch& patch : {quarter_annulus(0.3, 0.5), plate_with_hole(4.0, 1.0)}) {
        NurbsPatch r = insert_knot(patch, 0, 0.37, 1);
        r = insert_knot(r, 1, 0.81, 1);
        r = elevate_degree(r, 0, 1);
        CHECK(max_point_distance(patch, r) < 1e-12);
    }
    const NurbsPatch box = box_patch(1, 1, 1, 2, 2, 2, 1, 1, 1);
    NurbsPatch rb = insert_knot(box, 2, 0.5, 2);
    rb = elevate_degree(rb, 1, 1);
    CHECK(max_point_distance(box, rb) < 1e-12);
}

TEST_CASE("degree elevation") {
    NurbsPatch seg = line_patch(0.0, 2.0, 1, 1);
    NurbsPatch up = elevate_degree(seg, 0, 1);
    CHECK(up.degree(0) == 2);
    REQUIRE(up.num_controls() == 3);
    CHECK(norm(up.net().points[1] - Vec3{1.0, 0, 0}) < 1e-14);
    CHECK(max_point_distance(seg, up) < 1e-13);

    // elevation preserves interior continuity: multiplicity grows with it
    NurbsPatch curve = line_patch(0.0, 1.0, 2, 3);
    NurbsPatch raised = elevate_degree(curve, 0, 2);
    CHECK(raised.degree(0) == 4);
    for (double u : {1.0 / 3.0, 2.0 / 3.0})
        CHECK(raised.kv(0).multiplicity(u, 1e-12) == 3);
    CHECK(max_point_distance(curve, raised) < 1e-12);

    // k-refinement (elevate then insert) yields fewer functions than
    // insert-then-elevate
    NurbsPatch base = line_patch(0.0, 1.0, 1, 1);
    NurbsPatch k1 = elevate_degree(base, 0, 1);
    k1 = insert_knot(k1, 0, 0.5, 1);
    NurbsPatch h1 = insert_knot(base, 0, 0.5, 1);
    h1 = elevate_degree(h1, 0, 1);
    CHECK(k1.num_controls() < h1.num_controls());
    CHECK(k1.num_controls() == 4);
    CHECK(h1.num_controls() == 5);
}

TEST_CASE("bezier extraction") {
    // a single segment extracts to the identity
    auto C = bezier_extract(KnotVector(2, {0, 0, 0, 1, 1, 1}));
    REQUIRE(C.size() == 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(C[0](i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

    // Bernstein endpoint interpolation on the parent element
    const auto B = bernstein(3, -1.0);
    CHECK(B[0] == doctest::Approx(1.0));
    for (int i = 1; i <= 3; ++i) CHECK(B[i] == doctest::Approx(0.0));

    // two-element quadratic: stochastic operators reproducing the basis.
    // In the N^e = C^e B convention, partition of unity forces each column
    // of C^e to sum to 1 (rows, in the transposed layout).
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    C = bezier_extract(kv);
    REQUIRE(C.size() == 2);
    for (const auto& Ce : C)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) s += Ce(i, j);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
        }

    // extraction identity on a batch of open knot vectors
    const std::vector<KnotVector> kvs = {
        kv,
        KnotVector(2, {0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5}),
        KnotVector(3, {0, 0, 0, 0, 0.2, 0.5, 0.5, 0.8, 1, 1, 1, 1}),
        KnotVector(1, {0, 0, 0.3, 1, 1}),
        KnotVector(4, {0, 0, 0, 0, 0, 0.5, 1, 1, 1, 1, 1}),
    };
    for (const KnotVector& k : kvs) {
        const auto ops = bezier_extract(k);
        const auto uq = k.unique_knots();
        REQUIRE(int(ops.size()) == k.num_spans());
        for (size_t e = 0; e < ops.size(); ++e) {
            for (int rep = 0; rep < 20; ++rep) {
                const double xt = uniform(-1.0, 1.0);
                const double xi = uq[e] + 0.5 * (xt + 1.0) * (uq[e + 1] - uq[e]);
                const auto Bp = bernstein(k.degree(), xt);
                const auto N = k.basis(std::min(xi, k.back()));
                for (int a = 0; a <= k.degree(); ++a) {
                    double s = 0.0;
                    for (int j = 0; j <= k.degree(); ++j) s += ops[e](a, j) * Bp[j];
                    CHECK(std::fabs(s - N[a]) < 1e-12);
                }
            }
        }
    }
    CHECK_THROWS_AS(bezier_extract(KnotVector(2, {0, 0, 1, 2, 2})), std::invalid_argument);
}

TEST_CASE("patch json round trip") {
    const NurbsPatch patch = quarter_annulus(0.3, 0.5);
    const std::string text = patch.to_json();
    const NurbsPatch back = NurbsPatch::from_json(text);
    CHECK(back.dim() == 2);
    CHECK(back.degree(0) == 2);
    CHECK(back.degree(1) == 1);
    CHECK(max_point_distance(patch, back) < 1e-15);
}

TEST_CASE("knot interval conversion") {
    // reduced-notation intervals of an open vector
    KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
    CHECK(kv.knot_intervals() == std::vector<double>{0, 0.5, 0.5, 0});
    KnotVector u(2, {0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5});
    CHECK(u.knot_intervals() == std::vector<double>{0, 1, 1, 1, 1, 0, 1, 0});
    CHECK_THROWS_AS(KnotVector(1, {0, 0.5, 1, 2}).knot_intervals(), std::invalid_argument);
}
