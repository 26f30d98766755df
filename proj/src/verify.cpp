#include "iga/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "iga/bc.hpp"
#include "iga/cases.hpp"
#include "iga/extraction.hpp"
#include "iga/geometry.hpp"
#include "iga/refine.hpp"
#include "iga/solver.hpp"
#include "iga/xiga.hpp"

namespace iga {

namespace {

using nlohmann::json;

double metric_value(const CaseResult& res, const std::string& metric) {
    for (const MetricRow& r : res.rows)
        if (r.metric == metric) return r.value;
    throw std::logic_error("metric not found: " + metric);
}

double metric_relerr(const CaseResult& res, const std::string& metric) {
    for (const MetricRow& r : res.rows)
        if (r.metric == metric) return r.rel_error;
    throw std::logic_error("metric not found: " + metric);
}

json edge_crack_cfg(int p, int ncx, int ncy) {
    json cfg = json::parse(builtin_config("edge-crack"));
    cfg["degree"] = p;
    cfg["cp_x"] = ncx;
    cfg["cp_y"] = ncy;
    cfg["output"] = {{"vtk", false}};
    return cfg;
}

// ------------------------------------------------------------------ criteria

CriterionResult criterion_table1() {
    CriterionResult c{1, "edge-crack SIF versus the reference table", false, "", 0};
    std::ostringstream os;
    const double ref = 1.6118;

    const CaseResult cubic = run_case(edge_crack_cfg(3, 36, 72).dump(), "");
    const double e_cubic = metric_relerr(cubic, "K_I");
    os << "cubic 36x72 K_I=" << metric_value(cubic, "K_I") << " (err "
       << e_cubic * 100 << "%, ref " << ref << ")";

    std::vector<double> lin_err;
    for (auto [nx, ny] : {std::pair{9, 18}, std::pair{18, 36}, std::pair{36, 72}}) {
        const CaseResult r = run_case(edge_crack_cfg(1, nx, ny).dump(), "");
        lin_err.push_back(metric_relerr(r, "K_I"));
        os << "; linear " << nx << "x" << ny << " err " << lin_err.back() * 100 << "%";
    }
    const bool decreasing = lin_err[0] > lin_err[1] && lin_err[1] > lin_err[2];
    c.passed = e_cubic < 0.005 && decreasing && lin_err[2] < 0.015;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_poisson() {
    CriterionResult c{2, "1D Poisson: cubic nodal exactness and p=2 L2 rate", false, "", 0};
    std::ostringstream os;

    json cfg = json::parse(builtin_config("poisson-1d"));
    cfg["degree"] = 3;
    cfg["elements"] = 4;
    cfg["output"] = {{"vtk", false}};
    const double nodal = metric_value(run_case(cfg.dump(), ""), "nodal_max_error");
    os << "p=3 nodal error " << nodal;

    std::vector<double> errs;
    for (int nel : {2, 4, 8, 16}) {
        cfg["degree"] = 2;
        cfg["elements"] = nel;
        errs.push_back(metric_value(run_case(cfg.dump(), ""), "l2_error"));
    }
    double rate_sum = 0;
    for (size_t i = 1; i < errs.size(); ++i) rate_sum += std::log2(errs[i - 1] / errs[i]);
    const double rate = rate_sum / double(errs.size() - 1);
    os << "; p=2 mean L2 rate " << rate;

    c.passed = nodal < 1e-12 && std::fabs(rate - 3.0) <= 0.3;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_gradient() {
    CriterionResult c{3, "strong-gradient 1D: C0 insertion versus smooth basis", false, "", 0};
    std::ostringstream os;
    const double peak = 1.5;  // max of x + exp(-(alpha(x-.5))^2) at x = 0.5

    json cfg = json::parse(builtin_config("poisson-1d-gradient"));
    cfg["output"] = {{"vtk", false}};

    cfg["basis"] = "c0";
    cfg["elements"] = 16;
    const CaseResult rc0 = run_case(cfg.dump(), "");
    const double err_c0 = metric_value(rc0, "nodal_max_error");
    int dofs_c0 = 0;
    for (const MetricRow& r : rc0.rows) dofs_c0 = r.dofs;

    // smooth run at the same dof count: n elements = dofs - p
    cfg["basis"] = "smooth";
    cfg["elements"] = dofs_c0 - 3;
    const CaseResult rsm = run_case(cfg.dump(), "");
    const double err_smooth = metric_value(rsm, "nodal_max_error");
    int dofs_sm = 0;
    for (const MetricRow& r : rsm.rows) dofs_sm = r.dofs;

    os << "C0 16-elem max err " << err_c0 << " (" << dofs_c0 << " dofs); smooth "
       << (dofs_c0 - 3) << "-elem max err " << err_smooth << " (" << dofs_sm << " dofs)";

    // under-resolution of the smooth high-order family (the study spans
    // orders up to quintic); the worst order misses the peak at both counts
    bool under_resolved = true;
    for (int nel : {16, 32}) {
        double worst = 0.0;
        for (int p : {2, 3, 4, 5}) {
            cfg["elements"] = nel;
            cfg["degree"] = p;
            worst = std::max(worst, metric_value(run_case(cfg.dump(), ""),
                                                 "dense_max_error"));
        }
        os << "; smooth " << nel << "-elem worst err " << worst;
        under_resolved = under_resolved && worst > 0.1 * peak;
    }

    c.passed = dofs_c0 == dofs_sm && err_smooth >= 10.0 * err_c0 && under_resolved;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_plate_hole() {
    CriterionResult c{4, "plate with hole: stress concentration and convergence", false, "", 0};
    std::ostringstream os;

    json cfg = json::parse(builtin_config("plate-hole"));
    cfg["output"] = {{"vtk", false}};
    cfg["refine"] = 4;  // 32 x 16 elements
    const CaseResult fine = run_case(cfg.dump(), "");
    const double sxx = metric_value(fine, "sigma_xx_hole_top");
    const double geo = metric_value(fine, "hole_geometry_error");
    os << "sigma_xx " << sxx << " (ref 3.0); geometry error " << geo;

    std::vector<double> l2s{metric_value(fine, "stress_l2_error")};
    for (int lvl : {3, 2}) {
        cfg["refine"] = lvl;
        l2s.insert(l2s.begin(), metric_value(run_case(cfg.dump(), ""), "stress_l2_error"));
    }
    os << "; stress L2 errors " << l2s[0] << " > " << l2s[1] << " > " << l2s[2];

    c.passed = std::fabs(sxx - 3.0) <= 0.03 * 3.0 && geo < 1e-12 && l2s[0] > l2s[1] &&
               l2s[1] > l2s[2];
    c.detail = os.str();
    return c;
}

CriterionResult criterion_mode_I_3d() {
    CriterionResult c{5, "3D mode I: order comparison and symmetric opening", false, "", 0};
    std::ostringstream os;

    json cfg = json::parse(builtin_config("mode-I-3d"));
    cfg["output"] = {{"vtk", false}};
    cfg["mesh"] = "linear";
    const CaseResult lin = run_case(cfg.dump(), "");
    cfg["mesh"] = "quadratic";
    const CaseResult quad = run_case(cfg.dump(), "");

    const double e_lin = metric_value(lin, "l2_error");
    const double e_quad = metric_value(quad, "l2_error");
    const double uy_lin = metric_value(lin, "uy_max_over_umax");
    const double uy_quad = metric_value(quad, "uy_max_over_umax");
    os << "L2 linear " << e_lin << ", quadratic " << e_quad << "; |u_y|/|u| " << uy_lin
       << " / " << uy_quad;

    c.passed = e_quad < e_lin && uy_lin <= 1e-8 && uy_quad <= 1e-8;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_clamped_plate() {
    CriterionResult c{6, "clamped plate center deflection", false, "", 0};
    json cfg = json::parse(builtin_config("clamped-plate"));
    cfg["output"] = {{"vtk", false}};
    const CaseResult r = run_case(cfg.dump(), "");
    const double err = metric_relerr(r, "center_deflection");
    std::ostringstream os;
    os << "w_c = " << metric_value(r, "center_deflection") << ", error vs 0.00126 qL^4/D = "
       << err * 100 << "%";
    c.passed = err <= 0.01;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_properties() {
    CriterionResult c{7, "basis/stiffness/BC property suites", false, "", 0};
    std::ostringstream os;
    std::mt19937 gen(987654u);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    };
    bool ok = true;

    // partition of unity and non-negativity, 500 points over 6 patches
    std::vector<NurbsPatch> patches;
    patches.push_back(quarter_circle_arc());
    patches.push_back(line_patch(0, 1, 3, 4));
    patches.push_back(unit_square());
    patches.push_back(quarter_annulus(0.3, 0.5));
    patches.push_back(plate_with_hole(4.0, 1.0));
    patches.push_back(box_patch(1, 2, 0.5, 2, 1, 2, 2, 2, 1));
    double pou_worst = 0, neg_worst = 0;
    for (const NurbsPatch& patch : patches)
        for (int rep = 0; rep < 500; ++rep) {
            Vec3 xi;
            for (int d = 0; d < patch.dim(); ++d)
                xi[d] = uni(patch.kv(d).front(), patch.kv(d).back());
            const BasisDers bd = patch.basis_ders(xi, 0);
            double sum = 0;
            for (double v : bd.R) {
                sum += v;
                neg_worst = std::min(neg_worst, v);
            }
            pou_worst = std::max(pou_worst, std::fabs(sum - 1.0));
        }
    ok = ok && pou_worst < 1e-12 && neg_worst >= -1e-14;
    os << "PoU worst " << pou_worst;

    // refinement geometry invariance
    double inv_worst = 0;
    {
        const NurbsPatch base = quarter_annulus(0.3, 0.5);
        NurbsPatch r = insert_knot(base, 0, 0.31, 2);
        r = elevate_degree(r, 1, 1);
        r = insert_knot(r, 1, 0.5, 1);
        for (int rep = 0; rep < 100; ++rep) {
            const Vec3 xi{uni(0, 1), uni(0, 1), 0};
            inv_worst = std::max(inv_worst, norm(base.eval_point(xi) - r.eval_point(xi)));
        }
    }
    ok = ok && inv_worst < 1e-12;
    os << "; refinement invariance " << inv_worst;

    // extraction identity
    double ext_worst = 0;
    for (const KnotVector& kv :
         {KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}),
          KnotVector(3, {0, 0, 0, 0, 0.2, 0.5, 0.5, 0.8, 1, 1, 1, 1})}) {
        const auto ops = bezier_extract(kv);
        const auto uq = kv.unique_knots();
        for (size_t e = 0; e < ops.size(); ++e)
            for (int rep = 0; rep < 20; ++rep) {
                const double xt = uni(-1, 1);
                const double xi = uq[e] + 0.5 * (xt + 1) * (uq[e + 1] - uq[e]);
                const auto B = bernstein(kv.degree(), xt);
                const auto N = kv.basis(xi);
                for (int a = 0; a <= kv.degree(); ++a) {
                    double s = 0;
                    for (int j = 0; j <= kv.degree(); ++j) s += ops[e](a, j) * B[j];
                    ext_worst = std::max(ext_worst, std::fabs(s - N[a]));
                }
            }
    }
    ok = ok && ext_worst < 1e-12;
    os << "; extraction " << ext_worst;

    // analytic versus FD derivatives
    double fd_worst = 0, fd2_worst = 0;
    for (const NurbsPatch& patch : patches)
        for (int rep = 0; rep < 50; ++rep) {
            Vec3 xi;
            for (int d = 0; d < patch.dim(); ++d)
                xi[d] = uni(patch.kv(d).front() + 1e-3, patch.kv(d).back() - 1e-3);
            const int order = patch.dim() <= 2 ? 2 : 1;
            const BasisDers bd = patch.basis_ders(xi, order);
            const double h = 1e-6;
            for (int d = 0; d < patch.dim(); ++d) {
                Vec3 xp = xi, xm = xi;
                xp[d] += h;
                xm[d] -= h;
                const BasisDers bp = patch.basis_ders(xp, order);
                const BasisDers bm = patch.basis_ders(xm, order);
                double scale = 1.0, scale2 = 1.0;
                for (size_t a = 0; a < bd.R.size(); ++a)
                    scale = std::max(scale, std::fabs(bd.dR(int(a), d)));
                if (order == 2)
                    for (size_t a = 0; a < bd.R.size(); ++a)
                        for (int col = 0; col < bd.d2R.cols(); ++col)
                            scale2 = std::max(scale2, std::fabs(bd.d2R(int(a), col)));
                for (size_t a = 0; a < bd.R.size(); ++a) {
                    const double fd = (bp.R[a] - bm.R[a]) / (2 * h);
                    fd_worst = std::max(fd_worst,
                                        std::fabs(fd - bd.dR(int(a), d)) / scale);
                    if (order == 2 && patch.degree(d) >= 2) {
                        const double fd2 = (bp.dR(int(a), d) - bm.dR(int(a), d)) / (2 * h);
                        fd2_worst = std::max(
                            fd2_worst, std::fabs(fd2 - bd.d2R(int(a), d)) / scale2);
                    }
                }
            }
        }
    ok = ok && fd_worst < 1e-6 && fd2_worst < 1e-4;
    os << "; FD dev " << fd_worst << " / " << fd2_worst;

    // quarter circle stays on the circle
    double circ_worst = 0;
    {
        const NurbsPatch arc = quarter_circle_arc();
        for (int i = 0; i <= 100; ++i)
            circ_worst = std::max(circ_worst,
                                  std::fabs(norm(arc.eval_point({i / 100.0, 0, 0})) - 1.0));
    }
    ok = ok && circ_worst < 1e-12;
    os << "; circle " << circ_worst;

    // stiffness symmetry and rigid-body kernel on small systems
    {
        const MaterialModel mat{1.0, 0.3, ElasticityMode::PlaneStress};
        const NurbsPatch sq = rectangle_patch(2, 1, 2, 2, 2, 2);
        AssembledSystem sys = assemble_elasticity(sq, generate_mesh(sq), mat);
        sys.finalize();
        const double asym = sys.K.asymmetry() / sys.K.max_abs();
        const auto ev = symmetric_eigenvalues(sys.K.dense());
        int kernel = 0;
        for (double l : ev)
            if (std::fabs(l) < 1e-10 * std::fabs(ev.back())) ++kernel;
        ok = ok && asym < 1e-12 && kernel == 3;
        os << "; asym " << asym << ", kernel " << kernel;
    }

    // BC method agreement on a homogeneous-Dirichlet problem
    {
        const MaterialModel mat{100.0, 0.3, ElasticityMode::PlaneStress};
        const NurbsPatch rect = rectangle_patch(2, 1, 2, 2, 4, 2);
        const IgaMesh mesh = generate_mesh(rect);
        const auto zero = [](const Vec3&) { return Vec3{0, 0, 0}; };
        const auto load = [](const Vec3&) { return Vec3{0.0, -1.0, 0}; };
        auto make = [&]() {
            AssembledSystem sys = assemble_elasticity(rect, mesh, mat);
            assemble_traction(extract_boundary(rect, 1), load, sys);
            return sys;
        };
        // direct
        AssembledSystem sd = make();
        std::vector<int> dofs;
        for (int A : extract_boundary(rect, 0).control_map) {
            dofs.push_back(2 * A);
            dofs.push_back(2 * A + 1);
        }
        apply_direct(sd, dofs, std::vector<double>(dofs.size(), 0.0));
        const auto ud = solve(sd).solution;
        // penalty
        AssembledSystem sp = make();
        apply_penalty(sp, extract_boundary(rect, 0), {true, true, false}, zero, 1e10, 2);
        const auto up = solve(sp).solution;
        // lagrange
        AssembledSystem sl = make();
        apply_lagrange(sl, extract_boundary(rect, 0), {true, true, false}, zero, 2);
        const auto ul = solve(sl).solution;
        double umax = 0, dp = 0, dl = 0;
        for (size_t i = 0; i < ud.size(); ++i) {
            umax = std::max(umax, std::fabs(ud[i]));
            dp = std::max(dp, std::fabs(ud[i] - up[i]));
            dl = std::max(dl, std::fabs(ud[i] - ul[i]));
        }
        ok = ok && dp / umax < 1e-5 && dl / umax < 1e-5;
        os << "; BC agreement " << dp / umax << " / " << dl / umax;
    }

    c.passed = ok;
    c.detail = os.str();
    return c;
}

CriterionResult criterion_enrichment() {
    CriterionResult c{8, "enrichment invariants", false, "", 0};
    std::ostringstream os;
    bool ok = true;

    const MaterialModel mat{1000.0, 0.3, ElasticityMode::PlaneStrain};
    // crack-absent enriched assembly equals the standard path
    {
        const NurbsPatch rect = rectangle_patch(1, 2, 2, 2, 4, 8);
        const IgaMesh mesh = generate_mesh(rect);
        EnrichmentState none;
        none.n_comp = 2;
        none.tag.assign(mesh.n_np, EnrichmentState::None);
        none.extra_dof_start.assign(mesh.n_np, -1);
        CrackGeometry faraway;
        faraway.polyline = {{100, 100, 0}, {101, 100, 0}};
        AssembledSystem a = assemble_enriched(rect, mesh, mat, none, faraway);
        AssembledSystem b = assemble_elasticity(rect, mesh, mat);
        a.finalize();
        b.finalize();
        double dmax = 0;
        const bool same_dim = a.n_dof == b.n_dof;
        if (same_dim)
            for (int i = 0; i < a.n_dof; ++i)
                for (int p = a.K.row_ptr()[i]; p < a.K.row_ptr()[i + 1]; ++p)
                    dmax = std::max(dmax, std::fabs(a.K.values()[p] -
                                                    b.K.get(i, a.K.cols()[p])));
        ok = ok && same_dim && dmax <= 1e-14 * b.K.max_abs();
        os << "crack-absent diff " << dmax;
    }

    // H and B1 jumps, and Eq.-jump values against two-sided evaluation
    {
        // direct solve of a small enriched problem (odd element counts keep
        // the crack off the knot lines)
        const int p = 2, ncx = 13, ncy = 25;
        const NurbsPatch patch = rectangle_patch(1, 2, p, p, ncx - p, ncy - p);
        const IgaMesh mesh = generate_mesh(patch);
        const VisualizationMesh vis = build_vis_mesh(mesh, patch);
        CrackGeometry crack;
        crack.polyline = {{0, 1, 0}, {0.3, 1, 0}};
        const LevelSetField ls = compute_level_sets(crack, vis);
        const EnrichmentState enr = select_enriched_nodes(mesh, vis, ls, 2);
        AssembledSystem sys = assemble_enriched(patch, mesh, mat, enr, crack, 13);
        assemble_traction(extract_boundary(patch, 3),
                          [](const Vec3&) { return Vec3{0, 1.0, 0}; }, sys);
        std::vector<int> dofs;
        for (int A : extract_boundary(patch, 2).control_map) dofs.push_back(2 * A + 1);
        dofs.push_back(0);
        apply_direct(sys, dofs, std::vector<double>(dofs.size(), 0.0));
        const auto u = solve(sys).solution;

        double hb_worst = 0, jump_worst = 0, jump_scale = 0;
        for (int i = 1; i <= 20; ++i) {
            const double x = 0.3 * i / 21.0;
            const Vec3 pt{x, 1.0, 0};
            // H and B1 jump sizes
            const int Hp = heaviside(pt + 1e-9 * Vec3{0, 1, 0}, crack);
            const int Hm = heaviside(pt - 1e-9 * Vec3{0, 1, 0}, crack);
            hb_worst = std::max(hb_worst, std::fabs(double(Hp - Hm) - 2.0));
            const double r = norm(pt - crack.tip());
            const BranchValues bp = branch_functions(r, M_PI);
            const BranchValues bm = branch_functions(r, -M_PI);
            hb_worst = std::max(hb_worst,
                                std::fabs((bp.B[0] - bm.B[0]) - 2.0 * std::sqrt(r)));
            for (int al = 1; al < 4; ++al)
                hb_worst = std::max(hb_worst, std::fabs(bp.B[al] - bm.B[al]));

            // Eq-jump against two-sided evaluation (affine map: xi = x, eta = y/2)
            const Vec3 xi{x, 0.5, 0};
            const Vec3 jump = displacement_jump(patch, mesh, enr, crack, u, xi);
            const Vec3 up_ = enriched_displacement(patch, mesh, enr, crack, u, xi, +1);
            const Vec3 dn_ = enriched_displacement(patch, mesh, enr, crack, u, xi, -1);
            jump_worst = std::max(jump_worst, norm(jump - (up_ - dn_)));
            jump_scale = std::max(jump_scale, norm(jump));
        }
        ok = ok && hb_worst < 1e-12 && jump_worst <= 1e-8 * std::max(1.0, jump_scale);
        os << "; H/B1 jump dev " << hb_worst << "; Eq-jump dev " << jump_worst;
    }

    c.passed = ok;
    c.detail = os.str();
    return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& outdir) {
    std::vector<CriterionResult (*)()> criteria = {
        criterion_table1,       criterion_poisson,       criterion_gradient,
        criterion_plate_hole,   criterion_mode_I_3d,     criterion_clamped_plate,
        criterion_properties,   criterion_enrichment,
    };
    std::vector<CriterionResult> results;
    for (auto* fn : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.id = int(results.size()) + 1;
            r.name = "criterion " + std::to_string(r.id);
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        json report = json::array();
        for (const auto& r : results)
            report.push_back({{"id", r.id},
                              {"name", r.name},
                              {"passed", r.passed},
                              {"detail", r.detail},
                              {"seconds", r.seconds}});
        std::ofstream os(outdir + "/report.json");
        os << report.dump(2) << "\n";
    }
    return results;
}

} // namespace iga
