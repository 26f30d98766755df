#include "iga/cases.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "iga/bc.hpp"
#include "iga/geometry.hpp"
#include "iga/plate.hpp"
#include "iga/refine.hpp"
#include "iga/solver.hpp"
#include "iga/vtk.hpp"
#include "iga/xiga.hpp"

namespace iga {

using nlohmann::json;

namespace {

MaterialModel parse_material(const json& j) {
    MaterialModel m;
    m.E = j.value("E", 1.0);
    m.nu = j.value("nu", 0.0);
    const std::string mode = j.value("mode", "plane-stress");
    if (mode == "plane-stress") m.mode = ElasticityMode::PlaneStress;
    else if (mode == "plane-strain") m.mode = ElasticityMode::PlaneStrain;
    else if (mode == "solid") m.mode = ElasticityMode::Solid3D;
    else throw std::invalid_argument("config material.mode: unknown value '" + mode + "'");
    return m;
}

std::string mesh_label(const IgaMesh& mesh) {
    std::ostringstream os;
    for (int d = 0; d < mesh.dim; ++d) os << (d ? "x" : "") << mesh.nel_dir[d];
    return os.str();
}

void maybe_write_vtk(const json& cfg, const std::string& outdir, const ResultBundle& bundle,
                     const VisualizationMesh& vis, const std::string& name, VtkFormat fmt,
                     CaseResult& result) {
    if (!cfg.value("output", json::object()).value("vtk", true)) return;
    if (outdir.empty()) return;
    std::filesystem::create_directories(outdir);
    const char* ext = fmt == VtkFormat::LegacyAscii ? ".vtk"
                      : fmt == VtkFormat::XmlUnstructured ? ".vtu" : ".vts";
    const std::string path = outdir + "/" + name + ext;
    write_vtk(bundle, vis, path, fmt);
    result.artifacts.push_back(path);
}

double rel_err(double value, double ref) {
    return ref != 0.0 ? std::fabs(value - ref) / std::fabs(ref) : std::fabs(value);
}

int parse_face(const json& f) {
    if (f.is_number_integer()) return f.get<int>();
    static const std::map<std::string, int> names = {{"u0", 0}, {"u1", 1}, {"v0", 2},
                                                     {"v1", 3}, {"w0", 4}, {"w1", 5}};
    const auto it = names.find(f.get<std::string>());
    if (it == names.end())
        throw std::invalid_argument("config bcs.faces: unknown face '" +
                                    f.get<std::string>() + "'");
    return it->second;
}

std::array<bool, 3> parse_components(const json& bc, int n_comp) {
    std::array<bool, 3> comps{false, false, false};
    const std::string c = bc.value("component", std::string("all"));
    if (c == "all")
        for (int i = 0; i < n_comp; ++i) comps[i] = true;
    else if (c == "x") comps[0] = true;
    else if (c == "y") comps[1] = true;
    else if (c == "z") comps[2] = true;
    else throw std::invalid_argument("config bcs.component: unknown value '" + c + "'");
    return comps;
}

NurbsPatch patch_from_config(const json& cfg) {
    if (!cfg.contains("geometry"))
        throw std::invalid_argument("config: missing key 'geometry'");
    const json& g = cfg.at("geometry");
    if (g.contains("file")) {
        std::ifstream is(g.at("file").get<std::string>());
        if (!is)
            throw std::invalid_argument("config geometry.file: cannot read '" +
                                        g.at("file").get<std::string>() + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        return NurbsPatch::from_json(ss.str());
    }
    return NurbsPatch::from_json(g.dump());
}

// ordered refinement directives: k-refinement order is preserved
NurbsPatch apply_refinement(NurbsPatch patch, const json& cfg) {
    for (const json& step : cfg.value("refinement", json::array())) {
        const std::string type = step.value("type", std::string());
        if (type == "elevate") {
            const int dir = step.value("direction", -1);
            const int raise = step.value("raise", 1);
            if (dir >= 0) patch = elevate_degree(patch, dir, raise);
            else
                for (int d = 0; d < patch.dim(); ++d) patch = elevate_degree(patch, d, raise);
        } else if (type == "insert") {
            patch = insert_knot(patch, step.value("direction", 0),
                                step.at("knot").get<double>(), step.value("times", 1));
        } else if (type == "h") {
            patch = refine_uniform(patch, step.value("levels", 1));
        } else {
            throw std::invalid_argument("config refinement.type: unknown value '" + type +
                                        "'");
        }
    }
    return patch;
}

// -------------------------------------------------- generic elasticity case

CaseResult run_custom_elasticity(const json& cfg, const std::string& outdir) {
    NurbsPatch patch = apply_refinement(patch_from_config(cfg), cfg);
    const int ds = patch.spatial_dim();
    const IgaMesh mesh = generate_mesh(patch);
    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    const MaterialModel mat = parse_material(cfg.value("material", json::object()));
    const int quad = cfg.value("quad", 0);

    // optional crack spec: polyline (2D) or planar rectangle (3D)
    CrackGeometry crack;
    EnrichmentState enr;
    bool cracked = false;
    if (cfg.contains("crack")) {
        cracked = true;
        const json& cj = cfg.at("crack");
        if (cj.contains("polyline")) {
            for (const auto& v : cj.at("polyline"))
                crack.polyline.push_back({v.at(0).get<double>(), v.at(1).get<double>(), 0});
        } else {
            crack.is3d = true;
            for (int i = 0; i < 4; ++i)
                for (int c = 0; c < 3; ++c)
                    crack.rect[i][c] = cj.at("rect").at(i).at(c).get<double>();
        }
        enr = select_enriched_nodes(mesh, vis, compute_level_sets(crack, vis), ds);
    }

    AssembledSystem sys =
        cracked ? assemble_enriched(patch, mesh, mat, enr, crack,
                                    cfg.value("enriched_quad", 13), quad)
                : assemble_elasticity(patch, mesh, mat, quad);

    // loads
    for (const json& load : cfg.value("loads", json::array())) {
        const std::string type = load.value("type", std::string("traction"));
        const auto vec = load.value("value", std::vector<double>{0, 0, 0});
        const Vec3 v{vec.size() > 0 ? vec[0] : 0, vec.size() > 1 ? vec[1] : 0,
                     vec.size() > 2 ? vec[2] : 0};
        if (type == "traction") {
            for (const json& f : load.at("faces"))
                assemble_traction(extract_boundary(patch, parse_face(f)),
                                  [v](const Vec3&) { return v; }, sys, quad);
        } else if (type == "body") {
            assemble_body_force(patch, mesh, [v](const Vec3&) { return v; }, sys, quad);
        } else if (type == "point") {
            const auto loc = load.at("location").get<std::vector<double>>();
            const Vec3 xi = locate_parameter(
                patch, {loc[0], loc.size() > 1 ? loc[1] : 0, loc.size() > 2 ? loc[2] : 0});
            const BasisDers bd = patch.basis_ders(xi, 0);
            const auto act = patch.active_controls(bd.span);
            for (size_t a = 0; a < act.size(); ++a)
                for (int c = 0; c < ds; ++c) sys.F[ds * act[a] + c] += v[c] * bd.R[a];
        } else {
            throw std::invalid_argument("config loads.type: unknown value '" + type + "'");
        }
    }

    // constraints: faces, component, value (constant) or a named field,
    // method
    for (const json& bc : cfg.value("bcs", json::array())) {
        const std::array<bool, 3> comps = parse_components(bc, ds);
        const double value = bc.value("value", 0.0);
        const std::string method = bc.value("method", std::string("direct"));
        const bool has_field = bc.contains("field");
        std::function<Vec3(const Vec3&)> field =
            [value](const Vec3&) { return Vec3{value, value, value}; };
        if (has_field) {
            const std::string fname = bc.at("field").get<std::string>();
            LefmCase lefm;
            lefm.a = cfg.value("a", 1.0);
            lefm.sigma = cfg.value("sigma", 1.0);
            lefm.E = mat.E;
            lefm.nu = mat.nu;
            if (fname == "griffith-displacement" && cracked && !crack.is3d)
                field = [lefm, crack](const Vec3& x) {
                    return griffith_displacement(lefm, x, crack);
                };
            else if (fname == "mode-I-3d-displacement" && cracked && crack.is3d)
                field = [lefm, crack](const Vec3& x) {
                    return mode_I_3d_displacement(lefm, x, crack);
                };
            else
                throw std::invalid_argument("config bcs.field: unknown field '" + fname +
                                            "' (or missing crack)");
        }
        for (const json& f : bc.value("faces", json::array())) {
            const BoundaryMesh bnd = extract_boundary(patch, parse_face(f));
            if (method == "direct") {
                // legal only for uniform data: control variables are not
                // interpolatory away from corners
                if (has_field)
                    throw std::invalid_argument(
                        "config bcs.method: direct imposition needs uniform data; use "
                        "penalty, lagrange or least-squares for varying fields");
                std::vector<int> dofs;
                std::vector<double> vals;
                for (int A : bnd.control_map)
                    for (int c = 0; c < ds; ++c)
                        if (comps[c]) {
                            dofs.push_back(ds * A + c);
                            vals.push_back(value);
                        }
                apply_direct(sys, dofs, vals);
            } else if (method == "penalty") {
                apply_penalty(sys, bnd, comps, field, bc.value("penalty", 1e10), ds);
            } else if (method == "lagrange") {
                apply_lagrange(sys, bnd, comps, field, ds);
            } else if (method == "least-squares") {
                apply_projected_direct(
                    sys, least_squares_project(bnd, field,
                                               bc.value("collocation_per_element", 4)),
                    comps, ds);
            } else {
                throw std::invalid_argument("config bcs.method: unknown value '" + method +
                                            "'");
            }
        }
    }

    const SolveReport rep = solve(sys);

    CaseResult result;
    const std::string name = cfg.value("case", std::string("custom"));
    const std::string label = mesh_label(mesh);
    const int p = patch.degree(0);
    AssembledSystem& mref = sys;
    result.rows.push_back({name, label, p, sys.n_dof, "strain_energy",
                           strain_energy(mref, rep.solution), 0.0, 0.0});

    if (cracked && !crack.is3d && !enr.tip_elems.empty() && cfg.contains("sif")) {
        const double KI = sif_interaction_integral(patch, mesh, vis, enr, crack, mat,
                                                   rep.solution,
                                                   cfg.at("sif").value("rd", 4.0));
        const double ref = cfg.at("sif").value("ref", 0.0);
        result.rows.push_back({name, label, p, sys.n_dof, "K_I", KI, ref, rel_err(KI, ref)});
    }

    const std::vector<double> ustd(rep.solution.begin(),
                                   rep.solution.begin() + ds * mesh.n_np);
    const ResultBundle bundle = recover_elasticity(ustd, patch, mesh, vis, mat);
    maybe_write_vtk(cfg, outdir, bundle, vis, name,
                    ds == 3 ? VtkFormat::XmlStructured : VtkFormat::LegacyAscii, result);
    return result;
}

// ---------------------------------------------------------------- poisson 1d

CaseResult run_poisson_1d(const json& cfg, const std::string& outdir) {
    const int p = cfg.value("degree", 2);
    const int nel = cfg.value("elements", 4);
    const NurbsPatch patch = line_patch(0.0, 1.0, p, nel);
    const IgaMesh mesh = generate_mesh(patch);

    AssembledSystem sys = assemble_poisson_1d(patch, mesh, [](double x) { return x; },
                                               cfg.value("quad", 0));
    apply_direct(sys, {0, mesh.n_np - 1}, {0.0, 0.0});
    const SolveReport rep = solve(sys);

    const auto exact = [](double x) { return -x * x * x / 6.0 + x / 6.0; };
    const auto dexact = [](double x) { return -x * x / 2.0 + 1.0 / 6.0; };
    const ErrorNorms err = error_norms_scalar(rep.solution, patch, mesh, exact, dexact);

    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    ResultBundle bundle = recover_scalar(rep.solution, patch, mesh, vis);
    double nodal_max = 0.0;
    for (size_t n = 0; n < vis.nodes.size(); ++n)
        nodal_max = std::max(nodal_max,
                             std::fabs(bundle.displacement[n].x - exact(vis.nodes[n].x)));

    CaseResult result;
    const std::string label = mesh_label(mesh);
    result.rows.push_back({"poisson-1d", label, p, sys.n_dof, "l2_error", err.l2, 0.0, err.l2});
    result.rows.push_back(
        {"poisson-1d", label, p, sys.n_dof, "nodal_max_error", nodal_max, 0.0, nodal_max});
    maybe_write_vtk(cfg, outdir, bundle, vis, "poisson1d", VtkFormat::LegacyAscii, result);
    return result;
}

// ------------------------------------------------------- poisson 1d gradient

NurbsPatch gradient_patch(int p, int nel, bool c0) {
    // k-refinement from a single linear element: elevate, then insert
    NurbsPatch patch = line_patch(0.0, 1.0, 1, 1);
    if (p > 1) patch = elevate_degree(patch, 0, p - 1);
    if (!c0) {
        for (int i = 1; i < nel; ++i)
            patch = insert_knot(patch, 0, double(i) / nel, 1);
        return patch;
    }
    // triple knots at the gradient shoulders and peak, the rest spread
    // uniformly: nel = n_left + 2 + 2 + n_right elements
    const double b0 = 0.42, b1 = 0.5, b2 = 0.58;
    for (double b : {b0, b1, b2}) patch = insert_knot(patch, 0, b, std::min(p, 3));
    for (int i = 1; i < 3; ++i) {
        patch = insert_knot(patch, 0, b0 + (b1 - b0) * i / 3.0, 1);
        patch = insert_knot(patch, 0, b1 + (b2 - b1) * i / 3.0, 1);
    }
    const int n_left = (nel - 6) / 2, n_right = nel - 6 - n_left;
    for (int i = 1; i < n_left; ++i)
        patch = insert_knot(patch, 0, b0 * i / n_left, 1);
    for (int i = 1; i < n_right; ++i)
        patch = insert_knot(patch, 0, b2 + (1.0 - b2) * i / n_right, 1);
    return patch;
}

CaseResult run_poisson_1d_gradient(const json& cfg, const std::string& outdir) {
    const int p = cfg.value("degree", 3);
    const int nel = cfg.value("elements", 16);
    const double alpha = cfg.value("alpha", 50.0);
    const bool c0 = cfg.value("basis", std::string("smooth")) == "c0";

    const NurbsPatch patch = gradient_patch(p, nel, c0);
    const IgaMesh mesh = generate_mesh(patch);

    const auto exact = [alpha](double x) {
        return x + std::exp(-std::pow(alpha * (x - 0.5), 2));
    };
    const auto dexact = [alpha](double x) {
        return 1.0 - 2.0 * alpha * alpha * (x - 0.5) *
                         std::exp(-std::pow(alpha * (x - 0.5), 2));
    };
    const auto source = [alpha](double x) {
        if (x < 0.42 || x > 0.58) return 0.0;
        const double a2 = alpha * alpha, d = x - 0.5;
        return (2.0 * a2 - 4.0 * std::pow(a2 * d, 2)) * std::exp(-a2 * d * d);
    };

    // the body-force term uses 10 points per element
    AssembledSystem sys = assemble_poisson_1d(patch, mesh, source, 0, 10);
    apply_direct(sys, {0, mesh.n_np - 1}, {exact(0.0), exact(1.0)});
    const SolveReport rep = solve(sys);

    const ErrorNorms err = error_norms_scalar(rep.solution, patch, mesh, exact, dexact);
    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    ResultBundle bundle = recover_scalar(rep.solution, patch, mesh, vis);
    double nodal_max = 0.0;
    for (size_t n = 0; n < vis.nodes.size(); ++n)
        nodal_max = std::max(nodal_max,
                             std::fabs(bundle.displacement[n].x - exact(vis.nodes[n].x)));
    // dense in-element sampling: knot images superconverge and hide the
    // under-resolved peak
    double dense_max = 0.0;
    for (int s = 0; s <= 1000; ++s) {
        const double xi = s / 1000.0;
        dense_max = std::max(dense_max, std::fabs(scalar_field_at(patch, rep.solution,
                                                                  {xi, 0, 0}) -
                                                  exact(patch.eval_point({xi, 0, 0}).x)));
    }

    CaseResult result;
    const std::string label = mesh_label(mesh) + (c0 ? "-c0" : "-smooth");
    result.rows.push_back({"poisson-1d-gradient", label, p, sys.n_dof, "l2_error", err.l2,
                           0.0, err.l2});
    result.rows.push_back({"poisson-1d-gradient", label, p, sys.n_dof, "nodal_max_error",
                           nodal_max, 0.0, nodal_max});
    result.rows.push_back({"poisson-1d-gradient", label, p, sys.n_dof, "dense_max_error",
                           dense_max, 0.0, dense_max});
    maybe_write_vtk(cfg, outdir, bundle, vis, "poisson1d_gradient", VtkFormat::LegacyAscii,
                    result);
    return result;
}

// ----------------------------------------------------------------- plate hole

std::array<double, 6> hole_exact_stress(const Vec3& x, double R, double sigma) {
    const double r2 = x.x * x.x + x.y * x.y;
    const double th = std::atan2(x.y, x.x);
    const double q = R * R / r2, q2 = q * q;
    const double c2 = std::cos(2 * th), c4 = std::cos(4 * th);
    const double s2 = std::sin(2 * th), s4 = std::sin(4 * th);
    std::array<double, 6> s{};
    s[0] = sigma * (1.0 - q * (1.5 * c2 + c4) + 1.5 * q2 * c4);
    s[1] = sigma * (-q * (0.5 * c2 - c4) - 1.5 * q2 * c4);
    s[2] = sigma * (-q * (0.5 * s2 + s4) + 1.5 * q2 * s4);
    return s;
}

CaseResult run_plate_hole(const json& cfg, const std::string& outdir) {
    const double L = cfg.value("L", 4.0), R = cfg.value("R", 1.0);
    const double sigma = cfg.value("sigma", 1.0);
    const int degree = cfg.value("degree", 2);
    const int levels = cfg.value("refine", 4);
    MaterialModel mat = parse_material(cfg.value("material", json{{"E", 1000.0},
                                                                  {"nu", 0.3},
                                                                  {"mode", "plane-stress"}}));

    NurbsPatch patch = plate_with_hole(L, R);
    for (int d = 0; d < 2 && degree > 2; ++d) patch = elevate_degree(patch, d, degree - 2);
    patch = refine_uniform(patch, levels);
    const IgaMesh mesh = generate_mesh(patch);

    AssembledSystem sys = assemble_elasticity(patch, mesh, mat, cfg.value("quad", 0));

    // exact tractions on the outer boundary; outward normal from the geometry
    const auto traction = [&](const Vec3& x) -> Vec3 {
        const auto s = hole_exact_stress(x, R, sigma);
        const Vec3 n = std::fabs(x.x + L) < 1e-8 ? Vec3{-1, 0, 0} : Vec3{0, 1, 0};
        return {s[0] * n.x + s[2] * n.y, s[2] * n.x + s[1] * n.y, 0};
    };
    const BoundaryMesh outer = extract_boundary(patch, 3);  // eta = 1
    assemble_traction(outer, traction, sys);

    // symmetry: u_y = 0 on the y = 0 edge, u_x = 0 on the x = 0 edge
    std::vector<int> dofs;
    std::vector<double> vals;
    for (int A : extract_boundary(patch, 0).control_map) {
        dofs.push_back(2 * A + 1);
        vals.push_back(0.0);
    }
    for (int A : extract_boundary(patch, 1).control_map) {
        dofs.push_back(2 * A);
        vals.push_back(0.0);
    }
    apply_direct(sys, dofs, vals);
    const SolveReport rep = solve(sys);

    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    const ResultBundle bundle = recover_elasticity(rep.solution, patch, mesh, vis, mat);

    // stress concentration at the hole-edge point on the x = 0 symmetry line
    const int node = vis.node_index(vis.grid[0] - 1, 0, 0);
    const double sxx = bundle.stress[node][0];

    const double l2s = stress_l2_error(rep.solution, patch, mesh, mat, [&](const Vec3& x) {
        return hole_exact_stress(x, R, sigma);
    });

    // exact-geometry check along the hole edge
    double geo = 0.0;
    for (int s = 0; s <= 100; ++s) {
        const Vec3 x = patch.eval_point({s / 100.0, 0, 0});
        geo = std::max(geo, std::fabs(norm(x) - R));
    }

    CaseResult result;
    const std::string label = mesh_label(mesh);
    result.rows.push_back({"plate-hole", label, degree, sys.n_dof, "sigma_xx_hole_top", sxx,
                           3.0 * sigma, rel_err(sxx, 3.0 * sigma)});
    result.rows.push_back({"plate-hole", label, degree, sys.n_dof, "stress_l2_error", l2s,
                           0.0, l2s});
    result.rows.push_back({"plate-hole", label, degree, sys.n_dof, "hole_geometry_error", geo,
                           0.0, geo});
    maybe_write_vtk(cfg, outdir, bundle, vis, "plate_hole", VtkFormat::LegacyAscii, result);
    maybe_write_vtk(cfg, outdir, bundle, vis, "plate_hole", VtkFormat::XmlUnstructured, result);
    return result;
}

// ----------------------------------------------------------------- edge crack

double edge_crack_F(double ab) {
    return 1.12 - 0.23 * ab + 10.55 * ab * ab - 21.72 * ab * ab * ab +
           30.39 * ab * ab * ab * ab;
}

CaseResult run_edge_crack(const json& cfg, const std::string& outdir) {
    const int p = cfg.value("degree", 3);
    const int ncx = cfg.value("cp_x", 36), ncy = cfg.value("cp_y", 72);
    const double b = 1.0, h = 1.0;
    const double ab = cfg.value("a_over_b", 0.3);
    const double a = ab * b;
    const double sigma = cfg.value("sigma", 1.0);
    MaterialModel mat = parse_material(cfg.value("material", json{{"E", 1000.0},
                                                                  {"nu", 0.3},
                                                                  {"mode", "plane-strain"}}));
    const double rd = cfg.value("sif", json::object()).value("rd", 4.0);
    const int enr_quad = cfg.value("enriched_quad", 13);

    const NurbsPatch patch = rectangle_patch(b, 2 * h, p, p, ncx - p, ncy - p);
    const IgaMesh mesh = generate_mesh(patch);
    const VisualizationMesh vis = build_vis_mesh(mesh, patch);

    CrackGeometry crack;
    crack.polyline = {{0, h, 0}, {a, h, 0}};
    const LevelSetField ls = compute_level_sets(crack, vis);
    const EnrichmentState enr = select_enriched_nodes(mesh, vis, ls, 2);

    AssembledSystem sys =
        assemble_enriched(patch, mesh, mat, enr, crack, enr_quad, cfg.value("quad", 0));

    // sigma on the top edge, bottom edge held vertically, corner pinned
    assemble_traction(extract_boundary(patch, 3), [&](const Vec3&) {
        return Vec3{0, sigma, 0};
    }, sys);
    std::vector<int> dofs;
    std::vector<double> vals;
    for (int A : extract_boundary(patch, 2).control_map) {
        dofs.push_back(2 * A + 1);
        vals.push_back(0.0);
    }
    dofs.push_back(0);  // bottom-left corner control point, u_x
    vals.push_back(0.0);
    apply_direct(sys, dofs, vals);

    const SolveReport rep = solve(sys);
    const double KI = sif_interaction_integral(patch, mesh, vis, enr, crack, mat,
                                               rep.solution, rd);
    const double KIref = edge_crack_F(ab) * sigma * std::sqrt(M_PI * a);

    CaseResult result;
    const std::string label = std::to_string(ncx) + "x" + std::to_string(ncy);
    result.rows.push_back({"edge-crack", label, p, 2 * mesh.n_np, "K_I", KI, KIref,
                           rel_err(KI, KIref)});

    if (cfg.value("output", json::object()).value("vtk", true) && !outdir.empty()) {
        const CrackedVisMesh cvm =
            cracked_vis_mesh(vis, patch, mesh, enr, crack, mat, rep.solution);
        VisualizationMesh flat;
        flat.nodes = cvm.nodes;
        flat.cells = cvm.cells;
        flat.vtk_cell_type = 9;
        ResultBundle bundle;
        bundle.displacement = cvm.displacement;
        bundle.stress = cvm.stress;
        bundle.n_stress = 3;
        maybe_write_vtk(cfg, outdir, bundle, flat, "edge_crack", VtkFormat::LegacyAscii,
                        result);
    }
    return result;
}

// ------------------------------------------------------------ griffith mode I

CaseResult run_griffith(const json& cfg, const std::string& outdir) {
    const int p = cfg.value("degree", 2);
    const int nel = cfg.value("elements", 17);  // odd: crack mid-element
    const double W = cfg.value("width", 10.0);
    LefmCase lefm;
    lefm.a = cfg.value("a", 100.0);
    lefm.sigma = cfg.value("sigma", 1e4);
    const json jm = cfg.value("material", json{{"E", 1e7}, {"nu", 0.3},
                                               {"mode", "plane-strain"}});
    MaterialModel mat = parse_material(jm);
    lefm.E = mat.E;
    lefm.nu = mat.nu;
    const std::string method = cfg.value("bc_method", std::string("lagrange"));
    const int enr_quad = cfg.value("enriched_quad", 13);

    const NurbsPatch patch = rectangle_patch(W, W, p, p, nel, nel);
    const IgaMesh mesh = generate_mesh(patch);
    const VisualizationMesh vis = build_vis_mesh(mesh, patch);

    CrackGeometry crack;
    crack.polyline = {{0, W / 2, 0}, {W / 2, W / 2, 0}};
    const LevelSetField ls = compute_level_sets(crack, vis);
    const EnrichmentState enr = select_enriched_nodes(mesh, vis, ls, 2);

    AssembledSystem sys = assemble_enriched(patch, mesh, mat, enr, crack, enr_quad);

    const auto exact_u = [&](const Vec3& x) { return griffith_displacement(lefm, x, crack); };
    // exact tractions on the cracked (left) edge, t = sigma . (-1, 0)
    assemble_traction(extract_boundary(patch, 0), [&](const Vec3& x) {
        const auto s = griffith_stress(lefm, x, crack);
        return Vec3{-s[0], -s[2], 0};
    }, sys);

    // exact displacements on bottom, right and top edges
    for (int face : {2, 1, 3}) {
        const BoundaryMesh bnd = extract_boundary(patch, face);
        if (method == "lagrange") {
            apply_lagrange(sys, bnd, {true, true, false}, exact_u, 2);
        } else if (method == "penalty") {
            apply_penalty(sys, bnd, {true, true, false}, exact_u,
                          cfg.value("penalty", 1e10), 2);
        } else if (method == "least-squares") {
            const auto proj = least_squares_project(
                bnd, exact_u, cfg.value("collocation_per_element", 4));
            apply_projected_direct(sys, proj, {true, true, false}, 2);
        } else {
            throw std::invalid_argument("config bc_method: unknown value '" + method + "'");
        }
    }
    const SolveReport rep = solve(sys);

    // displacement L2 error of the enriched approximation
    const QuadratureRule rule = gauss_rule(p + 2, 2);
    double num = 0, den = 0;
    for (int e = 0; e < mesh.n_el; ++e)
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            Vec3 xi;
            for (int d = 0; d < 2; ++d)
                xi[d] = parent_to_param(mesh.range(e, d), rule.points[g][d]);
            const Vec3 uh = enriched_displacement(patch, mesh, enr, crack, rep.solution, xi);
            const Vec3 ue = exact_u(mp.phys);
            num += dot(uh - ue, uh - ue) * mp.detJ * rule.weights[g];
            den += dot(ue, ue) * mp.detJ * rule.weights[g];
        }
    const double l2 = std::sqrt(num / den);

    CaseResult result;
    const std::string label = mesh_label(mesh) + "-" + method;
    result.rows.push_back({"griffith-modeI", label, p, sys.n_dof, "l2_error", l2, 0.0, l2});

    if (cfg.value("output", json::object()).value("vtk", true) && !outdir.empty()) {
        const CrackedVisMesh cvm =
            cracked_vis_mesh(vis, patch, mesh, enr, crack, mat, rep.solution);
        VisualizationMesh flat;
        flat.nodes = cvm.nodes;
        flat.cells = cvm.cells;
        flat.vtk_cell_type = 9;
        ResultBundle bundle;
        bundle.displacement = cvm.displacement;
        bundle.stress = cvm.stress;
        bundle.n_stress = 3;
        maybe_write_vtk(cfg, outdir, bundle, flat, "griffith", VtkFormat::LegacyAscii, result);
    }
    return result;
}

// -------------------------------------------------------------- 3D mode I

CaseResult run_mode_I_3d(const json& cfg, const std::string& outdir) {
    const std::string kind = cfg.value("mesh", std::string("quadratic"));
    LefmCase lefm;
    lefm.a = cfg.value("a", 100.0);
    lefm.sigma = cfg.value("sigma", 1e4);
    MaterialModel mat = parse_material(cfg.value("material", json{{"E", 1e7},
                                                                  {"nu", 0.3},
                                                                  {"mode", "solid"}}));
    lefm.E = mat.E;
    lefm.nu = mat.nu;
    const double alpha = cfg.value("penalty", 1e10);
    const int enr_quad = cfg.value("enriched_quad", 9);

    // plate 10 x 10 with thickness 2 along y; crack plane z = 5, front x = 5
    NurbsPatch patch = kind == "linear" ? box_patch(10, 2, 10, 1, 1, 1, 9, 1, 9)
                                        : box_patch(10, 2, 10, 2, 1, 2, 7, 2, 7);
    const int p = patch.degree(0);
    const IgaMesh mesh = generate_mesh(patch);
    const VisualizationMesh vis = build_vis_mesh(mesh, patch);

    CrackGeometry crack;
    crack.is3d = true;
    crack.rect = {Vec3{0, 0, 5}, Vec3{5, 0, 5}, Vec3{5, 2, 5}, Vec3{0, 2, 5}};
    const LevelSetField ls = compute_level_sets(crack, vis);
    const EnrichmentState enr = select_enriched_nodes(mesh, vis, ls, 3);

    AssembledSystem sys = assemble_enriched(patch, mesh, mat, enr, crack, enr_quad);

    const auto exact_u = [&](const Vec3& x) { return mode_I_3d_displacement(lefm, x, crack); };
    // essential BCs on bottom, right and top surfaces via the penalty method
    for (int face : {4, 5, 1})
        apply_penalty(sys, extract_boundary(patch, face), {true, false, true}, exact_u, alpha,
                      3);
    // the exact field has u_y = 0 throughout; enforce it directly
    std::vector<int> dofs;
    for (int A = 0; A < mesh.n_np; ++A) dofs.push_back(3 * A + 1);
    // enriched y-dofs as well
    for (int A = 0; A < mesh.n_np; ++A)
        if (enr.extra_dof_start[A] >= 0) {
            const int nfun = enr.tag[A] == EnrichmentState::Tip ? 4 : 1;
            for (int f = 0; f < nfun; ++f) dofs.push_back(enr.extra_dof_start[A] + 3 * f + 1);
        }
    apply_direct(sys, dofs, std::vector<double>(dofs.size(), 0.0));

    const SolveReport rep = solve(sys);

    // even point count: no quadrature node can land on the tip line
    const int l2o = (p + 2) % 2 ? p + 3 : p + 2;
    const QuadratureRule rule = gauss_rule(l2o, 3);
    double num = 0, den = 0;
    for (int e = 0; e < mesh.n_el; ++e)
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            Vec3 xi;
            for (int d = 0; d < 3; ++d)
                xi[d] = parent_to_param(mesh.range(e, d), rule.points[g][d]);
            const Vec3 uh = enriched_displacement(patch, mesh, enr, crack, rep.solution, xi);
            const Vec3 ue = exact_u(mp.phys);
            num += dot(uh - ue, uh - ue) * mp.detJ * rule.weights[g];
            den += dot(ue, ue) * mp.detJ * rule.weights[g];
        }
    const double l2 = std::sqrt(num / den);

    double uy_max = 0.0, umax = 0.0;
    for (int A = 0; A < mesh.n_np; ++A) {
        uy_max = std::max(uy_max, std::fabs(rep.solution[3 * A + 1]));
        for (int c = 0; c < 3; ++c) umax = std::max(umax, std::fabs(rep.solution[3 * A + c]));
    }

    CaseResult result;
    const std::string label = mesh_label(mesh) + "-" + kind;
    result.rows.push_back({"mode-I-3d", label, p, sys.n_dof, "l2_error", l2, 0.0, l2});
    result.rows.push_back({"mode-I-3d", label, p, sys.n_dof, "uy_max_over_umax",
                           umax > 0 ? uy_max / umax : 0.0, 0.0,
                           umax > 0 ? uy_max / umax : 0.0});

    const ResultBundle bundle = recover_elasticity(
        std::vector<double>(rep.solution.begin(), rep.solution.begin() + 3 * mesh.n_np), patch,
        mesh, vis, mat);
    maybe_write_vtk(cfg, outdir, bundle, vis, "mode_I_3d_" + kind, VtkFormat::XmlStructured,
                    result);
    return result;
}

// -------------------------------------------------------------- clamped plate

CaseResult run_clamped_plate(const json& cfg, const std::string& outdir) {
    const int p = cfg.value("degree", 4);
    const int nel = cfg.value("elements", 16);
    const double L = cfg.value("L", 10.0);
    const double q = cfg.value("load", json::object()).value("magnitude", 1.0);
    const json jm = cfg.value("material", json{{"E", 1e7}, {"nu", 0.3}});
    PlateMaterial mat{jm.value("E", 1e7), jm.value("nu", 0.3), cfg.value("thickness", 0.1)};

    const NurbsPatch patch = rectangle_patch(L, L, p, p, nel, nel);
    const IgaMesh mesh = generate_mesh(patch);
    AssembledSystem sys = assemble_plate(patch, mesh, mat, cfg.value("quad", 0));

    const json load = cfg.value("load", json{{"type", "uniform"}, {"magnitude", 1.0}});
    if (load.value("type", std::string("uniform")) == "uniform") {
        add_uniform_pressure(patch, mesh, q, sys);
    } else {
        const auto loc = load.value("location", std::vector<double>{L / 2, L / 2});
        add_point_load(patch, mesh, {loc[0], loc[1], 0}, q, sys);
    }
    // bc: "clamped" everywhere, or per-face lists {"clamped": [...], "symmetry": [...]}
    const json bc = cfg.value("bc", json("clamped"));
    if (bc.is_string()) {
        clamp_boundary(sys, patch, {0, 1, 2, 3}, bc.get<std::string>() == "simply-supported"
                                                     ? 1 : 2);
    } else {
        std::vector<int> clamped;
        for (const json& f : bc.value("clamped", json::array()))
            clamped.push_back(parse_face(f));
        if (!clamped.empty()) clamp_boundary(sys, patch, clamped);
        for (const json& f : bc.value("symmetry", json::array()))
            couple_dofs_penalty(sys, symmetry_pairs(patch, parse_face(f)),
                                cfg.value("coupling_penalty", 1e10));
    }
    const SolveReport rep = solve(sys);

    const double wc = scalar_field_at(patch, rep.solution, {0.5, 0.5, 0});
    const double ref = 0.00126 * q * L * L * L * L / mat.rigidity();

    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    const ResultBundle bundle = recover_plate(rep.solution, patch, mesh, vis, mat);

    CaseResult result;
    result.rows.push_back({"clamped-plate", mesh_label(mesh), p, sys.n_dof,
                           "center_deflection", wc, ref, rel_err(wc, ref)});
    maybe_write_vtk(cfg, outdir, bundle, vis, "clamped_plate", VtkFormat::LegacyAscii, result);
    return result;
}

// --------------------------------------------------------- pinched cylinder

CaseResult run_pinched_cylinder(const json& cfg, const std::string& outdir) {
    const double R = cfg.value("R", 300.0), t = cfg.value("thickness", 3.0);
    const double L = cfg.value("L", 600.0), P = cfg.value("P", 1.0);
    MaterialModel mat = parse_material(cfg.value("material", json{{"E", 3e6},
                                                                  {"nu", 0.3},
                                                                  {"mode", "solid"}}));
    const int levels = cfg.value("refine", 2);

    NurbsPatch patch = cylinder_octant(R, t, L / 2);
    patch = elevate_degree(patch, 1, 1);  // quadratic through thickness
    patch = elevate_degree(patch, 2, 1);  // quadratic axially
    for (int lvl = 0; lvl < levels; ++lvl) {
        const auto uq0 = patch.kv(0).unique_knots();
        for (size_t i = 0; i + 1 < uq0.size(); ++i)
            patch = insert_knot(patch, 0, 0.5 * (uq0[i] + uq0[i + 1]), 1);
        const auto uq2 = patch.kv(2).unique_knots();
        for (size_t i = 0; i + 1 < uq2.size(); ++i)
            patch = insert_knot(patch, 2, 0.5 * (uq2[i] + uq2[i + 1]), 1);
    }
    const IgaMesh mesh = generate_mesh(patch);

    AssembledSystem sys = assemble_elasticity(patch, mesh, mat);

    // diaphragm at z = 0, symmetry planes at z = L/2, y = 0 and x = 0
    std::vector<int> dofs;
    for (int A : extract_boundary(patch, 4).control_map) {
        dofs.push_back(3 * A);
        dofs.push_back(3 * A + 1);
    }
    for (int A : extract_boundary(patch, 5).control_map) dofs.push_back(3 * A + 2);
    for (int A : extract_boundary(patch, 0).control_map) dofs.push_back(3 * A + 1);
    for (int A : extract_boundary(patch, 1).control_map) dofs.push_back(3 * A);
    std::sort(dofs.begin(), dofs.end());
    dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
    apply_direct(sys, dofs, std::vector<double>(dofs.size(), 0.0));

    // quarter pinch load at the mid-length top point, inward
    const Vec3 xi_load{1.0, 0.5, 1.0};
    const BasisDers bd = patch.basis_ders(xi_load, 0);
    const auto act = patch.active_controls(bd.span);
    for (size_t a = 0; a < act.size(); ++a) sys.F[3 * act[a] + 1] -= 0.25 * P * bd.R[a];

    const SolveReport rep = solve(sys);
    const Vec3 u_load = vector_field_at(patch, rep.solution, 3, xi_load);

    const VisualizationMesh vis = build_vis_mesh(mesh, patch);
    const ResultBundle bundle = recover_elasticity(rep.solution, patch, mesh, vis, mat);

    CaseResult result;
    result.rows.push_back({"pinched-cylinder-3d", mesh_label(mesh), patch.degree(0),
                           sys.n_dof, "u_load_point", u_load.y, 0.0, 0.0});
    maybe_write_vtk(cfg, outdir, bundle, vis, "pinched_cylinder", VtkFormat::XmlStructured,
                    result);
    return result;
}

}  // namespace

std::vector<std::string> case_catalog() {
    return {"poisson-1d", "poisson-1d-gradient", "plate-hole",   "edge-crack",
            "griffith-modeI", "mode-I-3d",       "clamped-plate", "pinched-cylinder-3d"};
}

std::string builtin_config(const std::string& name) {
    json j;
    if (name == "poisson-1d") {
        j = {{"case", name}, {"problem", "poisson1d"}, {"degree", 2}, {"elements", 4}};
    } else if (name == "poisson-1d-gradient") {
        j = {{"case", name},   {"problem", "poisson1d-gradient"}, {"degree", 3},
             {"elements", 16}, {"alpha", 50.0},                   {"basis", "c0"}};
    } else if (name == "plate-hole") {
        j = {{"case", name},
             {"problem", "plate-hole"},
             {"degree", 2},
             {"refine", 4},
             {"L", 4.0},
             {"R", 1.0},
             {"sigma", 1.0},
             {"material", {{"E", 1000.0}, {"nu", 0.3}, {"mode", "plane-stress"}}}};
    } else if (name == "edge-crack") {
        j = {{"case", name},
             {"problem", "edge-crack"},
             {"degree", 3},
             {"cp_x", 36},
             {"cp_y", 72},
             {"a_over_b", 0.3},
             {"sigma", 1.0},
             {"sif", {{"rd", 4.0}}},
             {"enriched_quad", 13},
             {"material", {{"E", 1000.0}, {"nu", 0.3}, {"mode", "plane-strain"}}}};
    } else if (name == "griffith-modeI") {
        j = {{"case", name},
             {"problem", "griffith"},
             {"degree", 2},
             {"elements", 17},
             {"width", 10.0},
             {"a", 100.0},
             {"sigma", 1e4},
             {"bc_method", "lagrange"},
             {"enriched_quad", 13},
             {"material", {{"E", 1e7}, {"nu", 0.3}, {"mode", "plane-strain"}}}};
    } else if (name == "mode-I-3d") {
        j = {{"case", name},
             {"problem", "mode-i-3d"},
             {"mesh", "quadratic"},
             {"a", 100.0},
             {"sigma", 1e4},
             {"penalty", 1e10},
             {"enriched_quad", 9},
             {"material", {{"E", 1e7}, {"nu", 0.3}, {"mode", "solid"}}}};
    } else if (name == "clamped-plate") {
        j = {{"case", name},
             {"problem", "plate"},
             {"degree", 4},
             {"elements", 16},
             {"L", 10.0},
             {"thickness", 0.1},
             {"load", {{"type", "uniform"}, {"magnitude", 1.0}}},
             {"bc", "clamped"},
             {"material", {{"E", 1e7}, {"nu", 0.3}}}};
    } else if (name == "pinched-cylinder-3d") {
        j = {{"case", name},
             {"problem", "pinched-cylinder"},
             {"refine", 2},
             {"R", 300.0},
             {"L", 600.0},
             {"thickness", 3.0},
             {"P", 1.0},
             {"material", {{"E", 3e6}, {"nu", 0.3}, {"mode", "solid"}}}};
    } else {
        throw std::invalid_argument("unknown case '" + name + "'");
    }
    return j.dump(2);
}

CaseResult run_case(const std::string& config_json, const std::string& outdir) {
    json cfg;
    try {
        cfg = json::parse(config_json);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (cfg.contains("case")) {
        // a built-in name pulls in its defaults; otherwise "case" is a label
        const std::string name = cfg.at("case").get<std::string>();
        const auto catalog = case_catalog();
        if (std::find(catalog.begin(), catalog.end(), name) != catalog.end()) {
            json base = json::parse(builtin_config(name));
            base.merge_patch(cfg);
            cfg = base;
        } else if (!cfg.contains("problem")) {
            throw std::invalid_argument("unknown case '" + name + "'");
        }
    }
    if (!cfg.contains("problem"))
        throw std::invalid_argument("config: missing key 'problem' (or unknown 'case')");
    const std::string problem = cfg.at("problem").get<std::string>();

    // --refine h:k sets an extra degree raise on top of the case's base degree
    if (cfg.value("refine_elevate", 0) > 0)
        cfg["degree"] = cfg.value("degree", 2) + cfg["refine_elevate"].get<int>();

    CaseResult result;
    if (problem == "poisson1d") result = run_poisson_1d(cfg, outdir);
    else if (problem == "poisson1d-gradient") result = run_poisson_1d_gradient(cfg, outdir);
    else if (problem == "plate-hole") result = run_plate_hole(cfg, outdir);
    else if (problem == "edge-crack") result = run_edge_crack(cfg, outdir);
    else if (problem == "griffith") result = run_griffith(cfg, outdir);
    else if (problem == "mode-i-3d") result = run_mode_I_3d(cfg, outdir);
    else if (problem == "plate") result = run_clamped_plate(cfg, outdir);
    else if (problem == "pinched-cylinder") result = run_pinched_cylinder(cfg, outdir);
    else if (problem == "elasticity") result = run_custom_elasticity(cfg, outdir);
    else throw std::invalid_argument("config problem: unknown value '" + problem + "'");

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        const std::string csv = outdir + "/metrics.csv";
        write_metrics_csv(csv, result.rows);
        result.artifacts.push_back(csv);
    }
    return result;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
    const bool exists = std::filesystem::exists(path);
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::runtime_error("cannot open " + path);
    if (!exists) os << "case,mesh,p,dofs,metric,value,ref,rel_error\n";
    for (const MetricRow& r : rows)
        os << r.case_name << "," << r.mesh << "," << r.p << "," << r.dofs << "," << r.metric
           << "," << vtk_format(r.value) << "," << vtk_format(r.ref) << ","
           << vtk_format(r.rel_error) << "\n";
}

CaseResult convergence_study(const std::string& case_name, int levels,
                             const std::string& overrides_json, const std::string& outdir) {
    json overrides = overrides_json.empty() ? json::object() : json::parse(overrides_json);
    CaseResult all;
    std::vector<double> errors;
    std::vector<int> dofs;

    if (case_name == "poisson-1d-gradient") {
        // paired study: C0-inserted basis versus the smooth basis at matched
        // dof count, one pair per level
        for (int lvl = 1; lvl <= levels; ++lvl) {
            json cfg = json::parse(builtin_config(case_name));
            cfg.merge_patch(overrides);
            cfg["output"] = {{"vtk", false}};
            cfg["elements"] = 16 * (1 << (lvl - 1));
            cfg["basis"] = "c0";
            const CaseResult c0 = run_case(cfg.dump(), "");
            int nd = 0;
            for (const MetricRow& r : c0.rows) nd = r.dofs;
            cfg["basis"] = "smooth";
            cfg["elements"] = nd - cfg.value("degree", 3);
            const CaseResult sm = run_case(cfg.dump(), "");
            all.rows.insert(all.rows.end(), c0.rows.begin(), c0.rows.end());
            all.rows.insert(all.rows.end(), sm.rows.begin(), sm.rows.end());
            double e_c0 = 0, e_sm = 0;
            for (const MetricRow& r : c0.rows)
                if (r.metric == "nodal_max_error") e_c0 = r.value;
            for (const MetricRow& r : sm.rows)
                if (r.metric == "nodal_max_error") e_sm = r.value;
            all.rows.push_back({case_name, "level-" + std::to_string(lvl), 0, nd,
                                "smooth_over_c0_error_ratio", e_sm / e_c0, 0.0, 0.0});
        }
        if (!outdir.empty()) {
            std::filesystem::create_directories(outdir);
            write_metrics_csv(outdir + "/convergence.csv", all.rows);
        }
        return all;
    }

    for (int lvl = 1; lvl <= levels; ++lvl) {
        json cfg = json::parse(builtin_config(case_name));
        cfg.merge_patch(overrides);
        if (cfg.contains("elements")) {
            const int base = cfg.value("elements", 2);
            cfg["elements"] = base * (1 << (lvl - 1));
        } else if (cfg.contains("refine")) {
            cfg["refine"] = cfg.value("refine", 1) - levels + lvl;
        }
        cfg["output"] = {{"vtk", false}};
        const CaseResult res = run_case(cfg.dump(), "");
        for (const MetricRow& r : res.rows)
            if (r.metric == "l2_error" || r.metric == "stress_l2_error") {
                errors.push_back(r.value);
                dofs.push_back(r.dofs);
            }
        all.rows.insert(all.rows.end(), res.rows.begin(), res.rows.end());
    }
    for (size_t i = 1; i < errors.size(); ++i) {
        const double rate = std::log2(errors[i - 1] / errors[i]);
        all.rows.push_back({case_name, "rate-" + std::to_string(i), 0, dofs[i], "l2_rate",
                            rate, 0.0, 0.0});
    }
    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        write_metrics_csv(outdir + "/convergence.csv", all.rows);
    }
    return all;
}

} // namespace iga
