#include "iga/plate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iga/bc.hpp"
#include "iga/errors.hpp"

namespace iga {

DenseMatrix plate_D(const PlateMaterial& mat) {
    if (!(mat.thickness > 0.0)) throw std::invalid_argument("plate: thickness must be > 0");
    const double d = mat.rigidity();
    if (!(d > 0.0)) throw std::invalid_argument("plate: invalid bending rigidity");
    DenseMatrix D(3, 3);
    D(0, 0) = D(1, 1) = d;
    D(0, 1) = D(1, 0) = d * mat.nu;
    D(2, 2) = d * 0.5 * (1.0 - mat.nu);
    return D;
}

DenseMatrix second_spatial_derivatives(const NurbsPatch& patch, const IgaMesh& mesh,
                                       int element, const Vec3& xt) {
    if (patch.dim() != 2) throw std::invalid_argument("second derivatives: 2D patches only");
    Vec3 xi;
    std::array<int, 3> spans{0, 0, 0};
    for (int d = 0; d < 2; ++d) {
        const auto r = mesh.range(element, d);
        xi[d] = parent_to_param(r, xt[d]);
        spans[d] = patch.kv(d).find_span(0.5 * (r[0] + r[1]));
    }
    const BasisDers bd = patch.basis_ders(xi, 2, &spans);
    const auto& conn = mesh.element[element];
    const int n = int(conn.size());

    // first and second derivatives of the geometry map
    double dxdxi = 0, dydxi = 0, dxdet = 0, dydet = 0;
    std::array<double, 6> g2{};  // (x,y) x (xixi, etaeta, xieta)
    for (int a = 0; a < n; ++a) {
        const Vec3& P = patch.net().points[conn[a]];
        dxdxi += P.x * bd.dR(a, 0);
        dydxi += P.y * bd.dR(a, 0);
        dxdet += P.x * bd.dR(a, 1);
        dydet += P.y * bd.dR(a, 1);
        g2[0] += P.x * bd.d2R(a, 0);
        g2[1] += P.y * bd.d2R(a, 0);
        g2[2] += P.x * bd.d2R(a, 1);
        g2[3] += P.y * bd.d2R(a, 1);
        g2[4] += P.x * bd.d2R(a, 2);
        g2[5] += P.y * bd.d2R(a, 2);
    }

    // first spatial derivatives dRdx = J^-1 [dRdxi; dRdeta]
    std::array<double, 4> J{dxdxi, dxdet, dydxi, dydet}, Ji{};
    const double det = J[0] * J[3] - J[1] * J[2];
    if (std::fabs(det) <= 1e-14) throw SingularGeometryError(element, xi.x, xi.y, 0);
    invert2(J, Ji);
    // dR/dx_i = dR/dxi_j * (J^-1)_{ji}
    DenseMatrix dRdx(2, n);
    for (int a = 0; a < n; ++a) {
        dRdx(0, a) = Ji[0] * bd.dR(a, 0) + Ji[2] * bd.dR(a, 1);
        dRdx(1, a) = Ji[1] * bd.dR(a, 0) + Ji[3] * bd.dR(a, 1);
    }

    // j33 c = rhs with rows (xixi, etaeta, xieta)
    std::array<double, 9> j33{dxdxi * dxdxi, dydxi * dydxi, 2 * dxdxi * dydxi,
                              dxdet * dxdet, dydet * dydet, 2 * dxdet * dydet,
                              dxdxi * dxdet, dydxi * dydet, dxdxi * dydet + dxdet * dydxi};
    std::array<double, 9> j33i{};
    const double det0 = invert3(j33, j33i);
    if (std::fabs(det0) <= 1e-20) throw SingularGeometryError(element, xi.x, xi.y, 0);

    DenseMatrix out(3, n);
    for (int a = 0; a < n; ++a) {
        // parametric second derivatives minus the geometry curvature term
        const double r0 = bd.d2R(a, 0) - (g2[0] * dRdx(0, a) + g2[1] * dRdx(1, a));
        const double r1 = bd.d2R(a, 1) - (g2[2] * dRdx(0, a) + g2[3] * dRdx(1, a));
        const double r2 = bd.d2R(a, 2) - (g2[4] * dRdx(0, a) + g2[5] * dRdx(1, a));
        out(0, a) = j33i[0] * r0 + j33i[1] * r1 + j33i[2] * r2;
        out(1, a) = j33i[3] * r0 + j33i[4] * r1 + j33i[5] * r2;
        out(2, a) = j33i[6] * r0 + j33i[7] * r1 + j33i[8] * r2;
    }
    return out;
}

AssembledSystem assemble_plate(const NurbsPatch& patch, const IgaMesh& mesh,
                               const PlateMaterial& mat, int quad_order) {
    if (patch.dim() != 2) throw std::invalid_argument("assemble_plate: 2D patch required");
    if (patch.degree(0) < 2 || patch.degree(1) < 2)
        throw std::invalid_argument("assemble_plate: p, q >= 2 required for C1 continuity");

    AssembledSystem sys;
    sys.init(mesh.n_np);
    const DenseMatrix D = plate_D(mat);

    std::array<int, 3> orders = default_orders(patch);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule rule = gauss_rule(orders, 2);

    std::vector<std::vector<Triplet>> slots(mesh.n_el);
    parallel_elements(mesh.n_el, [&](int e) {
        const auto& conn = mesh.element[e];
        const int n = int(conn.size());
        DenseMatrix ke(n, n);
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            DenseMatrix B = second_spatial_derivatives(patch, mesh, e, rule.points[g]);
            for (int a = 0; a < n; ++a) B(2, a) *= 2.0;  // curvature uses 2 w,xy
            accumulate_AtBA(B, D, mp.detJ * rule.weights[g], ke);
        }
        auto& out = slots[e];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out.push_back({conn[a], conn[b], ke(a, b)});
    });
    for (auto& s : slots) sys.triplets.insert(sys.triplets.end(), s.begin(), s.end());
    return sys;
}

void add_uniform_pressure(const NurbsPatch& patch, const IgaMesh& mesh, double q,
                          AssembledSystem& sys) {
    const QuadratureRule rule = gauss_rule(default_orders(patch), 2);
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& conn = mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            const double w = q * mp.detJ * rule.weights[g];
            for (size_t a = 0; a < conn.size(); ++a) sys.F[conn[a]] += mp.R[a] * w;
        }
    }
}

Vec3 locate_parameter(const NurbsPatch& patch, const Vec3& target, double tol) {
    Vec3 xi;
    for (int d = 0; d < patch.dim(); ++d)
        xi[d] = 0.5 * (patch.kv(d).front() + patch.kv(d).back());
    for (int it = 0; it < 100; ++it) {
        const BasisDers bd = patch.basis_ders(xi, 1);
        const auto act = patch.active_controls(bd.span);
        Vec3 x;
        std::array<double, 4> J{};
        for (size_t a = 0; a < act.size(); ++a) {
            const Vec3& P = patch.net().points[act[a]];
            x += bd.R[a] * P;
            J[0] += P.x * bd.dR(int(a), 0);
            J[1] += P.x * bd.dR(int(a), 1);
            J[2] += P.y * bd.dR(int(a), 0);
            J[3] += P.y * bd.dR(int(a), 1);
        }
        const Vec3 r = target - x;
        if (norm(r) < tol) return xi;
        std::array<double, 4> Ji{};
        invert2(J, Ji);
        xi.x += Ji[0] * r.x + Ji[1] * r.y;
        xi.y += Ji[2] * r.x + Ji[3] * r.y;
        for (int d = 0; d < patch.dim(); ++d)
            xi[d] = std::clamp(xi[d], patch.kv(d).front(), patch.kv(d).back());
    }
    throw ConvergenceError(100, norm(target - patch.eval_point(xi)));
}

void add_point_load(const NurbsPatch& patch, const IgaMesh& mesh, const Vec3& location,
                    double P, AssembledSystem& sys) {
    (void)mesh;
    const Vec3 xi = locate_parameter(patch, location);
    const BasisDers bd = patch.basis_ders(xi, 0);
    const auto act = patch.active_controls(bd.span);
    for (size_t a = 0; a < act.size(); ++a) sys.F[act[a]] += P * bd.R[a];
}

std::vector<int> boundary_rows(const NurbsPatch& patch, int face, int rows) {
    const int dir = face / 2;
    const bool upper = face % 2 == 1;
    const auto& dims = patch.net().dims;
    if (dims[dir] < rows + 1)
        throw std::invalid_argument("boundary_rows: not enough control points across face");
    std::vector<int> out;
    for (int r = 0; r < rows; ++r) {
        const int fixed = upper ? dims[dir] - 1 - r : r;
        for (int k = 0; k < (patch.dim() > 2 ? dims[2] : 1); ++k)
            for (int j = 0; j < (patch.dim() > 1 ? dims[1] : 1); ++j)
                for (int i = 0; i < dims[0]; ++i) {
                    const std::array<int, 3> ijk{i, j, k};
                    if (ijk[dir] != fixed) continue;
                    out.push_back(patch.net().index(i, j, k));
                }
    }
    return out;
}

void clamp_boundary(AssembledSystem& sys, const NurbsPatch& patch,
                    const std::vector<int>& faces, int rows) {
    std::vector<int> dofs;
    for (int f : faces) {
        const std::vector<int> cps = boundary_rows(patch, f, rows);
        dofs.insert(dofs.end(), cps.begin(), cps.end());
    }
    std::sort(dofs.begin(), dofs.end());
    dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
    apply_direct(sys, dofs, std::vector<double>(dofs.size(), 0.0));
}

std::vector<std::pair<int, int>> symmetry_pairs(const NurbsPatch& patch, int face) {
    const std::vector<int> edge = boundary_rows(patch, face, 1);
    const std::vector<int> both = boundary_rows(patch, face, 2);
    std::vector<int> next;
    for (int A : both)
        if (std::find(edge.begin(), edge.end(), A) == edge.end()) next.push_back(A);
    if (edge.size() != next.size()) throw std::logic_error("symmetry_pairs: row mismatch");
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < edge.size(); ++i) pairs.emplace_back(edge[i], next[i]);
    return pairs;
}

ResultBundle recover_plate(const std::vector<double>& w, const NurbsPatch& patch,
                           const IgaMesh& mesh, const VisualizationMesh& vis,
                           const PlateMaterial& mat) {
    ResultBundle out;
    out.displacement.resize(vis.nodes.size());
    out.stress.resize(vis.nodes.size());
    out.n_stress = 3;
    const DenseMatrix D = plate_D(mat);
    for (int j = 0; j < vis.grid[1]; ++j)
        for (int i = 0; i < vis.grid[0]; ++i) {
            const int node = vis.node_index(i, j, 0);
            out.displacement[node] = {0, 0, scalar_field_at(patch, w, vis.param[node])};
            const int ei = std::min(i, mesh.nel_dir[0] - 1);
            const int ej = std::min(j, mesh.nel_dir[1] - 1);
            const int e = ei + mesh.nel_dir[0] * ej;
            const Vec3 xt{i < mesh.nel_dir[0] ? -1.0 : 1.0, j < mesh.nel_dir[1] ? -1.0 : 1.0,
                          0};
            const DenseMatrix d2 = second_spatial_derivatives(patch, mesh, e, xt);
            const auto& conn = mesh.element[e];
            double kap[3] = {0, 0, 0};
            for (size_t a = 0; a < conn.size(); ++a) {
                kap[0] += d2(0, int(a)) * w[conn[a]];
                kap[1] += d2(1, int(a)) * w[conn[a]];
                kap[2] += 2.0 * d2(2, int(a)) * w[conn[a]];
            }
            for (int r = 0; r < 3; ++r)
                out.stress[node][r] = D(r, 0) * kap[0] + D(r, 1) * kap[1] + D(r, 2) * kap[2];
        }
    return out;
}

} // namespace iga
