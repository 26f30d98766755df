#include "iga/post.hpp"

#include <cmath>

#include "iga/errors.hpp"

namespace iga {

namespace {

// locate the element owning a vis node and the parent coordinate of the node
// inside it (corners map to +-1)
void owner_element(const IgaMesh& mesh, const VisualizationMesh& vis, int node_grid_i, int d,
                   int& span_idx, double& xt) {
    const int nel = mesh.nel_dir[d];
    if (node_grid_i < nel) {
        span_idx = node_grid_i;
        xt = -1.0;
    } else {
        span_idx = nel - 1;
        xt = 1.0;
    }
    (void)vis;
}

}  // namespace

std::array<double, 6> stress_at(const NurbsPatch& patch, const IgaMesh& mesh, int element,
                                const Vec3& xt, const MaterialModel& mat,
                                const std::vector<double>& u) {
    const int ds = patch.spatial_dim();
    const MappedPoint mp = map_point(patch, mesh, element, xt);
    DenseMatrix B;
    strain_displacement(mp, ds, B);
    const DenseMatrix D = elasticity_D(mat);
    const int nv = ds == 2 ? 3 : 6;
    std::array<double, 6> strain{}, stress{};
    const auto& conn = mesh.element[element];
    for (size_t a = 0; a < conn.size(); ++a)
        for (int c = 0; c < ds; ++c) {
            const double ua = u[ds * conn[a] + c];
            if (ua == 0.0) continue;
            for (int r = 0; r < nv; ++r) strain[r] += B(r, ds * int(a) + c) * ua;
        }
    for (int r = 0; r < nv; ++r)
        for (int s = 0; s < nv; ++s) stress[r] += D(r, s) * strain[s];
    return stress;
}

ResultBundle recover_elasticity(const std::vector<double>& u, const NurbsPatch& patch,
                                const IgaMesh& mesh, const VisualizationMesh& vis,
                                const MaterialModel& mat) {
    const int ds = patch.spatial_dim();
    ResultBundle out;
    out.n_stress = ds == 2 ? 3 : 6;
    out.displacement.resize(vis.nodes.size());
    out.stress.resize(vis.nodes.size());

    for (int k = 0; k < vis.grid[2]; ++k)
        for (int j = 0; j < vis.grid[1]; ++j)
            for (int i = 0; i < vis.grid[0]; ++i) {
                const int node = vis.node_index(i, j, k);
                std::array<int, 3> ei{0, 0, 0};
                Vec3 xt;
                const std::array<int, 3> gi{i, j, k};
                for (int d = 0; d < mesh.dim; ++d)
                    owner_element(mesh, vis, gi[d], d, ei[d], xt[d]);
                const int e =
                    ei[0] + mesh.nel_dir[0] * (ei[1] + mesh.nel_dir[1] * ei[2]);
                out.displacement[node] = vector_field_at(patch, u, ds, vis.param[node]);
                try {
                    out.stress[node] = stress_at(patch, mesh, e, xt, mat, u);
                } catch (const SingularGeometryError&) {
                    // degenerate corner: evaluate slightly inside the element
                    Vec3 shifted = xt;
                    for (int d = 0; d < mesh.dim; ++d)
                        shifted[d] -= 2e-6 * (xt[d] > 0 ? 1.0 : -1.0);
                    out.stress[node] = stress_at(patch, mesh, e, shifted, mat, u);
                }
            }
    return out;
}

ResultBundle recover_scalar(const std::vector<double>& u, const NurbsPatch& patch,
                            const IgaMesh& mesh, const VisualizationMesh& vis) {
    (void)mesh;
    ResultBundle out;
    out.displacement.resize(vis.nodes.size());
    out.stress.resize(vis.nodes.size());
    out.n_stress = 0;
    for (size_t n = 0; n < vis.nodes.size(); ++n)
        out.displacement[n] = {scalar_field_at(patch, u, vis.param[n]), 0, 0};
    return out;
}

double scalar_field_at(const NurbsPatch& patch, const std::vector<double>& u, const Vec3& xi) {
    const BasisDers bd = patch.basis_ders(xi, 0);
    const auto act = patch.active_controls(bd.span);
    double v = 0.0;
    for (size_t a = 0; a < act.size(); ++a) v += bd.R[a] * u[act[a]];
    return v;
}

Vec3 vector_field_at(const NurbsPatch& patch, const std::vector<double>& u, int n_comp,
                     const Vec3& xi) {
    const BasisDers bd = patch.basis_ders(xi, 0);
    const auto act = patch.active_controls(bd.span);
    Vec3 v;
    for (size_t a = 0; a < act.size(); ++a)
        for (int c = 0; c < n_comp; ++c) v[c] += bd.R[a] * u[n_comp * act[a] + c];
    return v;
}

ErrorNorms error_norms(const std::vector<double>& u, const NurbsPatch& patch,
                       const IgaMesh& mesh, const MaterialModel& mat,
                       const std::function<Vec3(const Vec3&)>& exact_disp,
                       const std::function<std::array<double, 6>(const Vec3&)>& exact_strain) {
    const int ds = patch.spatial_dim();
    const int nv = ds == 2 ? 3 : 6;
    const DenseMatrix D = elasticity_D(mat);
    std::array<int, 3> orders = default_orders(patch);
    for (int d = 0; d < patch.dim(); ++d) orders[d] += 1;  // p + 2
    const QuadratureRule rule = gauss_rule(orders, patch.dim());

    double num = 0, den = 0, enum_ = 0, eden = 0;
    DenseMatrix B;
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& conn = mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            const double w = mp.detJ * rule.weights[g];
            Vec3 uh;
            for (size_t a = 0; a < conn.size(); ++a)
                for (int c = 0; c < ds; ++c) uh[c] += mp.R[a] * u[ds * conn[a] + c];
            const Vec3 ue = exact_disp(mp.phys);
            num += w * dot(uh - ue, uh - ue);
            den += w * dot(ue, ue);
            if (exact_strain) {
                strain_displacement(mp, ds, B);
                std::array<double, 6> eh{};
                for (size_t a = 0; a < conn.size(); ++a)
                    for (int c = 0; c < ds; ++c) {
                        const double ua = u[ds * conn[a] + c];
                        for (int r = 0; r < nv; ++r) eh[r] += B(r, ds * int(a) + c) * ua;
                    }
                const std::array<double, 6> ee = exact_strain(mp.phys);
                double de = 0, dd = 0;
                for (int r = 0; r < nv; ++r)
                    for (int s = 0; s < nv; ++s) {
                        de += (eh[r] - ee[r]) * D(r, s) * (eh[s] - ee[s]);
                        dd += ee[r] * D(r, s) * ee[s];
                    }
                enum_ += w * de;
                eden += w * dd;
            }
        }
    }
    ErrorNorms n;
    n.l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    n.energy = exact_strain ? (eden > 0 ? std::sqrt(enum_ / eden) : std::sqrt(enum_)) : 0.0;
    return n;
}

ErrorNorms error_norms_scalar(const std::vector<double>& u, const NurbsPatch& patch,
                              const IgaMesh& mesh, const std::function<double(double)>& exact,
                              const std::function<double(double)>& exact_deriv) {
    std::array<int, 3> orders = default_orders(patch);
    orders[0] += 1;
    const QuadratureRule rule = gauss_rule(orders, 1);
    double num = 0, den = 0, enum_ = 0, eden = 0;
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& conn = mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            const double w = mp.detJ * rule.weights[g];
            double uh = 0, duh = 0;
            for (size_t a = 0; a < conn.size(); ++a) {
                uh += mp.R[a] * u[conn[a]];
                duh += mp.dRdx(int(a), 0) * u[conn[a]];
            }
            const double ue = exact(mp.phys.x);
            num += w * (uh - ue) * (uh - ue);
            den += w * ue * ue;
            if (exact_deriv) {
                const double de = exact_deriv(mp.phys.x);
                enum_ += w * (duh - de) * (duh - de);
                eden += w * de * de;
            }
        }
    }
    ErrorNorms n;
    n.l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    n.energy = exact_deriv ? (eden > 0 ? std::sqrt(enum_ / eden) : std::sqrt(enum_)) : 0.0;
    return n;
}

double stress_l2_error(const std::vector<double>& u, const NurbsPatch& patch,
                       const IgaMesh& mesh, const MaterialModel& mat,
                       const std::function<std::array<double, 6>(const Vec3&)>& exact_stress) {
    const int ds = patch.spatial_dim();
    const int nv = ds == 2 ? 3 : 6;
    std::array<int, 3> orders = default_orders(patch);
    for (int d = 0; d < patch.dim(); ++d) orders[d] += 1;
    const QuadratureRule rule = gauss_rule(orders, patch.dim());
    double num = 0, den = 0;
    for (int e = 0; e < mesh.n_el; ++e)
        for (size_t g = 0; g < rule.points.size(); ++g) {
            MappedPoint mp;
            try {
                mp = map_point(patch, mesh, e, rule.points[g]);
            } catch (const SingularGeometryError&) {
                continue;
            }
            const double w = mp.detJ * rule.weights[g];
            const auto sh = stress_at(patch, mesh, e, rule.points[g], mat, u);
            const auto se = exact_stress(mp.phys);
            for (int r = 0; r < nv; ++r) {
                num += w * (sh[r] - se[r]) * (sh[r] - se[r]);
                den += w * se[r] * se[r];
            }
        }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

double strain_energy(AssembledSystem& sys, const std::vector<double>& u) {
    std::vector<double> Ku;
    sys.finalize();
    sys.K.multiply(u, Ku);
    double e = 0.0;
    for (size_t i = 0; i < u.size(); ++i) e += u[i] * Ku[i];
    return 0.5 * e;
}

} // namespace iga
