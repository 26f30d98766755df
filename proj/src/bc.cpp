#include "iga/bc.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

#include "iga/errors.hpp"

namespace iga {

void apply_direct(AssembledSystem& sys, const std::vector<int>& dofs,
                  const std::vector<double>& values) {
    if (dofs.size() != values.size())
        throw std::invalid_argument("apply_direct: dof/value count mismatch");
    if (dofs.empty()) return;
    if (sys.finalized) throw std::logic_error("apply_direct: system already finalized");

    if (!sys.unconstrained) {
        sys.unconstrained =
            std::make_shared<SparseMatrix>(SparseMatrix::from_triplets(sys.n_dof, sys.triplets));
        sys.F_unconstrained = sys.F;
    }

    std::map<int, double> fixed;
    for (size_t i = 0; i < dofs.size(); ++i) fixed[dofs[i]] = values[i];

    // lift: F_A -= K_Aj g_j for retained rows
    for (const Triplet& t : sys.triplets) {
        const auto it = fixed.find(t.c);
        if (it != fixed.end() && !fixed.count(t.r)) sys.F[t.r] -= t.v * it->second;
    }
    std::erase_if(sys.triplets,
                  [&](const Triplet& t) { return fixed.count(t.r) || fixed.count(t.c); });
    for (const auto& [dof, g] : fixed) {
        sys.triplets.push_back({dof, dof, 1.0});
        sys.F[dof] = g;
        sys.fixed_dofs.push_back(dof);
        sys.fixed_values.push_back(g);
    }
}

void apply_penalty(AssembledSystem& sys, const BoundaryMesh& bnd, std::array<bool, 3> comps,
                   const std::function<Vec3(const Vec3&)>& value, double alpha, int n_comp,
                   int quad_order) {
    if (alpha < 0.0) throw std::invalid_argument("apply_penalty: alpha must be >= 0");
    if (alpha == 0.0) return;

    double kmax = 0.0;
    for (const Triplet& t : sys.triplets) kmax = std::max(kmax, std::fabs(t.v));
    if (kmax > 0.0 && alpha / kmax > 1e16)
        std::cerr << "warning: penalty spans more than 1e16 of the stiffness range\n";

    const NurbsPatch& bp = bnd.patch;
    std::array<int, 3> orders = default_orders(bp);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule rule = gauss_rule(orders, bp.dim());

    for (int e = 0; e < bnd.mesh.n_el; ++e) {
        const auto& conn = bnd.mesh.element[e];
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(bp, bnd.mesh, e, rule.points[g]);
            const Vec3 gbar = value(mp.phys);
            const double w = alpha * mp.detJ * rule.weights[g];
            for (size_t a = 0; a < conn.size(); ++a) {
                const int A = bnd.control_map[conn[a]];
                for (int c = 0; c < n_comp; ++c) {
                    if (!comps[c]) continue;
                    sys.F[n_comp * A + c] += w * mp.R[a] * gbar[c];
                    for (size_t b = 0; b < conn.size(); ++b) {
                        const int B = bnd.control_map[conn[b]];
                        sys.add(n_comp * A + c, n_comp * B + c, w * mp.R[a] * mp.R[b]);
                    }
                }
            }
        }
    }
}

namespace {

// Greville collocation points of a boundary patch, in parametric form.
std::vector<Vec3> greville_grid(const NurbsPatch& bp) {
    std::array<std::vector<double>, 3> g1;
    for (int d = 0; d < bp.dim(); ++d)
        for (int i = 0; i < bp.kv(d).num_basis(); ++i) g1[d].push_back(bp.kv(d).greville(i));
    for (int d = bp.dim(); d < 3; ++d) g1[d] = {0.0};
    std::vector<Vec3> out;
    for (double c : g1[2])
        for (double b : g1[1])
            for (double a : g1[0]) out.push_back({a, b, c});
    return out;
}

}  // namespace

void apply_lagrange(AssembledSystem& sys, const BoundaryMesh& bnd, std::array<bool, 3> comps,
                    const std::function<Vec3(const Vec3&)>& value, int n_comp) {
    const NurbsPatch& bp = bnd.patch;
    for (const Vec3& xi : greville_grid(bp)) {
        const BasisDers bd = bp.basis_ders(xi, 0);
        const std::vector<int> act = bp.active_controls(bd.span);
        const Vec3 x = bp.eval_point(xi);

        // skip collocation points already constrained (shared patch corners)
        bool duplicate = false;
        for (const auto& prev : sys.lagrange_points)
            if (norm(prev - x) < 1e-12 * (1.0 + norm(x))) duplicate = true;
        if (duplicate) continue;
        sys.lagrange_points.push_back(x);

        const Vec3 gbar = value(x);
        for (int c = 0; c < n_comp; ++c) {
            if (!comps[c]) continue;
            const int row = sys.n_lagrange++;
            for (size_t a = 0; a < act.size(); ++a) {
                const int A = bnd.control_map[act[a]];
                sys.constraints.push_back({row, n_comp * A + c, bd.R[a]});
            }
            sys.constraint_rhs.push_back(gbar[c]);
        }
    }
}

ProjectedBoundaryValues least_squares_project(const BoundaryMesh& bnd,
                                              const std::function<Vec3(const Vec3&)>& value,
                                              int n_collocation_per_element) {
    if (n_collocation_per_element < 2)
        throw std::invalid_argument("least_squares_project: need >= 2 collocation points");
    const NurbsPatch& bp = bnd.patch;
    if (bp.dim() != 1)
        throw std::invalid_argument("least_squares_project: implemented for curve boundaries");

    const int nD = bp.num_controls();
    DenseMatrix A(nD, nD);
    std::array<std::vector<double>, 3> rhs;
    for (auto& r : rhs) r.assign(nD, 0.0);

    for (int e = 0; e < bnd.mesh.n_el; ++e) {
        const auto range = bnd.mesh.range(e, 0);
        for (int ic = 0; ic < n_collocation_per_element; ++ic) {
            const double t = range[0] + (range[1] - range[0]) * ic /
                                            double(n_collocation_per_element - 1);
            const BasisDers bd = bp.basis_ders({t, 0, 0}, 0);
            const std::vector<int> act = bp.active_controls(bd.span);
            const Vec3 x = bp.eval_point({t, 0, 0});
            const Vec3 u = value(x);
            for (size_t a = 0; a < act.size(); ++a) {
                for (size_t b = 0; b < act.size(); ++b)
                    A(act[a], act[b]) += bd.R[a] * bd.R[b];
                for (int c = 0; c < 3; ++c) rhs[c][act[a]] += u[c] * bd.R[a];
            }
        }
    }

    ProjectedBoundaryValues out;
    out.controls = bnd.control_map;
    out.values.resize(nD);
    try {
        for (int c = 0; c < 3; ++c) {
            const std::vector<double> q = cholesky_solve(A, rhs[c]);
            for (int i = 0; i < nD; ++i) out.values[i][c] = q[i];
        }
    } catch (const SingularMatrixError&) {
        throw std::runtime_error(
            "least-squares boundary fit is singular; increase collocation points per element");
    }
    return out;
}

void apply_projected_direct(AssembledSystem& sys, const ProjectedBoundaryValues& proj,
                            std::array<bool, 3> comps, int n_comp) {
    std::vector<int> dofs;
    std::vector<double> values;
    for (size_t i = 0; i < proj.controls.size(); ++i)
        for (int c = 0; c < n_comp; ++c)
            if (comps[c]) {
                dofs.push_back(n_comp * proj.controls[i] + c);
                values.push_back(proj.values[i][c]);
            }
    apply_direct(sys, dofs, values);
}

void couple_dofs_penalty(AssembledSystem& sys, const std::vector<std::pair<int, int>>& pairs,
                         double w) {
    if (w < 0.0) throw std::invalid_argument("couple_dofs_penalty: w must be >= 0");
    if (w == 0.0) return;
    for (const auto& [i, j] : pairs) {
        sys.add(i, i, w);
        sys.add(j, j, w);
        sys.add(i, j, -w);
        sys.add(j, i, -w);
    }
}

} // namespace iga
