#include <cmath>
#include <stdexcept>

#include "iga/xiga.hpp"
#include "xiga_internal.hpp"

namespace iga {

namespace {

// full local gradient and stress of the mode-I auxiliary field (K_I = 1)
struct AuxField {
    double du[2][2];   // du_i/dx_j, local frame
    double sig[3];     // s11, s22, s12 local
};

AuxField mode_I_auxiliary(double r, double theta, double E, double nu, bool plane_strain) {
    const double mu = E / (2.0 * (1.0 + nu));
    const double kap = plane_strain ? 3.0 - 4.0 * nu : (3.0 - nu) / (1.0 + nu);
    const double C = 1.0 / (2.0 * mu * std::sqrt(2.0 * M_PI));
    const double sq = std::sqrt(r);
    const double s2 = std::sin(0.5 * theta), c2 = std::cos(0.5 * theta);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double k_ct = kap - ct;

    const double du1dr = C / (2.0 * sq) * c2 * k_ct;
    const double du1dt = C * sq * (-0.5 * s2 * k_ct + c2 * st);
    const double du2dr = C / (2.0 * sq) * s2 * k_ct;
    const double du2dt = C * sq * (0.5 * c2 * k_ct + s2 * st);

    AuxField a;
    a.du[0][0] = du1dr * ct - du1dt * st / r;
    a.du[0][1] = du1dr * st + du1dt * ct / r;
    a.du[1][0] = du2dr * ct - du2dt * st / r;
    a.du[1][1] = du2dr * st + du2dt * ct / r;

    const double f = 1.0 / std::sqrt(2.0 * M_PI * r);
    const double s32 = std::sin(1.5 * theta), c32 = std::cos(1.5 * theta);
    a.sig[0] = f * c2 * (1.0 - s2 * s32);
    a.sig[1] = f * c2 * (1.0 + s2 * s32);
    a.sig[2] = f * s2 * c2 * c32;
    return a;
}

}  // namespace

double sif_interaction_integral(const NurbsPatch& patch, const IgaMesh& mesh,
                                const VisualizationMesh& vis, const EnrichmentState& enr,
                                const CrackGeometry& crack, const MaterialModel& mat,
                                const std::vector<double>& u, double rd, int quad_order) {
    if (patch.spatial_dim() != 2)
        throw std::invalid_argument("interaction integral: 2D problems only");
    if (enr.tip_elems.empty())
        throw std::invalid_argument("interaction integral: no tip element");
    const bool plane_strain = mat.mode == ElasticityMode::PlaneStrain;

    const Vec3 tip = crack.tip();
    const Vec3 t = crack.tangent(), n = crack.normal();

    const double h_tip = detail::element_size(vis, enr.tip_elems.front());
    const double radius = rd * h_tip;
    {
        Vec3 lo = vis.nodes.front(), hi = lo;
        for (const Vec3& p : vis.nodes)
            for (int d = 0; d < 2; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        if (radius > norm(hi - lo))
            throw std::invalid_argument("interaction integral: domain radius exceeds the mesh");
    }

    // weight is one at vis nodes inside the ball, zero outside
    std::vector<double> q(vis.nodes.size(), 0.0);
    for (size_t v = 0; v < vis.nodes.size(); ++v)
        if (norm(vis.nodes[v] - tip) <= radius) q[v] = 1.0;

    std::vector<char> cut(mesh.n_el, 0);
    for (int e : enr.split_elems) cut[e] = 1;
    for (int e : enr.tip_elems) cut[e] = 1;

    const QuadratureRule plain = gauss_rule(quad_order, 2);
    const QuadratureRule fine = gauss_rule(13, 2);

    double I = 0.0;
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& cell = vis.cells[e];
        double qmin = 1e300, qmax = -1e300;
        for (int v : cell) {
            qmin = std::min(qmin, q[v]);
            qmax = std::max(qmax, q[v]);
        }
        if (qmin == qmax) continue;  // gradient-free element

        const double qc[4] = {q[cell[0]], q[cell[1]], q[cell[2]], q[cell[3]]};
        const Vec3 xc[4] = {vis.nodes[cell[0]], vis.nodes[cell[1]], vis.nodes[cell[2]],
                            vis.nodes[cell[3]]};
        const QuadratureRule& rule = cut[e] ? fine : plain;

        for (size_t g = 0; g < rule.points.size(); ++g) {
            const Vec3 xt = rule.points[g];
            const MappedPoint mp = map_point(patch, mesh, e, xt);

            // bilinear weight-function gradient on the Q4 corner geometry
            const double xi = xt.x, et = xt.y;
            const double dNdxi[4] = {-(1 - et) / 4, (1 - et) / 4, (1 + et) / 4, -(1 + et) / 4};
            const double dNdet[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
            double Jq[4] = {0, 0, 0, 0};  // dx/dxi dx/det; dy/dxi dy/det
            double dqdxi = 0, dqdet = 0;
            for (int a = 0; a < 4; ++a) {
                Jq[0] += xc[a].x * dNdxi[a];
                Jq[1] += xc[a].x * dNdet[a];
                Jq[2] += xc[a].y * dNdxi[a];
                Jq[3] += xc[a].y * dNdet[a];
                dqdxi += qc[a] * dNdxi[a];
                dqdet += qc[a] * dNdet[a];
            }
            const double det = Jq[0] * Jq[3] - Jq[1] * Jq[2];
            // grad q = J^{-T} [dqdxi, dqdet]
            const double qx = (Jq[3] * dqdxi - Jq[2] * dqdet) / det;
            const double qy = (-Jq[1] * dqdxi + Jq[0] * dqdet) / det;
            // rotate into the crack frame
            const double q1 = qx * t.x + qy * t.y;
            const double q2 = qx * n.x + qy * n.y;

            // solution fields at the point, rotated into the crack frame
            const auto sg = detail::enriched_stress(patch, mesh, enr, crack, nullptr, mat, u,
                                                    e, xt);
            const auto gg = detail::enriched_disp_gradient(patch, mesh, enr, crack, nullptr, u,
                                                           e, xt);
            // sigma_local = Q sigma Q^T with Q rows (t, n)
            const double sxx = sg[0], syy = sg[1], sxy = sg[2];
            const double s11 = t.x * (sxx * t.x + sxy * t.y) + t.y * (sxy * t.x + syy * t.y);
            const double s22 = n.x * (sxx * n.x + sxy * n.y) + n.y * (sxy * n.x + syy * n.y);
            const double s12 = t.x * (sxx * n.x + sxy * n.y) + t.y * (sxy * n.x + syy * n.y);
            // displacement gradient local: du_loc = Q du Q^T
            const double g00 = gg[0], g01 = gg[1], g10 = gg[3], g11 = gg[4];
            auto rot = [&](double a00, double a01, double a10, double a11, int i, int j) {
                const Vec3& ri = i == 0 ? t : n;
                const Vec3& rj = j == 0 ? t : n;
                return ri.x * (a00 * rj.x + a01 * rj.y) + ri.y * (a10 * rj.x + a11 * rj.y);
            };
            const double u11 = rot(g00, g01, g10, g11, 0, 0);
            const double u21 = rot(g00, g01, g10, g11, 1, 0);

            // auxiliary fields at the local polar coordinates
            double r, theta;
            detail::tip_polar(crack, mp.phys, r, theta);
            if (r < 1e-12 * h_tip) continue;
            const AuxField aux = mode_I_auxiliary(r, theta, mat.E, mat.nu, plane_strain);

            // interaction energy density W = sigma_aux : eps_h
            const double e11 = u11;
            const double u12 = rot(g00, g01, g10, g11, 0, 1);
            const double u22 = rot(g00, g01, g10, g11, 1, 1);
            const double e22 = u22;
            const double e12 = 0.5 * (u12 + u21);
            const double W = aux.sig[0] * e11 + aux.sig[1] * e22 + 2.0 * aux.sig[2] * e12;

            // term_j = sigma^h_ij u^aux_i,1 + sigma^aux_ij u^h_i,1 - W d1j
            const double t1 = s11 * aux.du[0][0] + s12 * aux.du[1][0] +
                              aux.sig[0] * u11 + aux.sig[2] * u21 - W;
            const double t2 = s12 * aux.du[0][0] + s22 * aux.du[1][0] +
                              aux.sig[2] * u11 + aux.sig[1] * u21;

            I += (t1 * q1 + t2 * q2) * mp.detJ * rule.weights[g];
        }
    }

    const double Estar = plane_strain ? mat.E / (1.0 - mat.nu * mat.nu) : mat.E;
    return 0.5 * Estar * I;
}

} // namespace iga
