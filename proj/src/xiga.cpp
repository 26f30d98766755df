#include "iga/xiga.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iga/errors.hpp"
#include "iga/plate.hpp"  // locate_parameter
#include "xiga_internal.hpp"

namespace iga {

Vec3 CrackGeometry::tip() const {
    if (is3d) return 0.5 * (rect[1] + rect[2]);
    if (polyline.size() < 2) throw std::invalid_argument("crack: polyline needs >= 2 vertices");
    return polyline.back();
}

Vec3 CrackGeometry::tangent() const {
    if (is3d) {
        Vec3 t = rect[1] - rect[0];
        return t * (1.0 / norm(t));
    }
    const Vec3 d = polyline.back() - polyline[polyline.size() - 2];
    return d * (1.0 / norm(d));
}

Vec3 CrackGeometry::normal() const {
    if (is3d) {
        Vec3 n = cross(rect[1] - rect[0], rect[3] - rect[0]);
        return n * (1.0 / norm(n));
    }
    const Vec3 t = tangent();
    return {-t.y, t.x, 0};
}

namespace {

// closest point on a 2D segment plus the segment's unit normal
void closest_on_segment(const Vec3& a, const Vec3& b, const Vec3& x, Vec3& cp, Vec3& n,
                        double& dist) {
    const Vec3 d = b - a;
    const double len2 = dot(d, d);
    double t = len2 > 0 ? dot(x - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    cp = a + t * d;
    const Vec3 u = d * (1.0 / std::sqrt(len2));
    n = {-u.y, u.x, 0};
    dist = norm(x - cp);
}

}  // namespace

int heaviside(const Vec3& x, const CrackGeometry& crack, const Vec3& tie_dir) {
    if (crack.is3d) {
        const double s = dot(x - crack.rect[0], crack.normal());
        if (s > 0) return 1;
        if (s < 0) return -1;
        return dot(tie_dir, crack.normal()) >= 0 ? 1 : -1;
    }
    double best = 1e300;
    Vec3 best_cp, best_n;
    for (size_t i = 0; i + 1 < crack.polyline.size(); ++i) {
        Vec3 cp, n;
        double d;
        closest_on_segment(crack.polyline[i], crack.polyline[i + 1], x, cp, n, d);
        if (d < best) {
            best = d;
            best_cp = cp;
            best_n = n;
        }
    }
    Vec3 v = x - best_cp;
    if (norm(v) < 1e-300 || std::fabs(dot(v, best_n)) < 1e-300) v += tie_dir;
    return dot(v, best_n) >= 0 ? 1 : -1;
}

namespace detail {

// signed distance to the crack surface (first/last segments extended) and
// the tangential coordinate past the tip
void level_set_values(const CrackGeometry& crack, const Vec3& x, double& phi, double& psi) {
    if (crack.is3d) {
        phi = dot(x - crack.rect[0], crack.normal());
        psi = dot(x - crack.rect[1], crack.tangent());
        return;
    }
    double best = 1e300;
    phi = 0.0;
    const auto& poly = crack.polyline;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        const Vec3 d = poly[i + 1] - poly[i];
        const double len = norm(d);
        const Vec3 u = d * (1.0 / len);
        const Vec3 n{-u.y, u.x, 0};
        double t = std::max(dot(x - poly[i], u), 0.0);
        if (i + 2 < poly.size()) t = std::min(t, len);
        const Vec3 cp = poly[i] + t * u;
        const double dist = norm(x - cp);
        if (dist < best) {
            best = dist;
            const double side = dot(x - cp, n);
            phi = side >= 0 ? dist : -dist;
            if (std::fabs(side) < 1e-300) phi = 0.0;
        }
    }
    psi = dot(x - crack.tip(), crack.tangent());
}

void tip_polar(const CrackGeometry& crack, const Vec3& x, double& r, double& theta) {
    const Vec3 d = x - crack.tip();
    const double x1 = dot(d, crack.tangent());
    const double x2 = dot(d, crack.normal());
    r = std::hypot(x1, x2);
    theta = std::atan2(x2, x1);
}

PointBasis enriched_point_basis(const NurbsPatch& patch, const EnrichmentState& enr,
                                const CrackGeometry& crack, const LevelSetField* cp_ls,
                                const MappedPoint& mp, const std::vector<int>& conn, int side,
                                double h_int) {
    const int nc = enr.n_comp;
    const int ds = patch.spatial_dim();
    PointBasis pb;
    const size_t nen = conn.size();
    pb.val.reserve(nen * 2);
    pb.grad.reserve(nen * 2);
    pb.base.reserve(nen * 2);

    for (size_t a = 0; a < nen; ++a) {
        pb.val.push_back(mp.R[a]);
        Vec3 g;
        for (int d = 0; d < ds; ++d) g[d] = mp.dRdx(int(a), d);
        pb.grad.push_back(g);
        pb.base.push_back(nc * conn[a]);
    }

    bool any_h = false, any_tip = false;
    for (size_t a = 0; a < nen; ++a) {
        if (enr.tag[conn[a]] == EnrichmentState::Heaviside) any_h = true;
        if (enr.tag[conn[a]] == EnrichmentState::Tip) any_tip = true;
    }
    if (!any_h && !any_tip) return pb;

    double H = 0.0;
    BranchValues bv;
    std::array<Vec3, 4> dB{};

    if (!crack.is3d) {
        if (side != 0) {
            H = side;
        } else {
            Vec3 x = mp.phys;
            double phi, psi;
            level_set_values(crack, x, phi, psi);
            // quadrature points landing exactly on the face take the +n side
            if (std::fabs(phi) < 1e-12 * h_int && psi <= 0.0)
                x += (1e-12 * h_int) * crack.normal();
            H = heaviside(x, crack, crack.normal());
        }
        if (any_tip) {
            double r, theta;
            tip_polar(crack, mp.phys, r, theta);
            if (side != 0) theta = side * M_PI;
            bv = branch_functions(r, theta);
            const double ct = std::cos(theta), st = std::sin(theta);
            for (int al = 0; al < 4; ++al) {
                const double d1 = bv.dBdr[al] * ct - bv.dBdt[al] * st / r;
                const double d2 = bv.dBdr[al] * st + bv.dBdt[al] * ct / r;
                dB[al] = d1 * crack.tangent() + d2 * crack.normal();
            }
        }
    } else {
        // level sets interpolated from control-point values
        double phi = 0, psi = 0;
        Vec3 gphi, gpsi;
        for (size_t a = 0; a < nen; ++a) {
            const int A = conn[a];
            phi += mp.R[a] * cp_ls->phi[A];
            psi += mp.R[a] * cp_ls->psi[A];
            for (int d = 0; d < ds; ++d) {
                gphi[d] += mp.dRdx(int(a), d) * cp_ls->phi[A];
                gpsi[d] += mp.dRdx(int(a), d) * cp_ls->psi[A];
            }
        }
        if (side != 0)
            H = side;
        else
            H = phi >= 0 ? 1.0 : -1.0;
        if (any_tip) {
            double r, theta;
            if (side != 0) {
                r = std::hypot(phi, psi);
                theta = side * M_PI;
            } else {
                std::tie(r, theta) = polar_from_level_sets(phi, psi);
            }
            bv = branch_functions(r, theta);
            const double drdphi = phi / r, drdpsi = psi / r;
            const double dtdphi = psi / (r * r), dtdpsi = -phi / (r * r);
            for (int al = 0; al < 4; ++al) {
                const double dphi = bv.dBdr[al] * drdphi + bv.dBdt[al] * dtdphi;
                const double dpsi = bv.dBdr[al] * drdpsi + bv.dBdt[al] * dtdpsi;
                dB[al] = dphi * gphi + dpsi * gpsi;
            }
        }
    }

    for (size_t a = 0; a < nen; ++a) {
        const int A = conn[a];
        if (enr.tag[A] == EnrichmentState::Heaviside) {
            pb.val.push_back(mp.R[a] * H);
            Vec3 g;
            for (int d = 0; d < ds; ++d) g[d] = mp.dRdx(int(a), d) * H;
            pb.grad.push_back(g);
            pb.base.push_back(enr.extra_dof_start[A]);
        } else if (enr.tag[A] == EnrichmentState::Tip) {
            for (int al = 0; al < 4; ++al) {
                pb.val.push_back(mp.R[a] * bv.B[al]);
                Vec3 g = dB[al] * mp.R[a];
                for (int d = 0; d < ds; ++d) g[d] += mp.dRdx(int(a), d) * bv.B[al];
                pb.grad.push_back(g);
                pb.base.push_back(enr.extra_dof_start[A] + nc * al);
            }
        }
    }
    return pb;
}

void point_basis_B(const PointBasis& pb, int ds, DenseMatrix& B, std::vector<int>& dofs) {
    const int nf = int(pb.val.size());
    const int nv = ds == 2 ? 3 : 6;
    if (B.rows() != nv || B.cols() != ds * nf) B = DenseMatrix(nv, ds * nf);
    B.set_zero();
    dofs.resize(size_t(ds) * nf);
    for (int f = 0; f < nf; ++f) {
        for (int c = 0; c < ds; ++c) dofs[ds * f + c] = pb.base[f] + c;
        const Vec3& g = pb.grad[f];
        if (ds == 2) {
            B(0, 2 * f) = g.x;
            B(1, 2 * f + 1) = g.y;
            B(2, 2 * f) = g.y;
            B(2, 2 * f + 1) = g.x;
        } else {
            B(0, 3 * f) = g.x;
            B(1, 3 * f + 1) = g.y;
            B(2, 3 * f + 2) = g.z;
            B(3, 3 * f + 1) = g.z;
            B(3, 3 * f + 2) = g.y;
            B(4, 3 * f) = g.z;
            B(4, 3 * f + 2) = g.x;
            B(5, 3 * f) = g.y;
            B(5, 3 * f + 1) = g.x;
        }
    }
}

std::array<double, 6> enriched_stress(const NurbsPatch& patch, const IgaMesh& mesh,
                                      const EnrichmentState& enr, const CrackGeometry& crack,
                                      const LevelSetField* cp_ls, const MaterialModel& mat,
                                      const std::vector<double>& u, int element, const Vec3& xt,
                                      int side) {
    const int ds = patch.spatial_dim();
    const int nv = ds == 2 ? 3 : 6;
    const MappedPoint mp = map_point(patch, mesh, element, xt);
    const PointBasis pb =
        enriched_point_basis(patch, enr, crack, cp_ls, mp, mesh.element[element], side, 1.0);
    std::array<double, 6> strain{}, stress{};
    for (size_t f = 0; f < pb.val.size(); ++f)
        for (int c = 0; c < ds; ++c) {
            const double uf = u[pb.base[f] + c];
            if (uf == 0.0) continue;
            const Vec3& g = pb.grad[f];
            if (ds == 2) {
                if (c == 0) { strain[0] += g.x * uf; strain[2] += g.y * uf; }
                else        { strain[1] += g.y * uf; strain[2] += g.x * uf; }
            } else {
                if (c == 0) { strain[0] += g.x * uf; strain[4] += g.z * uf; strain[5] += g.y * uf; }
                else if (c == 1) { strain[1] += g.y * uf; strain[3] += g.z * uf; strain[5] += g.x * uf; }
                else { strain[2] += g.z * uf; strain[3] += g.y * uf; strain[4] += g.x * uf; }
            }
        }
    const DenseMatrix D = elasticity_D(mat);
    for (int r = 0; r < nv; ++r)
        for (int s = 0; s < nv; ++s) stress[r] += D(r, s) * strain[s];
    return stress;
}

std::array<double, 9> enriched_disp_gradient(const NurbsPatch& patch, const IgaMesh& mesh,
                                             const EnrichmentState& enr,
                                             const CrackGeometry& crack,
                                             const LevelSetField* cp_ls,
                                             const std::vector<double>& u, int element,
                                             const Vec3& xt) {
    const int ds = patch.spatial_dim();
    const MappedPoint mp = map_point(patch, mesh, element, xt);
    const PointBasis pb =
        enriched_point_basis(patch, enr, crack, cp_ls, mp, mesh.element[element], 0, 1.0);
    std::array<double, 9> g{};
    for (size_t f = 0; f < pb.val.size(); ++f)
        for (int c = 0; c < ds; ++c) {
            const double uf = u[pb.base[f] + c];
            if (uf == 0.0) continue;
            for (int d = 0; d < ds; ++d) g[c * 3 + d] += pb.grad[f][d] * uf;
        }
    return g;
}

double element_size(const VisualizationMesh& vis, int e) {
    const auto& cell = vis.cells[e];
    double h = 0.0;
    for (size_t i = 0; i < cell.size(); ++i)
        for (size_t j = i + 1; j < cell.size(); ++j)
            h = std::max(h, norm(vis.nodes[cell[i]] - vis.nodes[cell[j]]));
    return h;
}

}  // namespace detail

using detail::enriched_point_basis;
using detail::level_set_values;
using detail::point_basis_B;
using detail::PointBasis;
using detail::tip_polar;

namespace {

double mouth_coordinate(const CrackGeometry& crack, const Vec3& x) {
    if (crack.is3d) return dot(x - crack.rect[0], crack.tangent());
    const Vec3 d = crack.polyline[1] - crack.polyline[0];
    return dot(x - crack.polyline[0], d * (1.0 / norm(d)));
}

}  // namespace

LevelSetField compute_level_sets(const CrackGeometry& crack, const VisualizationMesh& vis) {
    LevelSetField ls;
    ls.phi.resize(vis.nodes.size());
    ls.psi.resize(vis.nodes.size());
    ls.chi.resize(vis.nodes.size());
    for (size_t i = 0; i < vis.nodes.size(); ++i) {
        detail::level_set_values(crack, vis.nodes[i], ls.phi[i], ls.psi[i]);
        ls.chi[i] = mouth_coordinate(crack, vis.nodes[i]);
    }
    return ls;
}

LevelSetField control_point_level_sets(const CrackGeometry& crack, const NurbsPatch& patch) {
    LevelSetField ls;
    const auto& pts = patch.net().points;
    ls.phi.resize(pts.size());
    ls.psi.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
        level_set_values(crack, pts[i], ls.phi[i], ls.psi[i]);
    return ls;
}

BranchValues branch_functions(double r, double theta) {
    if (!(r > 0.0)) throw std::domain_error("branch functions: singular point r = 0");
    BranchValues v;
    const double sq = std::sqrt(r);
    const double s2 = std::sin(0.5 * theta), c2 = std::cos(0.5 * theta);
    const double st = std::sin(theta), ct = std::cos(theta);
    v.B = {sq * s2, sq * c2, sq * s2 * st, sq * c2 * st};
    const double dr = 0.5 / sq;
    v.dBdr = {dr * s2, dr * c2, dr * s2 * st, dr * c2 * st};
    v.dBdt = {sq * 0.5 * c2, -sq * 0.5 * s2, sq * (0.5 * c2 * st + s2 * ct),
              sq * (-0.5 * s2 * st + c2 * ct)};
    return v;
}

std::pair<double, double> polar_from_level_sets(double phi, double psi) {
    const double r = std::hypot(phi, psi);
    if (r == 0.0) throw std::domain_error("polar coordinates: singular point at the tip");
    return {r, std::atan2(phi, psi)};
}

EnrichmentState select_enriched_nodes(const IgaMesh& mesh, const VisualizationMesh& vis,
                                      const LevelSetField& ls, int n_comp) {
    EnrichmentState enr;
    enr.n_comp = n_comp;
    enr.tag.assign(mesh.n_np, EnrichmentState::None);

    std::vector<int> tip_candidates;
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& cell = vis.cells[e];
        double phmin = 1e300, phmax = -1e300, psmin = 1e300, psmax = -1e300;
        double chmax = -1e300;
        for (int v : cell) {
            phmin = std::min(phmin, ls.phi[v]);
            phmax = std::max(phmax, ls.phi[v]);
            psmin = std::min(psmin, ls.psi[v]);
            psmax = std::max(psmax, ls.psi[v]);
            if (!ls.chi.empty()) chmax = std::max(chmax, ls.chi[v]);
        }
        if (!ls.chi.empty() && chmax <= 0.0) continue;  // entirely before the mouth
        if (phmax * phmin < 0.0) {
            if (psmax < 0.0) {
                enr.split_elems.push_back(e);
                for (int A : mesh.element[e]) enr.tag[A] = EnrichmentState::Heaviside;
            } else if (psmax * psmin < 0.0) {
                tip_candidates.push_back(e);
            }
        }
    }
    // tip classification wins over heaviside where both apply
    for (int e : tip_candidates) {
        enr.tip_elems.push_back(e);
        for (int A : mesh.element[e]) enr.tag[A] = EnrichmentState::Tip;
    }

    if (enr.split_elems.empty() && enr.tip_elems.empty()) {
        // degenerate contact: a vertex exactly on the crack while the sign
        // tests see nothing to cut
        for (size_t v = 0; v < ls.phi.size(); ++v)
            if (ls.phi[v] == 0.0 && ls.psi[v] <= 0.0)
                throw UnresolvedTopologyError(
                    "crack touches the mesh degenerately (vertex on crack, no cut element)");
    }

    enr.extra_dof_start.assign(mesh.n_np, -1);
    int next = n_comp * mesh.n_np;
    for (int A = 0; A < mesh.n_np; ++A)
        if (enr.tag[A] == EnrichmentState::Heaviside) {
            enr.extra_dof_start[A] = next;
            next += n_comp;
        }
    for (int A = 0; A < mesh.n_np; ++A)
        if (enr.tag[A] == EnrichmentState::Tip) {
            enr.extra_dof_start[A] = next;
            next += 4 * n_comp;
        }
    enr.n_extra = next - n_comp * mesh.n_np;
    return enr;
}

AssembledSystem assemble_enriched(const NurbsPatch& patch, const IgaMesh& mesh,
                                  const MaterialModel& mat, const EnrichmentState& enr,
                                  const CrackGeometry& crack, int enriched_quad,
                                  int quad_order) {
    const int ds = patch.spatial_dim();
    if (enr.n_comp != ds) throw std::invalid_argument("enrichment components != spatial dim");
    AssembledSystem sys;
    sys.init(ds * mesh.n_np + enr.n_extra);
    const DenseMatrix D = elasticity_D(mat);

    std::array<int, 3> orders = default_orders(patch);
    if (quad_order > 0) orders = {quad_order, quad_order, quad_order};
    const QuadratureRule base_rule = gauss_rule(orders, patch.dim());
    // an even count keeps quadrature nodes off a mid-element crack plane and
    // off the tip (Gauss nodes are irrational away from 0; crack positions
    // in parent coordinates are rational)
    const QuadratureRule enr_rule =
        gauss_rule(enriched_quad % 2 ? enriched_quad + 1 : enriched_quad, patch.dim());

    std::vector<char> needs_enr_quad(mesh.n_el, 0);
    for (int e : enr.split_elems) needs_enr_quad[e] = 1;
    for (int e : enr.tip_elems) needs_enr_quad[e] = 1;
    for (int e = 0; e < mesh.n_el; ++e)
        if (enr.element_has_tip(mesh.element[e])) needs_enr_quad[e] = 1;

    LevelSetField cp_ls;
    if (crack.is3d) cp_ls = control_point_level_sets(crack, patch);

    double h_elem = 0.0;
    for (int d = 0; d < mesh.dim; ++d) {
        const auto r = mesh.range(0, d);
        h_elem = std::max(h_elem, r[1] - r[0]);
    }

    std::vector<std::vector<Triplet>> slots(mesh.n_el);
    parallel_elements(mesh.n_el, [&](int e) {
        const auto& conn = mesh.element[e];
        const bool enriched = enr.element_enriched(conn);
        const QuadratureRule& rule = needs_enr_quad[e] ? enr_rule : base_rule;
        auto& out = slots[e];
        if (!enriched) {
            // plain path, numerically identical to assemble_elasticity
            const int n = int(conn.size());
            DenseMatrix ke(ds * n, ds * n);
            DenseMatrix B;
            for (size_t g = 0; g < rule.points.size(); ++g) {
                const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
                strain_displacement(mp, ds, B);
                accumulate_AtBA(B, D, mp.detJ * rule.weights[g], ke);
            }
            for (int a = 0; a < n; ++a)
                for (int ca = 0; ca < ds; ++ca)
                    for (int b = 0; b < n; ++b)
                        for (int cb = 0; cb < ds; ++cb)
                            out.push_back({ds * conn[a] + ca, ds * conn[b] + cb,
                                           ke(ds * a + ca, ds * b + cb)});
            return;
        }
        DenseMatrix B;
        std::vector<int> dofs;
        DenseMatrix ke;
        bool sized = false;
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            const PointBasis pb = enriched_point_basis(
                patch, enr, crack, crack.is3d ? &cp_ls : nullptr, mp, conn, 0, h_elem);
            point_basis_B(pb, ds, B, dofs);
            if (!sized) {
                ke = DenseMatrix(int(dofs.size()), int(dofs.size()));
                sized = true;
            }
            accumulate_AtBA(B, D, mp.detJ * rule.weights[g], ke);
        }
        for (size_t i = 0; i < dofs.size(); ++i)
            for (size_t j = 0; j < dofs.size(); ++j)
                out.push_back({dofs[i], dofs[j], ke(int(i), int(j))});
    });
    for (auto& s : slots) sys.triplets.insert(sys.triplets.end(), s.begin(), s.end());
    return sys;
}

namespace {

int element_of_param(const IgaMesh& mesh, const NurbsPatch& patch, const Vec3& xi) {
    std::array<int, 3> ei{0, 0, 0};
    for (int d = 0; d < mesh.dim; ++d) {
        const auto& ranges = mesh.el_range[d];
        int s = 0;
        while (s + 1 < int(ranges.size()) && xi[d] >= ranges[s][1]) ++s;
        ei[d] = s;
    }
    (void)patch;
    return ei[0] + mesh.nel_dir[0] * (ei[1] + mesh.nel_dir[1] * ei[2]);
}

}  // namespace

Vec3 enriched_displacement(const NurbsPatch& patch, const IgaMesh& mesh,
                           const EnrichmentState& enr, const CrackGeometry& crack,
                           const std::vector<double>& u, const Vec3& xi, int side) {
    const int ds = patch.spatial_dim();
    const int e = element_of_param(mesh, patch, xi);
    Vec3 xt;
    for (int d = 0; d < mesh.dim; ++d) {
        const auto r = mesh.range(e, d);
        xt[d] = (2.0 * xi[d] - r[0] - r[1]) / (r[1] - r[0]);
    }
    const MappedPoint mp = map_point(patch, mesh, e, xt);
    LevelSetField cp_ls;
    if (crack.is3d) cp_ls = control_point_level_sets(crack, patch);
    const PointBasis pb = enriched_point_basis(patch, enr, crack,
                                               crack.is3d ? &cp_ls : nullptr, mp,
                                               mesh.element[e], side, 1.0);
    Vec3 out;
    for (size_t f = 0; f < pb.val.size(); ++f)
        for (int c = 0; c < ds; ++c) out[c] += pb.val[f] * u[pb.base[f] + c];
    return out;
}

double LefmCase::KI() const { return sigma * std::sqrt(M_PI * a); }

namespace {

void westergaard_local(double KI, double E, double nu, double r, double theta, Vec3& u_loc,
                       std::array<double, 3>& s_loc) {
    const double mu = E / (2.0 * (1.0 + nu));
    const double kap = 3.0 - 4.0 * nu;  // plane strain
    const double c = KI / (2.0 * mu) * std::sqrt(r / (2.0 * M_PI));
    const double s2 = std::sin(0.5 * theta), c2 = std::cos(0.5 * theta);
    u_loc = {c * c2 * (kap - std::cos(theta)), c * s2 * (kap - std::cos(theta)), 0};
    const double f = KI / std::sqrt(2.0 * M_PI * r);
    const double s32 = std::sin(1.5 * theta), c32 = std::cos(1.5 * theta);
    s_loc = {f * c2 * (1.0 - s2 * s32), f * c2 * (1.0 + s2 * s32), f * s2 * c2 * c32};
}

}  // namespace

Vec3 griffith_displacement(const LefmCase& c, const Vec3& x, const CrackGeometry& crack) {
    double r, theta;
    tip_polar(crack, x, r, theta);
    if (r == 0.0) return {0, 0, 0};
    Vec3 u_loc;
    std::array<double, 3> s_loc;
    westergaard_local(c.KI(), c.E, c.nu, r, theta, u_loc, s_loc);
    return u_loc.x * crack.tangent() + u_loc.y * crack.normal();
}

std::array<double, 6> griffith_stress(const LefmCase& c, const Vec3& x,
                                      const CrackGeometry& crack) {
    double r, theta;
    tip_polar(crack, x, r, theta);
    Vec3 u_loc;
    std::array<double, 3> s_loc;
    westergaard_local(c.KI(), c.E, c.nu, r, theta, u_loc, s_loc);
    const Vec3 t = crack.tangent(), n = crack.normal();
    const double q11 = t.x, q12 = t.y, q21 = n.x, q22 = n.y;
    const double s11 = s_loc[0], s22 = s_loc[1], s12 = s_loc[2];
    std::array<double, 6> g{};
    g[0] = q11 * q11 * s11 + q21 * q21 * s22 + 2 * q11 * q21 * s12;
    g[1] = q12 * q12 * s11 + q22 * q22 * s22 + 2 * q12 * q22 * s12;
    g[2] = q11 * q12 * s11 + q21 * q22 * s22 + (q11 * q22 + q12 * q21) * s12;
    return g;
}

Vec3 mode_I_3d_displacement(const LefmCase& c, const Vec3& x, const CrackGeometry& crack) {
    const Vec3 t = crack.tangent(), n = crack.normal();
    const Vec3 d = x - crack.tip();
    const double x1 = dot(d, t), x2 = dot(d, n);
    const double r = std::hypot(x1, x2);
    if (r == 0.0) return {0, 0, 0};
    const double theta = std::atan2(x2, x1);
    const double c2 = std::cos(0.5 * theta), s2 = std::sin(0.5 * theta);
    const double f =
        2.0 * (1.0 + c.nu) / std::sqrt(2.0 * M_PI) * c.KI() / c.E * std::sqrt(r);
    const double uadv = f * c2 * (2.0 - 2.0 * c.nu - c2 * c2);
    const double uopen = f * s2 * (2.0 - 2.0 * c.nu - c2 * c2);
    return uadv * t + uopen * n;
}

std::array<double, 6> mode_I_3d_stress(const LefmCase& c, const Vec3& x,
                                       const CrackGeometry& crack) {
    const Vec3 t = crack.tangent(), n = crack.normal();
    const Vec3 d = x - crack.tip();
    const double x1 = dot(d, t), x2 = dot(d, n);
    const double r = std::hypot(x1, x2);
    const double theta = std::atan2(x2, x1);
    Vec3 u_loc;
    std::array<double, 3> s;
    westergaard_local(c.KI(), c.E, c.nu, r, theta, u_loc, s);
    // local tensor in the (t, n) plane; out-of-plane direction b carries the
    // plane-strain normal stress nu (s11 + s22)
    const Vec3 b = cross(n, t);
    const double sbb = c.nu * (s[0] + s[1]);
    std::array<double, 6> g{};  // xx, yy, zz, yz, xz, xy
    auto comp = [&](int i, int j) {
        const double ti = t[i], tj = t[j], ni = n[i], nj = n[j], bi = b[i], bj = b[j];
        return s[0] * ti * tj + s[1] * ni * nj + s[2] * (ti * nj + ni * tj) + sbb * bi * bj;
    };
    g[0] = comp(0, 0);
    g[1] = comp(1, 1);
    g[2] = comp(2, 2);
    g[3] = comp(1, 2);
    g[4] = comp(0, 2);
    g[5] = comp(0, 1);
    return g;
}

Vec3 displacement_jump(const NurbsPatch& patch, const IgaMesh& mesh,
                       const EnrichmentState& enr, const CrackGeometry& crack,
                       const std::vector<double>& u, const Vec3& xi) {
    (void)mesh;
    const int ds = patch.spatial_dim();
    const BasisDers bd = patch.basis_ders(xi, 0);
    const auto act = patch.active_controls(bd.span);
    const Vec3 x = patch.eval_point(xi);
    double r, theta;
    tip_polar(crack, x, r, theta);
    Vec3 jump;
    for (size_t a = 0; a < act.size(); ++a) {
        const int A = act[a];
        if (enr.tag[A] == EnrichmentState::Heaviside) {
            for (int c = 0; c < ds; ++c)
                jump[c] += 2.0 * bd.R[a] * u[enr.extra_dof_start[A] + c];
        } else if (enr.tag[A] == EnrichmentState::Tip) {
            for (int c = 0; c < ds; ++c)
                jump[c] += 2.0 * std::sqrt(r) * bd.R[a] * u[enr.extra_dof_start[A] + c];
        }
    }
    return jump;
}

CrackedVisMesh cracked_vis_mesh(const VisualizationMesh& vis, const NurbsPatch& patch,
                                const IgaMesh& mesh, const EnrichmentState& enr,
                                const CrackGeometry& crack, const MaterialModel& mat,
                                const std::vector<double>& u) {
    if (crack.is3d) throw std::invalid_argument("cracked_vis_mesh: 2D meshes only");
    if (std::fabs(crack.tangent().y) > 1e-12)
        throw std::invalid_argument("cracked_vis_mesh: horizontal cracks only");
    const double yc = crack.tip().y;

    CrackedVisMesh out;
    out.nodes = vis.nodes;
    out.displacement.resize(vis.nodes.size());
    out.stress.resize(vis.nodes.size());
    out.n_stress = 3;

    // full enriched values at the original grid nodes
    for (size_t nidx = 0; nidx < vis.nodes.size(); ++nidx) {
        int side = 0;
        double phi, psi;
        detail::level_set_values(crack, vis.nodes[nidx], phi, psi);
        if (std::fabs(phi) < 1e-12 && psi <= 0) side = 1;
        out.displacement[nidx] =
            enriched_displacement(patch, mesh, enr, crack, u, vis.param[nidx], side);
        // stress at the owning element corner
        const int e = element_of_param(mesh, patch, vis.param[nidx]);
        Vec3 xt;
        for (int d = 0; d < mesh.dim; ++d) {
            const auto rg = mesh.range(e, d);
            xt[d] = (2.0 * vis.param[nidx][d] - rg[0] - rg[1]) / (rg[1] - rg[0]);
        }
        try {
            out.stress[nidx] =
                detail::enriched_stress(patch, mesh, enr, crack, nullptr, mat, u, e, xt, side);
        } catch (const SingularGeometryError&) {
            out.stress[nidx] = {0, 0, 0, 0, 0, 0};
        }
    }

    std::vector<char> cut(vis.cells.size(), 0);
    for (int e : enr.split_elems) cut[e] = 1;
    for (int e : enr.tip_elems) cut[e] = 2;

    struct EdgeNodes { int up = -1, dn = -1; };
    std::map<int, EdgeNodes> line_nodes;  // per grid column

    auto crack_point_nodes = [&](int i_col, int j_row) -> EdgeNodes {
        auto it = line_nodes.find(i_col);
        if (it != line_nodes.end()) return it->second;
        const int nbot = vis.node_index(i_col, j_row, 0);
        const int ntop = vis.node_index(i_col, j_row + 1, 0);
        const Vec3 pb = vis.nodes[nbot], pt = vis.nodes[ntop];
        const double s = (yc - pb.y) / (pt.y - pb.y);
        const Vec3 xp = pb + s * (pt - pb);
        const Vec3 xi = locate_parameter(patch, xp);
        EdgeNodes en;
        double phi, psi;
        detail::level_set_values(crack, xp, phi, psi);
        const bool on_face = psi <= 1e-12;
        en.up = int(out.nodes.size());
        out.nodes.push_back(xp);
        en.dn = int(out.nodes.size());
        out.nodes.push_back(xp);
        if (on_face) {
            out.displacement.push_back(
                enriched_displacement(patch, mesh, enr, crack, u, xi, +1));
            out.displacement.push_back(
                enriched_displacement(patch, mesh, enr, crack, u, xi, -1));
            // traction-free faces carry zero stress
            out.stress.push_back({0, 0, 0, 0, 0, 0});
            out.stress.push_back({0, 0, 0, 0, 0, 0});
            out.doubled.emplace_back(en.up, en.dn);
        } else {
            // ahead of the tip: compatibility-only nodes, single-valued
            const Vec3 um = 0.5 * (enriched_displacement(patch, mesh, enr, crack, u, xi, +1) +
                                   enriched_displacement(patch, mesh, enr, crack, u, xi, -1));
            out.displacement.push_back(um);
            out.displacement.push_back(um);
            std::array<double, 6> si{};
            for (int c = 0; c < 3; ++c)
                si[c] = (1 - s) * out.stress[nbot][c] + s * out.stress[ntop][c];
            out.stress.push_back(si);
            out.stress.push_back(si);
        }
        line_nodes[i_col] = en;
        return en;
    };

    for (size_t e = 0; e < vis.cells.size(); ++e) {
        const auto& cell = vis.cells[e];
        if (!cut[e]) {
            out.cells.push_back(cell);
            continue;
        }
        const int i = mesh.index[int(e)][0], j = mesh.index[int(e)][1];
        const EdgeNodes L = crack_point_nodes(i, j);
        const EdgeNodes R = crack_point_nodes(i + 1, j);
        out.cells.push_back({cell[0], cell[1], R.dn, L.dn});
        out.cells.push_back({L.up, R.up, cell[2], cell[3]});
    }
    return out;
}

} // namespace iga
