#include "iga/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "iga/errors.hpp"

namespace iga {

void gauss_legendre_1d(int order, std::vector<double>& points, std::vector<double>& weights) {
    if (order < 1 || order > 30) throw std::invalid_argument("gauss rule: order in 1..30");
    const int n = order;
    points.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        points[i] = -x;
        points[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) points[n / 2] = 0.0;
}

QuadratureRule gauss_rule(int order, int dim) {
    return gauss_rule({order, order, order}, dim);
}

QuadratureRule gauss_rule(const std::array<int, 3>& orders, int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("gauss rule: dim in 1..3");
    std::array<std::vector<double>, 3> pts, wts;
    for (int d = 0; d < dim; ++d) gauss_legendre_1d(orders[d], pts[d], wts[d]);
    for (int d = dim; d < 3; ++d) {
        pts[d] = {0.0};
        wts[d] = {1.0};
    }
    QuadratureRule rule;
    rule.dim = dim;
    for (size_t k = 0; k < pts[2].size(); ++k)
        for (size_t j = 0; j < pts[1].size(); ++j)
            for (size_t i = 0; i < pts[0].size(); ++i) {
                rule.points.push_back({pts[0][i], pts[1][j], pts[2][k]});
                rule.weights.push_back(wts[0][i] * wts[1][j] * wts[2][k]);
            }
    return rule;
}

double parent_jacobian(const IgaMesh& mesh, int element) {
    double det = 1.0;
    for (int d = 0; d < mesh.dim; ++d) {
        const auto r = mesh.range(element, d);
        det *= 0.5 * (r[1] - r[0]);
    }
    return det;
}

MappedPoint map_point(const NurbsPatch& patch, const IgaMesh& mesh, int element, const Vec3& xt) {
    const int dp = patch.dim();
    const int ds = patch.spatial_dim();

    MappedPoint mp;
    mp.parent = xt;
    std::array<int, 3> spans{0, 0, 0};
    for (int d = 0; d < dp; ++d) {
        const auto r = mesh.range(element, d);
        mp.param[d] = parent_to_param(r, xt[d]);
        // the element's own span, so edge evaluations stay one-sided
        spans[d] = patch.kv(d).find_span(0.5 * (r[0] + r[1]));
    }
    mp.detJ_parent = parent_jacobian(mesh, element);

    const BasisDers bd = patch.basis_ders(mp.param, 1, &spans);
    mp.R = bd.R;
    mp.dRdxi = bd.dR;

    const std::vector<int>& conn = mesh.element[element];
    // geometry Jacobian dx/dxi (ds x dp) and the physical point
    for (size_t a = 0; a < conn.size(); ++a) {
        const Vec3& P = patch.net().points[conn[a]];
        mp.phys += bd.R[a] * P;
        for (int i = 0; i < ds; ++i)
            for (int j = 0; j < dp; ++j) mp.J[i * 3 + j] += P[i] * bd.dR(int(a), j);
    }

    if (dp == ds) {
        // measure uses |det|; the inverse keeps the orientation sign so
        // spatial derivatives stay correct for left-handed parameterizations
        double det = 0.0;
        if (dp == 1) {
            det = mp.J[0];
            if (std::fabs(det) <= 1e-14)
                throw SingularGeometryError(element, mp.param.x, mp.param.y, mp.param.z);
            mp.Jinv[0] = 1.0 / mp.J[0];
        } else if (dp == 2) {
            std::array<double, 4> J{mp.J[0], mp.J[1], mp.J[3], mp.J[4]}, Ji{};
            det = J[0] * J[3] - J[1] * J[2];
            if (std::fabs(det) <= 1e-14)
                throw SingularGeometryError(element, mp.param.x, mp.param.y, mp.param.z);
            invert2(J, Ji);
            mp.Jinv = {Ji[0], Ji[1], 0, Ji[2], Ji[3], 0, 0, 0, 0};
        } else {
            std::array<double, 9> Ji{};
            det = invert3(mp.J, Ji);
            if (std::fabs(det) <= 1e-14)
                throw SingularGeometryError(element, mp.param.x, mp.param.y, mp.param.z);
            mp.Jinv = Ji;
        }
        mp.detJ_param = std::fabs(det);
        // dR/dx = dR/dxi * Jinv  (Jinv rows are dxi/dx)
        mp.dRdx = DenseMatrix(int(conn.size()), ds);
        for (int a = 0; a < int(conn.size()); ++a)
            for (int i = 0; i < ds; ++i) {
                double s = 0.0;
                for (int j = 0; j < dp; ++j) s += mp.dRdxi(a, j) * mp.Jinv[j * 3 + i];
                mp.dRdx(a, i) = s;
            }
    } else if (dp == 1) {
        // curve in 2D/3D: measure is the tangent norm
        const Vec3 t{mp.J[0], mp.J[3], mp.J[6]};
        mp.detJ_param = norm(t);
    } else {
        // surface in 3D: measure is the cross-product norm
        const Vec3 tu{mp.J[0], mp.J[3], mp.J[6]};
        const Vec3 tv{mp.J[1], mp.J[4], mp.J[7]};
        mp.detJ_param = norm(cross(tu, tv));
    }
    mp.detJ = mp.detJ_param * mp.detJ_parent;
    return mp;
}

double integrate(const NurbsPatch& patch, const IgaMesh& mesh, const QuadratureRule& rule,
                 const std::function<double(const Vec3&)>& f) {
    double sum = 0.0;
    for (int e = 0; e < mesh.n_el; ++e)
        for (size_t g = 0; g < rule.points.size(); ++g) {
            const MappedPoint mp = map_point(patch, mesh, e, rule.points[g]);
            sum += f(mp.phys) * mp.detJ * rule.weights[g];
        }
    return sum;
}

} // namespace iga
