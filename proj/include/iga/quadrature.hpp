#pragma once

#include <array>
#include <functional>
#include <vector>

#include "iga/mesh.hpp"
#include "iga/patch.hpp"

namespace iga {

/// Tensor-product Gauss-Legendre rule on the parent domain [-1,1]^dp.
struct QuadratureRule {
    std::vector<Vec3> points;
    std::vector<double> weights;
    int dim = 1;
};

/// 1D Gauss-Legendre points and weights (Newton on Legendre polynomials).
void gauss_legendre_1d(int order, std::vector<double>& points, std::vector<double>& weights);

/// Tensor rule with `order` points per direction. 1 <= order <= 30.
QuadratureRule gauss_rule(int order, int dim);
/// Anisotropic variant.
QuadratureRule gauss_rule(const std::array<int, 3>& orders, int dim);

/// Affine map from parent coordinate to the parametric span [lo, hi].
inline double parent_to_param(const std::array<double, 2>& range, double xt) {
    return 0.5 * ((range[1] - range[0]) * xt + (range[1] + range[0]));
}

/// Determinant of the parent->parametric map over an element.
double parent_jacobian(const IgaMesh& mesh, int element);

/// Everything needed at one quadrature point of one element.
struct MappedPoint {
    Vec3 parent;            // xt in [-1,1]^dp
    Vec3 param;             // xi
    Vec3 phys;              // x
    double detJ_parent = 0; // |J_xt|
    double detJ_param = 0;  // |J_xi| (or curve/surface measure when dp < ds)
    double detJ = 0;        // product of the two
    std::vector<double> R;  // basis values, local ordering
    DenseMatrix dRdx;       // n_en x ds spatial first derivatives (square maps)
    DenseMatrix dRdxi;      // n_en x dp parametric first derivatives
    std::array<double, 9> J{};    // dx_i/dxi_j, row-major ds x dp
    std::array<double, 9> Jinv{}; // dxi_i/dx_j when square
};

/// Map a parent point of an element; computes basis values, spatial
/// derivatives and Jacobians. For dp < ds (boundary patches) the measure
/// factor uses the tangent norm / cross-product norm and dRdx is left empty.
MappedPoint map_point(const NurbsPatch& patch, const IgaMesh& mesh, int element, const Vec3& xt);

/// Integrate a function of physical position over the patch.
double integrate(const NurbsPatch& patch, const IgaMesh& mesh, const QuadratureRule& rule,
                 const std::function<double(const Vec3&)>& f);

} // namespace iga
