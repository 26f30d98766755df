#pragma once

#include <array>
#include <string>
#include <vector>

#include "iga/knot_vector.hpp"
#include "iga/linalg.hpp"

namespace iga {

/// Tensor-product control net. Points are stored x-fastest, so the global
/// index of grid position (i,j,k) is A = i + n*(j + m*k) with dims = (n,m,l).
struct ControlNet {
    std::vector<Vec3> points;
    std::vector<double> weights;
    std::array<int, 3> dims{1, 1, 1};

    int count() const { return dims[0] * dims[1] * dims[2]; }
    int index(int i, int j, int k) const { return i + dims[0] * (j + dims[1] * k); }
};

/// Homogeneous (projective) form of a control net: (xw, yw, zw, w) per point.
struct HomogeneousNet {
    std::vector<std::array<double, 4>> points;
    std::array<int, 3> dims{1, 1, 1};
};

HomogeneousNet to_homogeneous(const ControlNet& net);
ControlNet from_homogeneous(const HomogeneousNet& hnet);

/// Values and parametric derivatives of the non-zero rational basis functions
/// at one point. Local function index a = i + (p+1)*(j + (q+1)*k) runs over
/// the tensor product of the per-direction non-zero functions.
struct BasisDers {
    std::vector<double> R;  // n_en values, sum to 1
    DenseMatrix dR;         // n_en x d_p first parametric derivatives
    DenseMatrix d2R;        // n_en x n2 second derivatives (order=2 only);
                            // column order (00,11,22,01,02,12) reduced to d_p
    std::array<int, 3> span{0, 0, 0};
};

/// One tensor-product NURBS patch: curve (d_p=1), surface (2) or volume (3).
class NurbsPatch {
public:
    NurbsPatch(std::vector<KnotVector> kvs, ControlNet net, int spatial_dim);

    int dim() const { return int(kvs_.size()); }
    int spatial_dim() const { return ds_; }
    const KnotVector& kv(int d) const { return kvs_[d]; }
    int degree(int d) const { return kvs_[d].degree(); }
    const ControlNet& net() const { return net_; }

    int num_controls() const { return net_.count(); }

    /// Global indices of the (p+1)(q+1)(r+1) functions active on the spans.
    std::vector<int> active_controls(const std::array<int, 3>& spans) const;

    /// Rational basis values and parametric derivatives; order in {0,1,2}.
    /// Optional spans pin the evaluation to a specific element (one-sided
    /// limits at knot lines).
    BasisDers basis_ders(const Vec3& xi, int order,
                         const std::array<int, 3>* spans = nullptr) const;

    /// Geometry map: physical image of a parametric point.
    Vec3 eval_point(const Vec3& xi) const;

    /// Restriction of the patch to one face (2 faces per direction,
    /// face id = 2*dir + (0 lower | 1 upper)); also returns the map from
    /// face-local control index to patch control index.
    NurbsPatch boundary_patch(int face, std::vector<int>& control_map) const;

    std::string to_json() const;
    static NurbsPatch from_json(const std::string& text);

private:
    std::vector<KnotVector> kvs_;
    ControlNet net_;
    int ds_;
};

} // namespace iga
