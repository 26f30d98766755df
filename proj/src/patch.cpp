#include "iga/patch.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace iga {

HomogeneousNet to_homogeneous(const ControlNet& net) {
    HomogeneousNet h;
    h.dims = net.dims;
    h.points.resize(net.points.size());
    for (size_t a = 0; a < net.points.size(); ++a) {
        const double w = net.weights[a];
        if (!(w > 0.0)) throw std::invalid_argument("control weights must be positive");
        const Vec3& P = net.points[a];
        h.points[a] = {P.x * w, P.y * w, P.z * w, w};
    }
    return h;
}

ControlNet from_homogeneous(const HomogeneousNet& hnet) {
    ControlNet net;
    net.dims = hnet.dims;
    net.points.resize(hnet.points.size());
    net.weights.resize(hnet.points.size());
    for (size_t a = 0; a < hnet.points.size(); ++a) {
        const auto& Pw = hnet.points[a];
        const double w = Pw[3];
        if (!(w > 0.0)) throw std::invalid_argument("homogeneous weight must be positive");
        net.points[a] = {Pw[0] / w, Pw[1] / w, Pw[2] / w};
        net.weights[a] = w;
    }
    return net;
}

NurbsPatch::NurbsPatch(std::vector<KnotVector> kvs, ControlNet net, int spatial_dim)
    : kvs_(std::move(kvs)), net_(std::move(net)), ds_(spatial_dim) {
    if (kvs_.empty() || kvs_.size() > 3) throw std::invalid_argument("patch: 1-3 knot vectors");
    if (ds_ < 1 || ds_ > 3) throw std::invalid_argument("patch: spatial dim in 1..3");
    for (int d = 0; d < dim(); ++d)
        if (kvs_[d].num_basis() != net_.dims[d])
            throw std::invalid_argument("patch: knot vector inconsistent with control net dims");
    for (int d = dim(); d < 3; ++d)
        if (net_.dims[d] != 1)
            throw std::invalid_argument("patch: unused directions must have dim 1");
    if (int(net_.points.size()) != net_.count() || net_.weights.size() != net_.points.size())
        throw std::invalid_argument("patch: control point/weight count mismatch");
    for (double w : net_.weights)
        if (!(w > 0.0)) throw std::invalid_argument("patch: weights must be positive");
}

std::vector<int> NurbsPatch::active_controls(const std::array<int, 3>& spans) const {
    std::array<int, 3> nloc{1, 1, 1};
    for (int d = 0; d < dim(); ++d) nloc[d] = degree(d) + 1;
    std::vector<int> idx;
    idx.reserve(nloc[0] * nloc[1] * nloc[2]);
    for (int k = 0; k < nloc[2]; ++k)
        for (int j = 0; j < nloc[1]; ++j)
            for (int i = 0; i < nloc[0]; ++i) {
                const int gi = dim() > 0 ? spans[0] - degree(0) + i : 0;
                const int gj = dim() > 1 ? spans[1] - degree(1) + j : 0;
                const int gk = dim() > 2 ? spans[2] - degree(2) + k : 0;
                idx.push_back(net_.index(gi, gj, gk));
            }
    return idx;
}

namespace {
// position of the (d1,d2) pair in the packed symmetric second-derivative
// layout (00,11,22,01,02,12), truncated to the patch dimension
int sym_col(int d1, int d2, int dp) {
    if (d1 == d2) return d1;
    const int a = std::min(d1, d2), b = std::max(d1, d2);
    if (a == 0 && b == 1) return dp;
    if (a == 0 && b == 2) return dp + 1;
    return dp + 2;  // (1,2)
}
}  // namespace

BasisDers NurbsPatch::basis_ders(const Vec3& xi, int order,
                                 const std::array<int, 3>* spans) const {
    if (order < 0 || order > 2) throw std::invalid_argument("basis_ders: order in 0..2");
    const int dp = dim();

    std::array<std::vector<std::vector<double>>, 3> uni;  // per-direction ders tables
    BasisDers out;
    for (int d = 0; d < dp; ++d) {
        const int ord = std::min(order, degree(d));
        out.span[d] = spans ? (*spans)[d] : kvs_[d].find_span(xi[d]);
        kvs_[d].basis_ders(xi[d], ord, uni[d], out.span[d]);
        // pad missing derivative rows (degree 0/1 cases) with zeros
        while (int(uni[d].size()) <= order)
            uni[d].emplace_back(degree(d) + 1, 0.0);
    }

    std::array<int, 3> nloc{1, 1, 1};
    for (int d = 0; d < dp; ++d) nloc[d] = degree(d) + 1;
    const int nen = nloc[0] * nloc[1] * nloc[2];
    const int n2 = dp * (dp + 1) / 2;

    const std::vector<int> gidx = active_controls(out.span);

    // B-spline tensor products times weights, and the weight function sums
    std::vector<double> Nw(nen);
    DenseMatrix dNw(nen, std::max(dp, 1));
    DenseMatrix d2Nw(order >= 2 ? nen : 0, order >= 2 ? n2 : 0);
    double W = 0.0;
    std::array<double, 3> Wd{0, 0, 0};
    std::array<double, 6> Wdd{0, 0, 0, 0, 0, 0};

    int a = 0;
    for (int k = 0; k < nloc[2]; ++k)
        for (int j = 0; j < nloc[1]; ++j)
            for (int i = 0; i < nloc[0]; ++i, ++a) {
                const std::array<int, 3> loc{i, j, k};
                const double w = net_.weights[gidx[a]];
                double val = w;
                for (int d = 0; d < dp; ++d) val *= uni[d][0][loc[d]];
                Nw[a] = val;
                W += val;
                for (int d1 = 0; d1 < dp && order >= 1; ++d1) {
                    double der = w;
                    for (int d = 0; d < dp; ++d) der *= uni[d][d == d1 ? 1 : 0][loc[d]];
                    dNw(a, d1) = der;
                    Wd[d1] += der;
                }
                if (order >= 2) {
                    for (int d1 = 0; d1 < dp; ++d1)
                        for (int d2 = d1; d2 < dp; ++d2) {
                            double der = w;
                            for (int d = 0; d < dp; ++d) {
                                int o = (d == d1 ? 1 : 0) + (d == d2 ? 1 : 0);
                                der *= uni[d][o][loc[d]];
                            }
                            const int c = sym_col(d1, d2, dp);
                            d2Nw(a, c) = der;
                            Wdd[c] += der;
                        }
                }
            }

    // rational basis by the quotient rule (applied twice for order 2)
    out.R.resize(nen);
    out.dR = DenseMatrix(nen, std::max(dp, 1));
    if (order >= 2) out.d2R = DenseMatrix(nen, n2);
    const double invW = 1.0 / W;
    for (int b = 0; b < nen; ++b) {
        out.R[b] = Nw[b] * invW;
        if (order >= 1)
            for (int d1 = 0; d1 < dp; ++d1)
                out.dR(b, d1) = (dNw(b, d1) - out.R[b] * Wd[d1]) * invW;
        if (order >= 2)
            for (int d1 = 0; d1 < dp; ++d1)
                for (int d2 = d1; d2 < dp; ++d2) {
                    const int c = sym_col(d1, d2, dp);
                    out.d2R(b, c) = (d2Nw(b, c) - out.dR(b, d1) * Wd[d2] -
                                     out.dR(b, d2) * Wd[d1] - out.R[b] * Wdd[c]) *
                                    invW;
                }
    }
    return out;
}

Vec3 NurbsPatch::eval_point(const Vec3& xi) const {
    const BasisDers bd = basis_ders(xi, 0);
    const std::vector<int> gidx = active_controls(bd.span);
    Vec3 x;
    for (size_t a = 0; a < gidx.size(); ++a) x += bd.R[a] * net_.points[gidx[a]];
    return x;
}

NurbsPatch NurbsPatch::boundary_patch(int face, std::vector<int>& control_map) const {
    const int dir = face / 2;
    const bool upper = face % 2 == 1;
    if (dir < 0 || dir >= dim() || dim() < 2)
        throw std::invalid_argument("boundary_patch: invalid face id");

    const int fixed = upper ? net_.dims[dir] - 1 : 0;
    std::vector<KnotVector> bkvs;
    ControlNet bnet;
    std::array<int, 3> grid{0, 0, 0};  // remaining directions
    int g = 0;
    for (int d = 0; d < dim(); ++d)
        if (d != dir) {
            bkvs.push_back(kvs_[d]);
            bnet.dims[g] = net_.dims[d];
            grid[g] = d;
            ++g;
        }

    control_map.clear();
    std::array<int, 3> ijk{0, 0, 0};
    ijk[dir] = fixed;
    const int nu = bnet.dims[0], nv = bnet.dims[1];
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            ijk[grid[0]] = i;
            if (g > 1) ijk[grid[1]] = j;
            const int A = net_.index(ijk[0], ijk[1], ijk[2]);
            control_map.push_back(A);
            bnet.points.push_back(net_.points[A]);
            bnet.weights.push_back(net_.weights[A]);
        }
    return NurbsPatch(std::move(bkvs), std::move(bnet), ds_);
}

std::string NurbsPatch::to_json() const {
    nlohmann::json j;
    j["degrees"] = nlohmann::json::array();
    j["knots"] = nlohmann::json::array();
    for (int d = 0; d < dim(); ++d) {
        j["degrees"].push_back(degree(d));
        j["knots"].push_back(kvs_[d].knots());
    }
    j["dims"] = std::vector<int>(net_.dims.begin(), net_.dims.begin() + dim());
    j["spatial_dim"] = ds_;
    std::vector<double> pts;
    pts.reserve(net_.points.size() * ds_);
    for (const Vec3& P : net_.points)
        for (int c = 0; c < ds_; ++c) pts.push_back(P[c]);
    j["points"] = pts;
    j["weights"] = net_.weights;
    return j.dump(2);
}

NurbsPatch NurbsPatch::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const int dp = int(j.at("degrees").size());
    const int ds = j.at("spatial_dim").get<int>();
    std::vector<KnotVector> kvs;
    for (int d = 0; d < dp; ++d)
        kvs.emplace_back(j.at("degrees")[d].get<int>(),
                         j.at("knots")[d].get<std::vector<double>>());
    ControlNet net;
    const auto dims = j.at("dims").get<std::vector<int>>();
    for (int d = 0; d < dp; ++d) net.dims[d] = dims[d];
    const auto pts = j.at("points").get<std::vector<double>>();
    net.weights = j.at("weights").get<std::vector<double>>();
    if (pts.size() != net.weights.size() * ds)
        throw std::invalid_argument("patch json: points/weights size mismatch");
    net.points.resize(net.weights.size());
    for (size_t a = 0; a < net.points.size(); ++a)
        for (int c = 0; c < ds; ++c) net.points[a][int(c)] = pts[a * ds + c];
    return NurbsPatch(std::move(kvs), std::move(net), ds);
}

} // namespace iga
