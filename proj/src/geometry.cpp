#include "iga/geometry.hpp"

#include <cmath>

namespace iga {

KnotVector uniform_open_knots(int degree, int n_spans) {
    std::vector<double> U;
    for (int i = 0; i <= degree; ++i) U.push_back(0.0);
    for (int i = 1; i < n_spans; ++i) U.push_back(double(i) / n_spans);
    for (int i = 0; i <= degree; ++i) U.push_back(1.0);
    return KnotVector(degree, std::move(U));
}

NurbsPatch line_patch(double x0, double x1, int degree, int n_spans) {
    KnotVector kv = uniform_open_knots(degree, n_spans);
    ControlNet net;
    net.dims = {kv.num_basis(), 1, 1};
    for (int i = 0; i < net.dims[0]; ++i) {
        const double t = kv.greville(i);
        net.points.push_back({x0 + (x1 - x0) * t, 0, 0});
        net.weights.push_back(1.0);
    }
    return NurbsPatch({kv}, std::move(net), 1);
}

NurbsPatch rectangle_patch(double lx, double ly, int px, int py, int nex, int ney) {
    KnotVector ku = uniform_open_knots(px, nex);
    KnotVector kv = uniform_open_knots(py, ney);
    ControlNet net;
    net.dims = {ku.num_basis(), kv.num_basis(), 1};
    for (int j = 0; j < net.dims[1]; ++j)
        for (int i = 0; i < net.dims[0]; ++i) {
            net.points.push_back({lx * ku.greville(i), ly * kv.greville(j), 0});
            net.weights.push_back(1.0);
        }
    return NurbsPatch({ku, kv}, std::move(net), 2);
}

NurbsPatch box_patch(double lx, double ly, double lz, int px, int py, int pz, int nex, int ney,
                     int nez) {
    KnotVector ku = uniform_open_knots(px, nex);
    KnotVector kv = uniform_open_knots(py, ney);
    KnotVector kw = uniform_open_knots(pz, nez);
    ControlNet net;
    net.dims = {ku.num_basis(), kv.num_basis(), kw.num_basis()};
    for (int k = 0; k < net.dims[2]; ++k)
        for (int j = 0; j < net.dims[1]; ++j)
            for (int i = 0; i < net.dims[0]; ++i) {
                net.points.push_back(
                    {lx * ku.greville(i), ly * kv.greville(j), lz * kw.greville(k)});
                net.weights.push_back(1.0);
            }
    return NurbsPatch({ku, kv, kw}, std::move(net), 3);
}

NurbsPatch unit_square() { return rectangle_patch(1.0, 1.0, 1, 1, 1, 1); }

NurbsPatch quarter_circle_arc() {
    KnotVector kv(2, {0, 0, 0, 1, 1, 1});
    ControlNet net;
    net.dims = {3, 1, 1};
    net.points = {{1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    net.weights = {1.0, 1.0 / std::sqrt(2.0), 1.0};
    return NurbsPatch({kv}, std::move(net), 2);
}

NurbsPatch quarter_annulus(double a, double b) {
    KnotVector ku(2, {0, 0, 0, 1, 1, 1});  // arc
    KnotVector kv(1, {0, 0, 1, 1});        // radial
    ControlNet net;
    net.dims = {3, 2, 1};
    const double w = 1.0 / std::sqrt(2.0);
    net.points = {{a, 0, 0}, {a, a, 0}, {0, a, 0}, {b, 0, 0}, {b, b, 0}, {0, b, 0}};
    net.weights = {1, w, 1, 1, w, 1};
    return NurbsPatch({ku, kv}, std::move(net), 2);
}

NurbsPatch plate_with_hole(double L, double R) {
    KnotVector ku(2, {0, 0, 0, 0.5, 1, 1, 1});  // along the arc, 2 elements
    KnotVector kv(2, {0, 0, 0, 1, 1, 1});       // radial (hole edge to outer corner)
    ControlNet net;
    net.dims = {4, 3, 1};
    const double s = std::sqrt(2.0) - 1.0;
    const double wa = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
    // hole edge row (exact circular arc split at 45 degrees)
    net.points = {{-R, 0, 0},          {-R, R * s, 0},       {-R * s, R, 0}, {0, R, 0},
                  // intermediate row
                  {-0.625 * L, 0, 0},  {-0.625 * L, 0.1875 * L, 0},
                  {-0.1875 * L, 0.625 * L, 0}, {0, 0.625 * L, 0},
                  // outer boundary row; the corner point is repeated
                  {-L, 0, 0},          {-L, L, 0},           {-L, L, 0},     {0, L, 0}};
    net.weights = {1, wa, wa, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    return NurbsPatch({ku, kv}, std::move(net), 2);
}

NurbsPatch cylinder_octant(double radius, double thickness, double half_length) {
    // 90-degree arc in the x-y plane (exact), linear radial and axial
    KnotVector ku(2, {0, 0, 0, 1, 1, 1});
    KnotVector kv(1, {0, 0, 1, 1});
    KnotVector kw(1, {0, 0, 1, 1});
    ControlNet net;
    net.dims = {3, 2, 2};
    const double w = 1.0 / std::sqrt(2.0);
    const double r0 = radius - 0.5 * thickness, r1 = radius + 0.5 * thickness;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            const double r = j == 0 ? r0 : r1;
            const double z = k == 0 ? 0.0 : half_length;
            net.points.push_back({r, 0, z});
            net.points.push_back({r, r, z});
            net.points.push_back({0, r, z});
            net.weights.push_back(1.0);
            net.weights.push_back(w);
            net.weights.push_back(1.0);
        }
    return NurbsPatch({ku, kv, kw}, std::move(net), 3);
}

} // namespace iga
