#include "iga/mesh.hpp"

#include <ostream>
#include <stdexcept>

namespace iga {

DirConnectivity build_connectivity(const KnotVector& kv) {
    if (!kv.is_open()) throw std::invalid_argument("build_connectivity: open knot vector required");
    DirConnectivity out;
    const std::vector<double>& U = kv.knots();
    const int p = kv.degree();
    // zero-parametric-length spans are discarded here and never numbered
    for (int s = p; s < kv.num_basis(); ++s) {
        if (U[s + 1] <= U[s]) continue;
        out.ranges.push_back({U[s], U[s + 1]});
        std::vector<int> funcs(p + 1);
        for (int a = 0; a <= p; ++a) funcs[a] = s - p + a;
        out.conn.push_back(std::move(funcs));
    }
    return out;
}

Vec3 IgaMesh::midpoint(int e) const {
    Vec3 m;
    for (int d = 0; d < dim; ++d) {
        const auto r = range(e, d);
        m[d] = 0.5 * (r[0] + r[1]);
    }
    return m;
}

IgaMesh generate_mesh(const NurbsPatch& patch) {
    IgaMesh mesh;
    mesh.dim = patch.dim();
    mesh.n_np = patch.num_controls();

    std::array<DirConnectivity, 3> dc;
    for (int d = 0; d < mesh.dim; ++d) {
        dc[d] = build_connectivity(patch.kv(d));
        mesh.el_range[d] = dc[d].ranges;
        mesh.nel_dir[d] = int(dc[d].ranges.size());
    }
    for (int d = mesh.dim; d < 3; ++d) {
        dc[d].ranges.push_back({0.0, 0.0});
        dc[d].conn.push_back({0});
    }

    mesh.n_el = mesh.nel_dir[0] * mesh.nel_dir[1] * mesh.nel_dir[2];
    mesh.n_en = 1;
    for (int d = 0; d < mesh.dim; ++d) mesh.n_en *= patch.degree(d) + 1;

    const auto& dims = patch.net().dims;
    mesh.element.reserve(mesh.n_el);
    mesh.index.reserve(mesh.n_el);
    for (int ew = 0; ew < int(dc[2].conn.size()); ++ew)
        for (int ev = 0; ev < int(dc[1].conn.size()); ++ev)
            for (int eu = 0; eu < int(dc[0].conn.size()); ++eu) {
                std::vector<int> row;
                row.reserve(mesh.n_en);
                for (int k : dc[2].conn[ew])
                    for (int j : dc[1].conn[ev])
                        for (int i : dc[0].conn[eu])
                            row.push_back(i + dims[0] * (j + dims[1] * k));
                mesh.element.push_back(std::move(row));
                mesh.index.push_back({eu, ev, ew});
            }
    return mesh;
}

void IgaMesh::dump(std::ostream& os) const {
    os << "element (" << n_el << " x " << n_en << ", 1-based):\n";
    for (const auto& row : element) {
        for (size_t a = 0; a < row.size(); ++a) os << (a ? " " : "  ") << row[a] + 1;
        os << "\n";
    }
    const char* names[3] = {"elRangeU", "elRangeV", "elRangeW"};
    for (int d = 0; d < dim; ++d) {
        os << names[d] << ":\n";
        for (const auto& r : el_range[d]) os << "  " << r[0] << " " << r[1] << "\n";
    }
}

BoundaryMesh extract_boundary(const NurbsPatch& patch, int face) {
    std::vector<int> cmap;
    NurbsPatch bpatch = patch.boundary_patch(face, cmap);
    IgaMesh bmesh = generate_mesh(bpatch);
    return BoundaryMesh{std::move(bpatch), std::move(bmesh), std::move(cmap), face};
}

VisualizationMesh build_vis_mesh(const IgaMesh& mesh, const NurbsPatch& patch) {
    VisualizationMesh vis;
    std::array<std::vector<double>, 3> uq;
    for (int d = 0; d < patch.dim(); ++d) {
        uq[d] = patch.kv(d).unique_knots();
        vis.grid[d] = int(uq[d].size());
    }
    for (int d = patch.dim(); d < 3; ++d) uq[d] = {0.0};

    vis.nodes.reserve(size_t(vis.grid[0]) * vis.grid[1] * vis.grid[2]);
    for (int k = 0; k < vis.grid[2]; ++k)
        for (int j = 0; j < vis.grid[1]; ++j)
            for (int i = 0; i < vis.grid[0]; ++i) {
                const Vec3 xi{uq[0][i], uq[1][std::min<size_t>(j, uq[1].size() - 1)],
                              uq[2][std::min<size_t>(k, uq[2].size() - 1)]};
                vis.param.push_back(xi);
                vis.nodes.push_back(patch.eval_point(xi));
            }

    switch (patch.dim()) {
        case 1: vis.vtk_cell_type = 3; break;
        case 2: vis.vtk_cell_type = 9; break;
        default: vis.vtk_cell_type = 12; break;
    }

    // one cell per IGA element, in element order
    for (int e = 0; e < mesh.n_el; ++e) {
        const auto& ix = mesh.index[e];
        const int i = ix[0], j = ix[1], k = ix[2];
        std::vector<int> cell;
        if (patch.dim() == 1) {
            cell = {vis.node_index(i, 0, 0), vis.node_index(i + 1, 0, 0)};
        } else if (patch.dim() == 2) {
            cell = {vis.node_index(i, j, 0), vis.node_index(i + 1, j, 0),
                    vis.node_index(i + 1, j + 1, 0), vis.node_index(i, j + 1, 0)};
        } else {
            cell = {vis.node_index(i, j, k),         vis.node_index(i + 1, j, k),
                    vis.node_index(i + 1, j + 1, k), vis.node_index(i, j + 1, k),
                    vis.node_index(i, j, k + 1),     vis.node_index(i + 1, j, k + 1),
                    vis.node_index(i + 1, j + 1, k + 1), vis.node_index(i, j + 1, k + 1)};
        }
        vis.cells.push_back(std::move(cell));
    }
    return vis;
}

} // namespace iga
