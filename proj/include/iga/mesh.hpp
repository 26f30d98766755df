#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "iga/patch.hpp"

namespace iga {

/// Per-direction connectivity: for each non-degenerate span, its parametric
/// bounds and the 0-based indices of the p+1 functions supported on it.
struct DirConnectivity {
    std::vector<std::array<double, 2>> ranges;
    std::vector<std::vector<int>> conn;
};

DirConnectivity build_connectivity(const KnotVector& kv);

/// Element table of a patch. Elements are numbered x-fastest over the grid of
/// non-degenerate spans; `element[e]` lists global control-point indices in
/// the same local ordering the basis evaluation uses. All indices 0-based
/// (printed forms are 1-based to match the usual conventions).
struct IgaMesh {
    std::vector<std::vector<int>> element;                       // n_el x n_en
    std::array<std::vector<std::array<double, 2>>, 3> el_range;  // per direction
    std::vector<std::array<int, 3>> index;                       // element -> span-grid position
    std::array<int, 3> nel_dir{1, 1, 1};
    int n_el = 0;
    int n_np = 0;
    int n_en = 0;
    int dim = 0;

    /// Parametric bounds of element e in direction d.
    std::array<double, 2> range(int e, int d) const { return el_range[d][index[e][d]]; }

    /// Parametric midpoint (used to locate an element's span for evaluation).
    Vec3 midpoint(int e) const;

    void dump(std::ostream& os) const;
};

IgaMesh generate_mesh(const NurbsPatch& patch);

/// Mesh of one patch face (an edge of a surface, a face of a volume), plus
/// the map from face-local control-point index to patch control-point index.
struct BoundaryMesh {
    NurbsPatch patch;
    IgaMesh mesh;
    std::vector<int> control_map;
    int face = -1;
};

BoundaryMesh extract_boundary(const NurbsPatch& patch, int face);

/// Linear mesh over the images of the unique-knot grid: segments in 1D,
/// Q4 quads in 2D, 8-node bricks in 3D. Cell c corresponds to element c of
/// the IGA mesh. `param` keeps the parametric coordinates of each node.
struct VisualizationMesh {
    std::vector<Vec3> nodes;
    std::vector<Vec3> param;
    std::vector<std::vector<int>> cells;
    std::array<int, 3> grid{1, 1, 1};  // node counts per direction
    int vtk_cell_type = 0;             // 3 line, 9 quad, 12 hexahedron

    int node_index(int i, int j, int k) const { return i + grid[0] * (j + grid[1] * k); }
};

VisualizationMesh build_vis_mesh(const IgaMesh& mesh, const NurbsPatch& patch);

} // namespace iga
