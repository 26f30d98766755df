#pragma once

#include <optional>

#include "iga/assembly.hpp"
#include "iga/post.hpp"

namespace iga {

/// Stationary traction-free crack. 2D: an open polyline whose last vertex is
/// the tip. 3D: a planar rectangle (corners ordered so the edge from
/// corner 1 to corner 2 is the crack front).
struct CrackGeometry {
    std::vector<Vec3> polyline;           // 2D
    std::array<Vec3, 4> rect{};           // 3D
    bool is3d = false;

    Vec3 tip() const;       // 2D tip / 3D front midpoint
    Vec3 tangent() const;   // in-plane advance direction at the tip (local x1)
    Vec3 normal() const;    // crack normal (local x2 in 2D)
};

/// Signed side of the crack: +1 when (x - x*) . n >= 0 for the closest crack
/// point x*. `tie_dir` breaks ties for points lying on the crack.
int heaviside(const Vec3& x, const CrackGeometry& crack, const Vec3& tie_dir = {0, 0, 0});

/// Normal/tangential level-set values (phi, psi) at the vis-mesh vertices.
struct LevelSetField {
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<double> chi;  // tangential coordinate from the crack mouth
};
LevelSetField compute_level_sets(const CrackGeometry& crack, const VisualizationMesh& vis);

/// Mode-I near-tip basis: B = [sqrt(r) sin t/2, sqrt(r) cos t/2,
/// sqrt(r) sin t/2 sin t, sqrt(r) cos t/2 sin t], with derivatives w.r.t.
/// (r, theta). Only B1 jumps across theta = +-pi.
struct BranchValues {
    std::array<double, 4> B{};
    std::array<double, 4> dBdr{};
    std::array<double, 4> dBdt{};
};
BranchValues branch_functions(double r, double theta);

/// r = sqrt(phi^2 + psi^2), theta = atan2(phi, psi); errors at the tip.
std::pair<double, double> polar_from_level_sets(double phi, double psi);

/// Per-control-point enrichment classification and extra-dof layout.
struct EnrichmentState {
    enum Tag { None = 0, Heaviside = 1, Tip = 2 };
    std::vector<int> tag;               // per control point
    std::vector<int> split_elems;
    std::vector<int> tip_elems;
    std::vector<int> extra_dof_start;   // per control point, -1 when unenriched
    int n_extra = 0;                    // extra dof count
    int n_comp = 2;

    bool element_enriched(const std::vector<int>& conn) const {
        for (int A : conn)
            if (tag[A] != None) return true;
        return false;
    }
    bool element_has_tip(const std::vector<int>& conn) const {
        for (int A : conn)
            if (tag[A] == Tip) return true;
        return false;
    }
};

/// Listing-style selection on the vis mesh: an element cut by the crack
/// (phi changes sign, psi < 0) tags its control points Heaviside; an element
/// containing the front (phi and psi both change sign) tags them Tip, and
/// tip tags win where both apply.
EnrichmentState select_enriched_nodes(const IgaMesh& mesh, const VisualizationMesh& vis,
                                      const LevelSetField& ls, int n_comp);

/// Control-point level-set values for the 3D interpolation path.
LevelSetField control_point_level_sets(const CrackGeometry& crack, const NurbsPatch& patch);

/// Extended stiffness: dofs = n_comp*n_np standard dofs, then the enriched
/// block (n_comp per Heaviside node, 4*n_comp per tip node). Cut and
/// tip-blending elements integrate with `enriched_quad` points per direction.
AssembledSystem assemble_enriched(const NurbsPatch& patch, const IgaMesh& mesh,
                                  const MaterialModel& mat, const EnrichmentState& enr,
                                  const CrackGeometry& crack, int enriched_quad = 13,
                                  int quad_order = 0);

/// Displacement of the enriched approximation at a parametric point; `side`
/// (+1/-1) selects the one-sided limit on the crack face.
Vec3 enriched_displacement(const NurbsPatch& patch, const IgaMesh& mesh,
                           const EnrichmentState& enr, const CrackGeometry& crack,
                           const std::vector<double>& u, const Vec3& xi, int side = 0);

/// Exact mode-I fields. Plane-strain Westergaard forms; K_I = sigma sqrt(pi a).
struct LefmCase {
    double a = 1.0;       // crack length parameter
    double E = 1.0;
    double nu = 0.3;
    double sigma = 1.0;   // remote tension
    double KI() const;
};
/// 2D near-tip displacement in the global frame for a crack with the given
/// tip and tangent/normal frame.
Vec3 griffith_displacement(const LefmCase& c, const Vec3& x, const CrackGeometry& crack);
/// 2D near-tip stress (xx, yy, xy) in the global frame.
std::array<double, 6> griffith_stress(const LefmCase& c, const Vec3& x,
                                      const CrackGeometry& crack);
/// 3D through-thickness mode-I displacement (u_y = 0): opening along the
/// crack normal, sliding along the advance direction.
Vec3 mode_I_3d_displacement(const LefmCase& c, const Vec3& x, const CrackGeometry& crack);
/// Matching plane-strain stress in the global frame, Voigt
/// (xx, yy, zz, yz, xz, xy).
std::array<double, 6> mode_I_3d_stress(const LefmCase& c, const Vec3& x,
                                       const CrackGeometry& crack);

/// Mode-I stress intensity factor by the equivalent-domain interaction
/// integral; the weight function is 1 at vis nodes within
/// rd * (tip element diameter) of the tip and interpolated bilinearly.
double sif_interaction_integral(const NurbsPatch& patch, const IgaMesh& mesh,
                                const VisualizationMesh& vis, const EnrichmentState& enr,
                                const CrackGeometry& crack, const MaterialModel& mat,
                                const std::vector<double>& u, double rd = 3.0,
                                int quad_order = 7);

/// Crack-conforming Q4 mesh with doubled nodes along the crack and one-sided
/// displacement values; crack-face stresses are zeroed. 2D, straight
/// horizontal cracks (the shape the verification cases use).
struct CrackedVisMesh {
    std::vector<Vec3> nodes;
    std::vector<std::vector<int>> cells;
    std::vector<Vec3> displacement;
    std::vector<std::array<double, 6>> stress;
    int n_stress = 3;
    std::vector<std::pair<int, int>> doubled;  // (upper node, lower node)
};
CrackedVisMesh cracked_vis_mesh(const VisualizationMesh& vis, const NurbsPatch& patch,
                                const IgaMesh& mesh, const EnrichmentState& enr,
                                const CrackGeometry& crack, const MaterialModel& mat,
                                const std::vector<double>& u);

/// Displacement jump across the crack at a physical point on the face:
/// 2 sum R_J a_J + 2 sqrt(r) sum R_K b1_K.
Vec3 displacement_jump(const NurbsPatch& patch, const IgaMesh& mesh,
                       const EnrichmentState& enr, const CrackGeometry& crack,
                       const std::vector<double>& u, const Vec3& xi);

} // namespace iga
