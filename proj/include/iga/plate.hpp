#pragma once

#include "iga/assembly.hpp"
#include "iga/post.hpp"

namespace iga {

struct PlateMaterial {
    double E = 1.0;
    double nu = 0.0;
    double thickness = 1.0;
    double rigidity() const { return E * thickness * thickness * thickness /
                                     (12.0 * (1.0 - nu * nu)); }
};

/// Bending constitutive matrix D = Eh^3/(12(1-nu^2)) [[1,nu,0],[nu,1,0],[0,0,(1-nu)/2]].
DenseMatrix plate_D(const PlateMaterial& mat);

/// Second spatial derivatives of the basis functions at a parent point:
/// rows (d2/dx2, d2/dy2, d2/dxdy), one column per local function.
DenseMatrix second_spatial_derivatives(const NurbsPatch& patch, const IgaMesh& mesh,
                                       int element, const Vec3& xt);

/// Rotation-free Kirchhoff bending stiffness, one deflection dof per control
/// point. Requires p, q >= 2 (the basis must be C1 across elements).
AssembledSystem assemble_plate(const NurbsPatch& patch, const IgaMesh& mesh,
                               const PlateMaterial& mat, int quad_order = 0);

/// Uniform transverse pressure load.
void add_uniform_pressure(const NurbsPatch& patch, const IgaMesh& mesh, double q,
                          AssembledSystem& sys);

/// Transverse point load applied through basis values at the parametric
/// preimage of `location` (Newton inversion of the geometry map).
void add_point_load(const NurbsPatch& patch, const IgaMesh& mesh, const Vec3& location,
                    double P, AssembledSystem& sys);

/// Newton inversion of eval_point; throws on non-convergence.
Vec3 locate_parameter(const NurbsPatch& patch, const Vec3& target, double tol = 1e-12);

/// Control-point indices of the `rows` outermost rows along a face.
std::vector<int> boundary_rows(const NurbsPatch& patch, int face, int rows);

/// Clamp faces by fixing the deflection of the two outermost control-point
/// rows (one row = simply supported).
void clamp_boundary(AssembledSystem& sys, const NurbsPatch& patch,
                    const std::vector<int>& faces, int rows = 2);

/// Pairs (edge control point, next-row control point) along a face, for
/// symmetry conditions via couple_dofs_penalty.
std::vector<std::pair<int, int>> symmetry_pairs(const NurbsPatch& patch, int face);

/// Deflection and bending moments (Mxx, Myy, Mxy) on the vis mesh.
ResultBundle recover_plate(const std::vector<double>& w, const NurbsPatch& patch,
                           const IgaMesh& mesh, const VisualizationMesh& vis,
                           const PlateMaterial& mat);

} // namespace iga
