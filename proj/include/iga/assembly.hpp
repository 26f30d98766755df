#pragma once

#include <functional>

#include "iga/mesh.hpp"
#include "iga/quadrature.hpp"
#include "iga/sparse.hpp"

namespace iga {

enum class ElasticityMode { PlaneStress, PlaneStrain, Solid3D };

struct MaterialModel {
    double E = 1.0;
    double nu = 0.0;
    ElasticityMode mode = ElasticityMode::PlaneStress;
};

/// 3x3 (plane) or 6x6 (solid) elasticity matrix. Voigt order
/// (xx, yy, xy) in 2D and (xx, yy, zz, yz, xz, xy) in 3D.
DenseMatrix elasticity_D(const MaterialModel& mat);

/// Strain-displacement matrix for interleaved dofs at one mapped point.
/// 2D: 3 x 2n with columns (ux_a, uy_a); 3D: 6 x 3n.
void strain_displacement(const MappedPoint& mp, int ds, DenseMatrix& B);

/// Number of quadrature points per direction used by default: p_d + 1.
std::array<int, 3> default_orders(const NurbsPatch& patch);

/// 1D Poisson: k_ab = int R'_a R'_b |J|, f_a = int R_a b. One dof per
/// control point; Dirichlet data enters later through the bc module.
AssembledSystem assemble_poisson_1d(const NurbsPatch& patch, const IgaMesh& mesh,
                                    const std::function<double(double)>& source,
                                    int quad_order = 0, int source_quad_order = 0);

/// 2D/3D linear elasticity, K_e = int B^T D B. Dofs interleaved per control
/// point: (ux_1, uy_1[, uz_1], ux_2, ...).
AssembledSystem assemble_elasticity(const NurbsPatch& patch, const IgaMesh& mesh,
                                    const MaterialModel& mat, int quad_order = 0);

/// Add a body-force contribution f_A += int R_A b(x) to an elasticity system.
void assemble_body_force(const NurbsPatch& patch, const IgaMesh& mesh,
                         const std::function<Vec3(const Vec3&)>& body, AssembledSystem& sys,
                         int quad_order = 0);

/// Traction term over a boundary mesh: f_A += int R_A tbar(x) dGamma,
/// scattered through the boundary-to-patch control map.
void assemble_traction(const BoundaryMesh& bnd, const std::function<Vec3(const Vec3&)>& traction,
                       AssembledSystem& sys, int quad_order = 0);

/// Element loop parallelism; reads IGACORE_THREADS (default 1). Results are
/// deterministic: per-element outputs land in preassigned slots.
int assembly_thread_count();
void parallel_elements(int n_el, const std::function<void(int)>& body);

} // namespace iga
