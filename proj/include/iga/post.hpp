#pragma once

#include <functional>
#include <map>
#include <string>

#include "iga/assembly.hpp"
#include "iga/mesh.hpp"

namespace iga {

/// Nodal results on the visualization mesh plus per-case scalar metrics.
struct ResultBundle {
    std::vector<Vec3> displacement;           // per vis node
    std::vector<std::array<double, 6>> stress;  // per vis node, n_stress used
    int n_stress = 0;                         // 3 in 2D (xx,yy,xy), 6 in 3D
    std::map<std::string, double> metrics;
};

/// Stress components at one parent point of one element.
/// 2D order (xx, yy, xy); 3D order (xx, yy, zz, yz, xz, xy).
std::array<double, 6> stress_at(const NurbsPatch& patch, const IgaMesh& mesh, int element,
                                const Vec3& xt, const MaterialModel& mat,
                                const std::vector<double>& u);

/// Displacements and stresses at the visualization-mesh nodes. Nodes whose
/// geometry map degenerates (coincident control points at a corner) are
/// evaluated at a point shifted into the element by 1e-6 of the span.
ResultBundle recover_elasticity(const std::vector<double>& u, const NurbsPatch& patch,
                                const IgaMesh& mesh, const VisualizationMesh& vis,
                                const MaterialModel& mat);

/// Scalar-field recovery (1D problems): solution value per vis node in
/// displacement.x.
ResultBundle recover_scalar(const std::vector<double>& u, const NurbsPatch& patch,
                            const IgaMesh& mesh, const VisualizationMesh& vis);

/// Scalar field value at a parametric point.
double scalar_field_at(const NurbsPatch& patch, const std::vector<double>& u, const Vec3& xi);

/// Displacement vector at a parametric point (n_comp interleaved dofs).
Vec3 vector_field_at(const NurbsPatch& patch, const std::vector<double>& u, int n_comp,
                     const Vec3& xi);

struct ErrorNorms {
    double l2 = 0.0;      // relative L2 displacement error
    double energy = 0.0;  // relative energy-norm error (strains against exact)
};

/// Relative L2 / energy error of an elasticity solution against an exact
/// displacement (and optional exact strain) field, order p+2 quadrature.
ErrorNorms error_norms(const std::vector<double>& u, const NurbsPatch& patch,
                       const IgaMesh& mesh, const MaterialModel& mat,
                       const std::function<Vec3(const Vec3&)>& exact_disp,
                       const std::function<std::array<double, 6>(const Vec3&)>& exact_strain =
                           nullptr);

/// Scalar variant for 1D problems: exact value and derivative functions.
ErrorNorms error_norms_scalar(const std::vector<double>& u, const NurbsPatch& patch,
                              const IgaMesh& mesh,
                              const std::function<double(double)>& exact,
                              const std::function<double(double)>& exact_deriv = nullptr);

/// Relative L2 norm of the stress error over the domain.
double stress_l2_error(const std::vector<double>& u, const NurbsPatch& patch,
                       const IgaMesh& mesh, const MaterialModel& mat,
                       const std::function<std::array<double, 6>(const Vec3&)>& exact_stress);

/// Strain energy 0.5 u^T K u of a finalized system.
double strain_energy(AssembledSystem& sys, const std::vector<double>& u);

} // namespace iga
