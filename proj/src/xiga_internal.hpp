#pragma once

// Internals shared between the enriched assembly and the interaction
// integral. Not part of the public surface.

#include "iga/xiga.hpp"

namespace iga::detail {

struct PointBasis {
    std::vector<double> val;
    std::vector<Vec3> grad;
    std::vector<int> base;  // first dof (x component) of each scalar function
};

void level_set_values(const CrackGeometry& crack, const Vec3& x, double& phi, double& psi);

void tip_polar(const CrackGeometry& crack, const Vec3& x, double& r, double& theta);

PointBasis enriched_point_basis(const NurbsPatch& patch, const EnrichmentState& enr,
                                const CrackGeometry& crack, const LevelSetField* cp_ls,
                                const MappedPoint& mp, const std::vector<int>& conn, int side,
                                double h_int);

void point_basis_B(const PointBasis& pb, int ds, DenseMatrix& B, std::vector<int>& dofs);

/// Stress (Voigt) of the enriched solution at a parent point of an element.
std::array<double, 6> enriched_stress(const NurbsPatch& patch, const IgaMesh& mesh,
                                      const EnrichmentState& enr, const CrackGeometry& crack,
                                      const LevelSetField* cp_ls, const MaterialModel& mat,
                                      const std::vector<double>& u, int element, const Vec3& xt,
                                      int side = 0);

/// Displacement gradient (du_i/dx_j, row-major ds x ds) at a parent point.
std::array<double, 9> enriched_disp_gradient(const NurbsPatch& patch, const IgaMesh& mesh,
                                             const EnrichmentState& enr,
                                             const CrackGeometry& crack,
                                             const LevelSetField* cp_ls,
                                             const std::vector<double>& u, int element,
                                             const Vec3& xt);

double element_size(const VisualizationMesh& vis, int e);

} // namespace iga::detail
