#pragma once

#include <array>
#include <functional>
#include <utility>

#include "iga/assembly.hpp"

namespace iga {

enum class BcMethod { Direct, Penalty, Lagrange, LeastSquares };

/// Eliminate dofs symmetrically: K rows/cols zeroed, unit diagonal, rhs
/// carries the lift term. Keeps a snapshot of the unconstrained system the
/// first time so reactions can be recovered later.
void apply_direct(AssembledSystem& sys, const std::vector<int>& dofs,
                  const std::vector<double>& values);

/// Constrain the marked displacement components on a boundary with the weak
/// penalty form: K += alpha int N N^T dGamma, F += alpha int N gbar dGamma.
void apply_penalty(AssembledSystem& sys, const BoundaryMesh& bnd, std::array<bool, 3> comps,
                   const std::function<Vec3(const Vec3&)>& value, double alpha, int n_comp,
                   int quad_order = 0);

/// Constrain via Lagrange multiplier rows collocated at the Greville
/// abscissae of the boundary; collocation points repeated across faces are
/// dropped so the constraint block keeps full rank.
void apply_lagrange(AssembledSystem& sys, const BoundaryMesh& bnd, std::array<bool, 3> comps,
                    const std::function<Vec3(const Vec3&)>& value, int n_comp);

/// Boundary control values from the least-squares fit of gbar at collocation
/// points (uniform in parameter, n_c per boundary element).
struct ProjectedBoundaryValues {
    std::vector<int> controls;       // patch control-point indices
    std::vector<Vec3> values;        // fitted control values per component
};
ProjectedBoundaryValues least_squares_project(const BoundaryMesh& bnd,
                                              const std::function<Vec3(const Vec3&)>& value,
                                              int n_collocation_per_element = 4);

/// Impose projected boundary values by direct elimination.
void apply_projected_direct(AssembledSystem& sys, const ProjectedBoundaryValues& proj,
                            std::array<bool, 3> comps, int n_comp);

/// Tie dof pairs together with the 2x2 penalty block w*[1 -1; -1 1].
void couple_dofs_penalty(AssembledSystem& sys, const std::vector<std::pair<int, int>>& pairs,
                         double w);

} // namespace iga
